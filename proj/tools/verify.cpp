#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ellid/runner.hpp"

using namespace ellid;

namespace {

std::vector<std::string> all_ids(EntryKind kind) {
  std::vector<std::string> ids;
  for (const auto& e : registry())
    if (e.kind == kind) ids.push_back(e.id);
  return ids;
}

std::vector<std::string> every_id() {
  std::vector<std::string> ids;
  for (const auto& e : registry()) ids.push_back(e.id);
  return ids;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int finish(const VerificationReport& rep) {
  for (const auto& r : rep.results) {
    std::cout << to_string(r.status) << "  " << r.id;
    if (r.kind == EntryKind::numeric) std::cout << "[" << r.index << "]  rel=" << r.rel_error;
    else std::cout << "  order=" << r.order;
    if (!r.message.empty()) std::cout << "  " << r.message;
    std::cout << '\n';
  }
  std::cout << rep.passed << " passed, " << rep.failed << " failed, " << rep.errors << " errors in " << rep.seconds
            << " s\n";
  if (!rep.config.output_path.empty()) write_report(rep, rep.config.output_path);
  return rep.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verify elliptic hypergeometric identities numerically and as exact series"};
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "run seeded identity checks");
  std::vector<std::string> ids;
  bool all = false;
  long samples = 0;
  std::uint64_t seed = 0;
  double tol = 0;
  std::string out, config, precision;
  unsigned threads = 0;
  long order = 0;
  verify->add_option("--ids", ids, "identity ids")->delimiter(',');
  verify->add_flag("--all", all, "run every registered identity");
  verify->add_option("--samples", samples, "samples per numeric identity");
  verify->add_option("--seed", seed, "64-bit seed");
  verify->add_option("--tol", tol, "tolerance for every numeric identity requested");
  verify->add_option("--out", out, "JSON report path");
  verify->add_option("--config", config, "JSON config file");
  verify->add_option("--precision", precision, "standard or extended");
  verify->add_option("--threads", threads, "worker threads");
  verify->add_option("--order", order, "series order");

  auto* list = app.add_subcommand("list", "print the identity manifest");

  auto* series = app.add_subcommand("series-check", "run exact series checks");
  std::vector<std::string> series_ids;
  long series_order = 0;
  std::string series_out;
  series->add_option("--ids", series_ids, "series identity ids")->delimiter(',');
  series->add_option("--order", series_order, "truncation order");
  series->add_option("--out", series_out, "JSON report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*list) {
      const auto m = list_identities();
      for (const auto& e : m)
        std::cout << e.id << '\t' << (e.kind == EntryKind::series ? "series" : "numeric") << '\t' << e.citation
                  << '\t' << e.domain << '\n';
      std::cout << m.size() << " identities\n";
      return 0;
    }
    if (*series) {
      RunConfig c;
      c.ids = series_ids.empty() ? all_ids(EntryKind::series) : series_ids;
      for (const auto& id : c.ids)
        if (find_identity(id).kind != EntryKind::series) throw ConfigInvalid(id + " is not a series identity");
      if (series->count("--order")) c.series_order = series_order;
      c.output_path = series_out;
      c.validate();
      return finish(run_suite(c));
    }
    RunConfig c;
    if (!config.empty()) c = config_from_json(read_file(config));
    if (all) c.ids = every_id();
    else if (!ids.empty()) c.ids = ids;
    if (verify->count("--samples")) c.samples = samples;
    if (verify->count("--seed")) c.seed = seed;
    if (verify->count("--out")) c.output_path = out;
    if (verify->count("--threads")) c.threads = threads;
    if (verify->count("--order")) c.series_order = order;
    if (verify->count("--precision")) {
      if (precision == "standard") c.precision = Precision::standard;
      else if (precision == "extended") c.precision = Precision::extended;
      else throw ConfigInvalid("unknown precision mode " + precision);
    }
    if (verify->count("--tol")) {
      for (const auto& id : c.ids)
        if (find_identity(id).kind == EntryKind::numeric) c.tolerance_overrides[id] = tol;
    }
    c.validate();
    return finish(run_suite(c));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
