#include "ellid/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include <json.hpp>

namespace ellid {

using nlohmann::json;

namespace {

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

json cjson(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

Precision parse_precision(const std::string& s) {
  if (s == "standard") return Precision::standard;
  if (s == "extended") return Precision::extended;
  throw ConfigInvalid("unknown precision mode " + s);
}

struct Task {
  const IdentityEntry* entry;
  long index;
};

void judge(const IdentityEntry& e, const ParamSet& ps, Precision precision, IdentityResult& r) {
  r.params = ps;
  const Evaluation v = e.evaluate(r.params, precision);
  r.lhs = v.lhs;
  r.rhs = v.rhs;
  r.quad_error = v.quad_error;
  r.abs_scale = v.abs_scale;
  r.quadrature_bound = v.quadrature_bound;
  r.abs_error = std::abs(v.lhs - v.rhs);
  const double scale = v.abs_scale ? *v.abs_scale : std::abs(v.rhs);
  r.rel_error = r.abs_error / scale;
  const bool finite = is_finite(v.lhs) && is_finite(v.rhs) && std::isfinite(r.rel_error);
  const bool within = r.rel_error <= r.tolerance || (v.quadrature_bound && r.abs_error <= v.quad_error);
  r.status = finite && within ? Status::pass : Status::fail;
  if (!finite) r.message = "non-finite value";
}

void run_numeric(const IdentityEntry& e, long index, const RunConfig& cfg, IdentityResult& r) {
  auto it = cfg.tolerance_overrides.find(e.id);
  r.tolerance = it != cfg.tolerance_overrides.end() ? it->second : e.tolerance;
  SampleRng rng(cfg.seed, e.id, static_cast<std::uint64_t>(index));
  judge(e, e.sampler(rng), cfg.precision, r);
}

void run_series(const IdentityEntry& e, const RunConfig& cfg, IdentityResult& r) {
  r.order = cfg.series_order.value_or(e.default_order);
  const SeriesOutcome o = e.series_check(r.order);
  r.status = o.equal ? Status::pass : Status::fail;
  r.message = o.detail;
}

IdentityResult run_task(const Task& t, const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  IdentityResult r;
  r.id = t.entry->id;
  r.index = t.index;
  r.kind = t.entry->kind;
  try {
    if (t.entry->kind == EntryKind::series) run_series(*t.entry, cfg, r);
    else run_numeric(*t.entry, t.index, cfg, r);
  } catch (const std::exception& ex) {
    r.status = Status::error;
    r.message = ex.what();
  } catch (...) {
    r.status = Status::error;
    r.message = "unknown exception";
  }
  r.seconds = elapsed(t0);
  return r;
}

}  // namespace

std::string to_string(Status s) {
  switch (s) {
    case Status::pass:
      return "pass";
    case Status::fail:
      return "fail";
    default:
      return "error";
  }
}

void RunConfig::validate() const {
  if (ids.empty()) throw ConfigInvalid("no identity ids requested");
  if (samples < 1) throw ConfigInvalid("samples must be >= 1");
  if (series_order && *series_order < 1) throw ConfigInvalid("series order must be >= 1");
  if (threads < 1) throw ConfigInvalid("threads must be >= 1");
  for (const auto& id : ids) {
    try {
      find_identity(id);
    } catch (const UnknownIdentity&) {
      throw ConfigInvalid("unknown identity id " + id);
    }
  }
  for (const auto& [id, tol] : tolerance_overrides) {
    try {
      find_identity(id);
    } catch (const UnknownIdentity&) {
      throw ConfigInvalid("tolerance override for unknown identity id " + id);
    }
    if (!(tol > 0)) throw ConfigInvalid("tolerance for " + id + " must be positive");
  }
}

RunConfig config_from_json(const std::string& text) {
  RunConfig c;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& ex) {
    throw ConfigInvalid(std::string("config is not valid JSON: ") + ex.what());
  }
  try {
    if (j.contains("identity_ids")) c.ids = j.at("identity_ids").get<std::vector<std::string>>();
    if (j.contains("samples_per_identity")) c.samples = j.at("samples_per_identity").get<long>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("tolerance_overrides"))
      c.tolerance_overrides = j.at("tolerance_overrides").get<std::map<std::string, double>>();
    if (j.contains("series_order") && !j.at("series_order").is_null())
      c.series_order = j.at("series_order").get<long>();
    if (j.contains("output_path")) c.output_path = j.at("output_path").get<std::string>();
    if (j.contains("precision_mode")) c.precision = parse_precision(j.at("precision_mode").get<std::string>());
    if (j.contains("threads")) c.threads = j.at("threads").get<unsigned>();
  } catch (const json::exception& ex) {
    throw ConfigInvalid(std::string("config field has the wrong type: ") + ex.what());
  }
  return c;
}

VerificationReport run_suite(const RunConfig& config) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<Task> tasks;
  std::set<std::string> seen;
  for (const auto& id : config.ids) {
    if (!seen.insert(id).second) continue;
    const IdentityEntry& e = find_identity(id);
    if (e.kind == EntryKind::series) {
      tasks.push_back({&e, 0});
    } else {
      for (long i = 0; i < config.samples; ++i) tasks.push_back({&e, i});
    }
  }

  VerificationReport rep;
  rep.config = config;
  rep.results.resize(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) rep.results[i] = run_task(tasks[i], config);
  };
  const unsigned n = std::min<std::size_t>(config.threads, std::max<std::size_t>(tasks.size(), 1));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::stable_sort(rep.results.begin(), rep.results.end(), [](const IdentityResult& a, const IdentityResult& b) {
    return std::tie(a.id, a.index) < std::tie(b.id, b.index);
  });
  for (const auto& r : rep.results) {
    if (r.status == Status::pass) ++rep.passed;
    else if (r.status == Status::fail) ++rep.failed;
    else ++rep.errors;
  }
  rep.seconds = elapsed(t0);
  return rep;
}

IdentityResult check_params(const IdentityEntry& entry, const ParamSet& params, double tolerance,
                            Precision precision) {
  if (entry.kind != EntryKind::numeric) throw ConfigInvalid(entry.id + " is not a numeric identity");
  const auto t0 = std::chrono::steady_clock::now();
  IdentityResult r;
  r.id = entry.id;
  r.kind = entry.kind;
  r.params = params;
  r.tolerance = tolerance;
  try {
    judge(entry, params, precision, r);
  } catch (const std::exception& ex) {
    r.status = Status::error;
    r.message = ex.what();
  }
  r.seconds = elapsed(t0);
  return r;
}

std::string report_json(const VerificationReport& rep) {
  const RunConfig& c = rep.config;
  json cfg = {{"identity_ids", c.ids},
              {"samples_per_identity", c.samples},
              {"seed", c.seed},
              {"tolerance_overrides", c.tolerance_overrides},
              {"series_order", c.series_order ? json(*c.series_order) : json(nullptr)},
              {"output_path", c.output_path},
              {"precision_mode", to_string(c.precision)},
              {"threads", c.threads}};
  json results = json::array();
  for (const auto& r : rep.results) {
    json o = {{"id", r.id}, {"status", to_string(r.status)}, {"seconds", r.seconds}};
    if (r.kind == EntryKind::series) {
      o["kind"] = "series";
      o["order"] = r.order;
      o["comparison"] = "exact";
    } else {
      o["kind"] = "numeric";
      o["index"] = r.index;
      json params = json::object();
      for (const auto& p : r.params.values) params[p.name] = cjson(p.value);
      o["params"] = params;
      if (r.status != Status::error) {
        o["lhs"] = cjson(r.lhs);
        o["rhs"] = cjson(r.rhs);
        o["abs_error"] = r.abs_error;
        o["rel_error"] = r.rel_error;
        o["quad_error"] = r.quad_error;
        if (r.abs_scale) {
          o["abs_scale"] = *r.abs_scale;
          o["decision"] = r.quadrature_bound ? "abs_error <= max(tolerance * abs_scale, quad_error)"
                                             : "abs_error <= tolerance * abs_scale";
        } else {
          o["decision"] = "abs_error <= tolerance * |rhs|";
        }
      }
      o["tolerance"] = r.tolerance;
    }
    if (!r.message.empty()) o["message"] = r.message;
    results.push_back(std::move(o));
  }
  json doc = {{"schema_version", kReportSchema},
              {"toolkit_version", kToolkitVersion},
              {"arithmetic_mode", to_string(c.precision)},
              {"rng_scheme", kRngScheme},
              {"config", cfg},
              {"results", results},
              {"summary",
               {{"total", rep.results.size()},
                {"passed", rep.passed},
                {"failed", rep.failed},
                {"errors", rep.errors},
                {"all_passed", rep.all_passed()}}},
              {"timings", {{"wall_seconds", rep.seconds}}}};
  return doc.dump(2);
}

void write_report(const VerificationReport& rep, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << report_json(rep) << '\n';
  if (!out) throw IoError("failed writing " + path);
}

std::vector<ManifestEntry> list_identities() {
  std::vector<ManifestEntry> out;
  for (const auto& e : registry()) out.push_back({e.id, e.citation, e.domain, e.kind});
  return out;
}

}  // namespace ellid
