#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "ellid/runner.hpp"

using namespace ellid;
using nlohmann::json;

namespace {

RunConfig config(std::vector<std::string> ids, long samples = 5, std::uint64_t seed = 7) {
  RunConfig c;
  c.ids = std::move(ids);
  c.samples = samples;
  c.seed = seed;
  return c;
}

bool same_params(const ParamSet& a, const ParamSet& b) {
  if (a.values.size() != b.values.size()) return false;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    if (a.values[i].name != b.values[i].name || a.values[i].value != b.values[i].value) return false;
  return true;
}

}  // namespace

// ---------------------------------------------------------------- sampling

TEST(SampleRng, StreamsAreKeyedBySeedIdAndIndex) {
  SampleRng a(1, "eval3", 0), b(1, "eval3", 0);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a.next(), b.next());
  EXPECT_NE(SampleRng(1, "eval3", 0).next(), SampleRng(1, "eval3", 1).next());
  EXPECT_NE(SampleRng(1, "eval3", 0).next(), SampleRng(2, "eval3", 0).next());
  EXPECT_NE(SampleRng(1, "eval3", 0).next(), SampleRng(1, "eval1", 0).next());
}

TEST(SampleRng, RangesAreRespected) {
  SampleRng r(9, "x", 0);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform(-0.5, 0.25);
    EXPECT_GE(u, -0.5);
    EXPECT_LT(u, 0.25);
    const long k = r.integer(2, 4);
    EXPECT_GE(k, 2);
    EXPECT_LE(k, 4);
  }
}

TEST(SampleRng, HashIsFnv1a) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

// ---------------------------------------------------------------- run_suite

TEST(Runner, DeterministicUnderReseed) {
  const VerificationReport a = run_suite(config({"eval3"}));
  const VerificationReport b = run_suite(config({"eval3"}));
  ASSERT_EQ(a.results.size(), 5u);
  ASSERT_EQ(b.results.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_TRUE(same_params(a.results[i].params, b.results[i].params));
    EXPECT_EQ(a.results[i].status, b.results[i].status);
    EXPECT_EQ(a.results[i].lhs, b.results[i].lhs);
    EXPECT_EQ(a.results[i].index, static_cast<long>(i));
  }
  EXPECT_TRUE(a.all_passed());
}

TEST(Runner, ThreadCountDoesNotChangeResults) {
  RunConfig c = config({"eval1", "lemma.theta-simp2", "fv-val1"}, 3);
  const VerificationReport one = run_suite(c);
  c.threads = 3;
  const VerificationReport many = run_suite(c);
  ASSERT_EQ(one.results.size(), many.results.size());
  for (std::size_t i = 0; i < one.results.size(); ++i) {
    EXPECT_EQ(one.results[i].id, many.results[i].id);
    EXPECT_EQ(one.results[i].index, many.results[i].index);
    EXPECT_TRUE(same_params(one.results[i].params, many.results[i].params));
    EXPECT_EQ(one.results[i].lhs, many.results[i].lhs);
  }
}

TEST(Runner, SeriesResultHasNoTolerance) {
  RunConfig c = config({"series.triple-product"});
  c.series_order = 10;
  const VerificationReport rep = run_suite(c);
  ASSERT_EQ(rep.results.size(), 1u);
  EXPECT_EQ(rep.results[0].status, Status::pass);
  EXPECT_EQ(rep.results[0].order, 10);
  const json j = json::parse(report_json(rep));
  const json& r = j["results"][0];
  EXPECT_EQ(r["kind"], "series");
  EXPECT_EQ(r["comparison"], "exact");
  EXPECT_EQ(r["order"], 10);
  EXPECT_FALSE(r.contains("tolerance"));
}

TEST(Runner, UnknownIdRejectedBeforeWork) {
  EXPECT_THROW(run_suite(config({"eval1", "evalX"})), ConfigInvalid);
}

TEST(Runner, InvalidConfigsRejected) {
  EXPECT_THROW(config({}).validate(), ConfigInvalid);
  EXPECT_THROW(config({"eval1"}, 0).validate(), ConfigInvalid);
  RunConfig c = config({"eval1"});
  c.series_order = 0;
  EXPECT_THROW(c.validate(), ConfigInvalid);
  c = config({"eval1"});
  c.tolerance_overrides["eval1"] = -1e-8;
  EXPECT_THROW(c.validate(), ConfigInvalid);
  c = config({"eval1"});
  c.tolerance_overrides["nope"] = 1e-8;
  EXPECT_THROW(c.validate(), ConfigInvalid);
  c = config({"eval1"});
  c.threads = 0;
  EXPECT_THROW(c.validate(), ConfigInvalid);
}

TEST(Runner, FailuresAreRecordedNotFatal) {
  const VerificationReport rep = run_suite(config({"ellmac-mod-plus", "eval1"}, 2, 1));
  ASSERT_EQ(rep.results.size(), 4u);
  EXPECT_EQ(rep.failed, 2u);
  EXPECT_EQ(rep.passed, 2u);
  EXPECT_FALSE(rep.all_passed());
  for (const auto& r : rep.results) {
    if (r.id == "ellmac-mod-plus") {
      EXPECT_EQ(r.status, Status::fail);
      EXPECT_GT(r.rel_error, 1.0);
    } else {
      EXPECT_EQ(r.status, Status::pass);
    }
  }
}

TEST(Runner, ToleranceOverrideIsApplied) {
  RunConfig c = config({"eval1"}, 1);
  c.tolerance_overrides["eval1"] = 1e-30;
  const VerificationReport rep = run_suite(c);
  EXPECT_EQ(rep.results[0].tolerance, 1e-30);
  EXPECT_EQ(rep.results[0].status, Status::fail);
}

TEST(Runner, DuplicateIdsRunOnce) {
  const VerificationReport rep = run_suite(config({"eval1", "eval1"}, 2));
  EXPECT_EQ(rep.results.size(), 2u);
}

TEST(Runner, ExtendedPrecisionAgrees) {
  RunConfig c = config({"lemma.theta-simp3"}, 3);
  const VerificationReport a = run_suite(c);
  c.precision = Precision::extended;
  const VerificationReport b = run_suite(c);
  for (std::size_t i = 0; i < a.results.size(); ++i) {
    EXPECT_EQ(b.results[i].status, Status::pass);
    EXPECT_LT(std::abs(a.results[i].lhs - b.results[i].lhs), 1e-12 * std::abs(b.results[i].lhs));
  }
}

// ---------------------------------------------------------------- reports

TEST(Report, SchemaAndComplexEncoding) {
  const VerificationReport rep = run_suite(config({"eval3.zero"}, 2));
  const json j = json::parse(report_json(rep));
  EXPECT_EQ(j["schema_version"], kReportSchema);
  EXPECT_EQ(j["toolkit_version"], kToolkitVersion);
  EXPECT_EQ(j["arithmetic_mode"], "standard");
  EXPECT_EQ(j["rng_scheme"], kRngScheme);
  EXPECT_EQ(j["summary"]["total"], 2);
  EXPECT_TRUE(j["timings"].contains("wall_seconds"));
  const json& r = j["results"][0];
  EXPECT_EQ(r["kind"], "numeric");
  ASSERT_TRUE(r["params"]["tau"].is_array());
  EXPECT_EQ(r["params"]["tau"].size(), 2u);
  EXPECT_EQ(r["params"]["tau"][0].get<double>(), rep.results[0].params.get("tau").real());
  EXPECT_EQ(r["params"]["tau"][1].get<double>(), rep.results[0].params.get("tau").imag());
  EXPECT_TRUE(r.contains("abs_scale"));
  EXPECT_TRUE(r.contains("decision"));
  EXPECT_TRUE(r.contains("tolerance"));
}

TEST(Report, EchoedConfigReproducesSamples) {
  RunConfig c = config({"spiridonov", "bridge.eval-conj"}, 3, 123456789012345ULL);
  const VerificationReport first = run_suite(c);
  const json j = json::parse(report_json(first));
  const RunConfig echoed = config_from_json(j["config"].dump());
  EXPECT_EQ(echoed.seed, c.seed);
  const VerificationReport again = run_suite(echoed);
  ASSERT_EQ(first.results.size(), again.results.size());
  for (std::size_t i = 0; i < first.results.size(); ++i)
    EXPECT_TRUE(same_params(first.results[i].params, again.results[i].params));
}

TEST(Report, WriteAndIoError) {
  const VerificationReport rep = run_suite(config({"lemma.theta-simp2"}, 1));
  const auto path = std::filesystem::temp_directory_path() / "ellid_report_test.json";
  write_report(rep, path.string());
  std::ifstream in(path);
  const json j = json::parse(in);
  EXPECT_EQ(j["results"].size(), 1u);
  std::filesystem::remove(path);
  EXPECT_THROW(write_report(rep, "/nonexistent-dir/x/report.json"), IoError);
}

// ---------------------------------------------------------------- config files

TEST(Config, ParsesAllFields) {
  const RunConfig c = config_from_json(R"({
    "identity_ids": ["eval1", "series.denominator"],
    "samples_per_identity": 4,
    "seed": 99,
    "tolerance_overrides": {"eval1": 1e-9},
    "series_order": 5,
    "output_path": "out.json",
    "precision_mode": "extended",
    "threads": 2
  })");
  EXPECT_EQ(c.ids, (std::vector<std::string>{"eval1", "series.denominator"}));
  EXPECT_EQ(c.samples, 4);
  EXPECT_EQ(c.seed, 99u);
  EXPECT_EQ(c.tolerance_overrides.at("eval1"), 1e-9);
  EXPECT_EQ(c.series_order, 5);
  EXPECT_EQ(c.output_path, "out.json");
  EXPECT_EQ(c.precision, Precision::extended);
  EXPECT_EQ(c.threads, 2u);
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, RejectsMalformedInput) {
  EXPECT_THROW(config_from_json("{not json"), ConfigInvalid);
  EXPECT_THROW(config_from_json(R"({"samples_per_identity": "five"})"), ConfigInvalid);
  EXPECT_THROW(config_from_json(R"({"precision_mode": "quad"})"), ConfigInvalid);
}

// ---------------------------------------------------------------- manifest

TEST(Manifest, ContainsDocumentedEntries) {
  const auto m = list_identities();
  EXPECT_EQ(m.size(), 32u);
  std::set<std::string> ids;
  for (const auto& e : m) {
    EXPECT_TRUE(ids.insert(e.id).second) << e.id;
    EXPECT_FALSE(e.citation.empty()) << e.id;
    EXPECT_FALSE(e.domain.empty()) << e.id;
  }
  auto find = [&](const std::string& id) {
    return *std::find_if(m.begin(), m.end(), [&](const ManifestEntry& e) { return e.id == id; });
  };
  ASSERT_TRUE(ids.count("eval1"));
  ASSERT_TRUE(ids.count("lemma.theta-simp2"));
  EXPECT_NE(find("eval1").citation.find("first-kind"), std::string::npos);
  EXPECT_NE(find("lemma.theta-simp2").citation.find("modular parameter"), std::string::npos);
  for (const char* id : {"spiridonov", "eval2", "eval3", "fv-val1", "fv-val2", "ellmac-val", "ellmac-eval",
                         "delta-series", "ellmac-mod-minus", "ellmac-mod-plus", "bridge.j002", "bridge.eval-conj",
                         "series.triple-product", "series.denominator", "series.aff-eval", "series.hall-limit"})
    EXPECT_TRUE(ids.count(id)) << id;
}

TEST(Manifest, KindsMatchRegistry) {
  for (const auto& e : list_identities()) {
    const IdentityEntry& r = find_identity(e.id);
    EXPECT_EQ(e.kind, r.kind);
    if (r.kind == EntryKind::series) {
      EXPECT_TRUE(static_cast<bool>(r.series_check)) << e.id;
      EXPECT_GT(r.default_order, 0) << e.id;
    } else {
      EXPECT_TRUE(static_cast<bool>(r.sampler)) << e.id;
      EXPECT_TRUE(static_cast<bool>(r.evaluate)) << e.id;
      EXPECT_GT(r.tolerance, 0) << e.id;
    }
  }
}
