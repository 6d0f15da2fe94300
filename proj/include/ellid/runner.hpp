#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ellid/numeric.hpp"
#include "ellid/registry.hpp"

namespace ellid {

inline constexpr const char* kToolkitVersion = "0.1.0";
inline constexpr int kReportSchema = 1;

struct RunConfig {
  std::vector<std::string> ids;
  long samples = 5;
  std::uint64_t seed = 1;
  std::map<std::string, double> tolerance_overrides;
  std::optional<long> series_order;
  std::string output_path;
  Precision precision = Precision::standard;
  unsigned threads = 1;

  // Throws ConfigInvalid.
  void validate() const;
};

enum class Status { pass, fail, error };
std::string to_string(Status s);

struct IdentityResult {
  std::string id;
  long index = 0;
  EntryKind kind = EntryKind::numeric;
  ParamSet params;
  std::complex<double> lhs{};
  std::complex<double> rhs{};
  double abs_error = 0;
  double rel_error = 0;
  double quad_error = 0;
  double tolerance = 0;
  std::optional<double> abs_scale;
  bool quadrature_bound = false;
  long order = 0;
  Status status = Status::error;
  std::string message;
  double seconds = 0;
};

struct VerificationReport {
  RunConfig config;
  std::vector<IdentityResult> results;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t errors = 0;
  double seconds = 0;

  bool all_passed() const { return failed == 0 && errors == 0; }
};

RunConfig config_from_json(const std::string& text);
VerificationReport run_suite(const RunConfig& config);
// One numeric check at explicit parameters under the suite's decision rule.
IdentityResult check_params(const IdentityEntry& entry, const ParamSet& params, double tolerance,
                            Precision precision = Precision::standard);
std::string report_json(const VerificationReport& report);
// Throws IoError.
void write_report(const VerificationReport& report, const std::string& path);

struct ManifestEntry {
  std::string id;
  std::string citation;
  std::string domain;
  EntryKind kind;
};
std::vector<ManifestEntry> list_identities();

}  // namespace ellid
