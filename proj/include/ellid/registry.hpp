#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ellid/contour.hpp"
#include "ellid/numeric.hpp"

namespace ellid {

inline constexpr const char* kRngScheme = "splitmix64-fnv1a/v1";

std::uint64_t fnv1a64(const std::string& s);

// Stream keyed by (seed, identity id, sample index).
class SampleRng {
 public:
  SampleRng(std::uint64_t seed, const std::string& id, std::uint64_t index);
  std::uint64_t next();
  double uniform(double lo, double hi);
  long integer(long lo, long hi);

 private:
  std::uint64_t state_;
};

struct Param {
  std::string name;
  std::complex<double> value;
};

struct ParamSet {
  std::vector<Param> values;

  void set(const std::string& name, std::complex<double> v);
  std::complex<double> get(const std::string& name) const;
  long integer(const std::string& name) const;
  bool has(const std::string& name) const;
};

struct Evaluation {
  std::complex<double> lhs;
  std::complex<double> rhs;
  double quad_error = 0;
  // Set for checks whose expected value vanishes; errors are then judged against this scale.
  std::optional<double> abs_scale;
  // Zero checks that also accept |lhs - rhs| within the quadrature error estimate.
  bool quadrature_bound = false;
};

enum class EntryKind { numeric, series };

struct PoleRecord {
  std::complex<double> point;
  std::optional<Side> required;
};

struct SeriesOutcome {
  bool equal = false;
  std::string detail;
};

struct IdentityEntry {
  std::string id;
  std::string citation;
  std::string domain;
  EntryKind kind = EntryKind::numeric;
  double tolerance = 1e-8;
  long default_order = 0;
  std::function<ParamSet(SampleRng&)> sampler;
  std::function<Evaluation(const ParamSet&, Precision)> evaluate;
  std::function<std::vector<PoleRecord>(const ParamSet&)> pole_inventory;
  std::function<SeriesOutcome(long)> series_check;
};

const std::vector<IdentityEntry>& registry();
const IdentityEntry& find_identity(const std::string& id);

}  // namespace ellid
