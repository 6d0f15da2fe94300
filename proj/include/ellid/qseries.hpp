#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace ellid::series {

using Exponents = std::vector<int>;

inline constexpr long kExact = std::numeric_limits<long>::max();

// Variables, the truncation variable and per-variable caps. kExact means unbounded.
struct SeriesRing {
  std::vector<std::string> vars;
  std::size_t trunc = 0;
  std::vector<long> caps;

  static std::shared_ptr<const SeriesRing> make(std::vector<std::string> vars, const std::string& trunc,
                                                long order);
  std::shared_ptr<const SeriesRing> with_caps(std::vector<long> caps) const;
  std::size_t index(const std::string& name) const;
  std::size_t size() const { return vars.size(); }
};

using RingPtr = std::shared_ptr<const SeriesRing>;

struct Monomial {
  mpq_class coef = 1;
  Exponents exps;
};

Monomial mono(const SeriesRing& ring, std::initializer_list<std::pair<const char*, int>> powers,
              mpq_class coef = 1);
Monomial operator*(const Monomial& a, const Monomial& b);
Monomial pow(const Monomial& a, int e);

class LaurentSeries {
 public:
  explicit LaurentSeries(RingPtr ring);

  static LaurentSeries constant(RingPtr ring, const mpq_class& c);
  static LaurentSeries monomial(RingPtr ring, const Monomial& m);
  static LaurentSeries from_terms(RingPtr ring, std::map<Exponents, mpq_class> terms,
                                  std::vector<long> bounds);

  const SeriesRing& ring() const { return *ring_; }
  const RingPtr& ring_ptr() const { return ring_; }
  const std::map<Exponents, mpq_class>& terms() const { return terms_; }
  const std::vector<long>& bounds() const { return bounds_; }
  long order() const { return bounds_[ring_->trunc]; }
  long valuation(std::size_t var) const;
  bool is_zero() const { return terms_.empty(); }
  mpq_class coefficient(const Exponents& e) const;

  LaurentSeries operator-() const;
  LaurentSeries operator+(const LaurentSeries& o) const;
  LaurentSeries operator-(const LaurentSeries& o) const;
  LaurentSeries operator*(const LaurentSeries& o) const;
  LaurentSeries operator*(const Monomial& m) const;
  LaurentSeries inverse() const;
  // Multiplies by (1 - m) in place semantics.
  LaurentSeries times_one_minus(const Monomial& m) const;

  LaurentSeries truncated(const std::vector<long>& bounds) const;
  LaurentSeries truncated(long order) const;
  LaurentSeries rebased(RingPtr ring) const;

  std::string to_string() const;
  std::complex<double> evaluate(const std::vector<std::complex<double>>& values) const;

 private:
  void settle(std::vector<long> bounds, bool exact_hint);

  RingPtr ring_;
  std::map<Exponents, mpq_class> terms_;
  std::vector<long> bounds_;
};

bool equal_up_to(const LaurentSeries& a, const LaurentSeries& b, const std::vector<long>& target);

LaurentSeries series_pochhammer(const RingPtr& ring, const Monomial& arg, const Monomial& modulus);
LaurentSeries series_pochhammer2(const RingPtr& ring, const Monomial& arg, const Monomial& mod1,
                                 const Monomial& mod2);
LaurentSeries series_pochhammer(const Monomial& arg, const Monomial& modulus, const RingPtr& ring);

// Raises the working caps until build returns a series whose bounds reach target.
LaurentSeries compute_to(const SeriesRing& base, const std::vector<long>& target,
                         const std::function<LaurentSeries(const RingPtr&)>& build);

bool series_triple_product_check(long mu, long kappa, long order);
bool series_triple_product_check(long mu, long kappa, long order, long j_min, long j_max);

struct FiniteRoot {
  std::vector<int> coeffs;  // in the simple-root basis
  int height() const;
};

struct AffineRootLayer {
  int n = 2;
  int m = 0;
  std::vector<FiniteRoot> entries;
  int imaginary_multiplicity = 0;
};

AffineRootLayer affine_root_layer(int n, int m);
std::vector<mpq_class> rho_coordinates(int n);

LaurentSeries denominator_conjecture_series(int n, int k_mac, long order);
LaurentSeries denominator_theorem_series(long order);
LaurentSeries denominator_layer0(int n, int k_mac, const RingPtr& ring);

LaurentSeries aff_eval_conjecture_series(int n, int k_mac, const std::vector<long>& mu, long k, long order);
LaurentSeries aff_eval_theorem_series(long mu, long k, long order);

bool hall_limit_check(int n, int k_mac, long order);
bool hall_substitution_check(int n, int k_mac, long order);

std::vector<std::string> theta_lemma_ids();
bool theta_lemma_series_check(const std::string& id, long order);

}  // namespace ellid::series
