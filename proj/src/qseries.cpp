#include "ellid/qseries.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ellid/numeric.hpp"

namespace ellid::series {

namespace {

long sat_add(long a, long b) {
  if (a == kExact || b == kExact) return kExact;
  return a + b;
}

// Decides which product terms survive and records cap-induced truncation per variable.
struct Pruner {
  std::vector<long> bound;
  std::vector<long> eff;
  std::vector<bool> dropped;

  Pruner(const SeriesRing& ring, std::vector<long> b) : bound(std::move(b)) {
    eff.resize(bound.size());
    dropped.assign(bound.size(), false);
    for (std::size_t i = 0; i < bound.size(); ++i) eff[i] = std::min(bound[i], ring.caps[i]);
  }

  bool accept(const Exponents& e) {
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] >= eff[i]) {
        if (eff[i] < bound[i]) dropped[i] = true;
        return false;
      }
    }
    return true;
  }

  std::vector<long> result() const {
    std::vector<long> out(bound.size());
    for (std::size_t i = 0; i < bound.size(); ++i) out[i] = dropped[i] ? eff[i] : bound[i];
    return out;
  }
};

bool beyond(const SeriesRing& ring, const Exponents& e) {
  for (std::size_t i = 0; i < e.size(); ++i)
    if (ring.caps[i] != kExact && e[i] >= ring.caps[i]) return true;
  return false;
}

std::size_t beyond_var(const SeriesRing& ring, const Exponents& e) {
  for (std::size_t i = 0; i < e.size(); ++i)
    if (ring.caps[i] != kExact && e[i] >= ring.caps[i]) return i;
  return e.size();
}

void check_modulus(const SeriesRing& ring, const Monomial& mod) {
  bool positive = false;
  for (std::size_t i = 0; i < mod.exps.size(); ++i) {
    if (ring.caps[i] == kExact) continue;
    if (mod.exps[i] < 0) throw NonTerminating("modulus has a negative exponent in a bounded variable");
    if (mod.exps[i] > 0) positive = true;
  }
  if (!positive) throw NonTerminating("modulus does not advance any bounded variable");
}

LaurentSeries finish_tail(LaurentSeries s, const std::vector<bool>& tail_vars) {
  std::vector<long> b = s.bounds();
  bool changed = false;
  for (std::size_t i = 0; i < tail_vars.size(); ++i) {
    if (!tail_vars[i]) continue;
    const long lim = sat_add(s.ring().caps[i], std::min(0L, s.valuation(i)));
    if (lim < b[i]) {
      b[i] = lim;
      changed = true;
    }
  }
  return changed ? s.truncated(b) : s;
}

}  // namespace

std::shared_ptr<const SeriesRing> SeriesRing::make(std::vector<std::string> vars, const std::string& trunc,
                                                   long order) {
  auto r = std::make_shared<SeriesRing>();
  r->vars = std::move(vars);
  r->caps.assign(r->vars.size(), kExact);
  r->trunc = r->index(trunc);
  r->caps[r->trunc] = order;
  return r;
}

std::shared_ptr<const SeriesRing> SeriesRing::with_caps(std::vector<long> c) const {
  auto r = std::make_shared<SeriesRing>(*this);
  r->caps = std::move(c);
  return r;
}

std::size_t SeriesRing::index(const std::string& name) const {
  auto it = std::find(vars.begin(), vars.end(), name);
  if (it == vars.end()) throw ConfigInvalid("unknown series variable " + name);
  return static_cast<std::size_t>(it - vars.begin());
}

Monomial mono(const SeriesRing& ring, std::initializer_list<std::pair<const char*, int>> powers, mpq_class coef) {
  Monomial m;
  m.coef = std::move(coef);
  m.exps.assign(ring.size(), 0);
  for (const auto& [name, e] : powers) m.exps[ring.index(name)] += e;
  return m;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial m;
  m.coef = a.coef * b.coef;
  m.exps.resize(a.exps.size());
  for (std::size_t i = 0; i < a.exps.size(); ++i) m.exps[i] = a.exps[i] + b.exps[i];
  return m;
}

Monomial pow(const Monomial& a, int e) {
  Monomial m;
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), a.coef.get_num_mpz_t(), static_cast<unsigned long>(std::abs(e)));
  mpz_pow_ui(den.get_mpz_t(), a.coef.get_den_mpz_t(), static_cast<unsigned long>(std::abs(e)));
  m.coef = e >= 0 ? mpq_class(num, den) : mpq_class(den, num);
  m.coef.canonicalize();
  m.exps.resize(a.exps.size());
  for (std::size_t i = 0; i < a.exps.size(); ++i) m.exps[i] = a.exps[i] * e;
  return m;
}

LaurentSeries::LaurentSeries(RingPtr ring) : ring_(std::move(ring)), bounds_(ring_->size(), kExact) {}

LaurentSeries LaurentSeries::constant(RingPtr ring, const mpq_class& c) {
  LaurentSeries s(std::move(ring));
  if (c != 0) s.terms_[Exponents(s.ring_->size(), 0)] = c;
  s.settle(s.bounds_, true);
  return s;
}

LaurentSeries LaurentSeries::monomial(RingPtr ring, const Monomial& m) {
  LaurentSeries s(std::move(ring));
  if (m.coef != 0) s.terms_[m.exps] = m.coef;
  s.settle(s.bounds_, true);
  return s;
}

LaurentSeries LaurentSeries::from_terms(RingPtr ring, std::map<Exponents, mpq_class> terms, std::vector<long> bounds) {
  LaurentSeries s(std::move(ring));
  s.terms_ = std::move(terms);
  s.settle(std::move(bounds), true);
  return s;
}

void LaurentSeries::settle(std::vector<long> b, bool) {
  Pruner pr(*ring_, std::move(b));
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->second == 0 || !pr.accept(it->first))
      it = terms_.erase(it);
    else
      ++it;
  }
  bounds_ = pr.result();
}

long LaurentSeries::valuation(std::size_t var) const {
  long v = bounds_[var];
  for (const auto& [e, c] : terms_) v = std::min<long>(v, e[var]);
  return v;
}

mpq_class LaurentSeries::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? mpq_class(0) : it->second;
}

LaurentSeries LaurentSeries::operator-() const {
  LaurentSeries s = *this;
  for (auto& [e, c] : s.terms_) c = -c;
  return s;
}

LaurentSeries LaurentSeries::operator+(const LaurentSeries& o) const {
  LaurentSeries s(ring_);
  s.terms_ = terms_;
  for (const auto& [e, c] : o.terms_) s.terms_[e] += c;
  std::vector<long> b(bounds_.size());
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = std::min(bounds_[i], o.bounds_[i]);
  s.settle(std::move(b), false);
  return s;
}

LaurentSeries LaurentSeries::operator-(const LaurentSeries& o) const { return *this + (-o); }

LaurentSeries LaurentSeries::operator*(const LaurentSeries& o) const {
  const std::size_t n = bounds_.size();
  std::vector<long> b(n);
  for (std::size_t i = 0; i < n; ++i)
    b[i] = std::min(sat_add(bounds_[i], o.valuation(i)), sat_add(o.bounds_[i], valuation(i)));
  Pruner pr(*ring_, b);
  LaurentSeries s(ring_);
  Exponents e(n);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : o.terms_) {
      for (std::size_t i = 0; i < n; ++i) e[i] = ea[i] + eb[i];
      if (!pr.accept(e)) continue;
      s.terms_[e] += ca * cb;
    }
  }
  s.settle(pr.result(), false);
  return s;
}

LaurentSeries LaurentSeries::operator*(const Monomial& m) const { return *this * monomial(ring_, m); }

LaurentSeries LaurentSeries::times_one_minus(const Monomial& m) const {
  if (m.coef == 0) return *this;
  const std::size_t n = bounds_.size();
  std::vector<long> b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = sat_add(bounds_[i], std::min(0, m.exps[i]));
  Pruner pr(*ring_, b);
  LaurentSeries s(ring_);
  s.terms_ = terms_;
  Exponents e(n);
  for (const auto& [ea, ca] : terms_) {
    for (std::size_t i = 0; i < n; ++i) e[i] = ea[i] + m.exps[i];
    if (!pr.accept(e)) continue;
    s.terms_[e] -= ca * m.coef;
  }
  s.settle(pr.result(), false);
  return s;
}

LaurentSeries LaurentSeries::inverse() const {
  const std::size_t t = ring_->trunc;
  if (terms_.empty()) throw PoleHit("inverse of a series with no known terms");
  const long vt = valuation(t);
  const Exponents* lead = nullptr;
  for (const auto& [e, c] : terms_) {
    if (e[t] != vt) continue;
    if (lead) throw NonTerminating("leading coefficient is not a monomial");
    lead = &e;
  }
  if (!lead) throw PoleHit("inverse of a series with no known leading term");
  Monomial lm{terms_.at(*lead), *lead};
  Monomial inv_lead = pow(lm, -1);
  LaurentSeries u = *this * inv_lead;
  LaurentSeries v = u - constant(ring_, 1);
  for (const auto& [e, c] : v.terms_) {
    bool positive = false;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (ring_->caps[i] == kExact) continue;
      if (e[i] < 0) throw NonTerminating("unit part has a negative exponent in a bounded variable");
      if (e[i] > 0) positive = true;
    }
    if (!positive) throw NonTerminating("unit part does not advance any bounded variable");
  }
  std::vector<long> work(bounds_.size());
  for (std::size_t i = 0; i < work.size(); ++i) work[i] = std::min(ring_->caps[i], u.bounds_[i]);
  RingPtr wr = ring_->with_caps(work);
  LaurentSeries nv = (-v).rebased(wr);
  LaurentSeries power = constant(wr, 1);
  LaurentSeries acc = power;
  while (true) {
    power = power * nv;
    if (power.terms_.empty()) break;
    acc = acc + power;
  }
  LaurentSeries out(ring_);
  out.terms_ = std::move(acc.terms_);
  out.settle(work, false);
  return out * inv_lead;
}

LaurentSeries LaurentSeries::truncated(const std::vector<long>& b) const {
  LaurentSeries s = *this;
  std::vector<long> nb(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) nb[i] = std::min(b[i], bounds_[i]);
  s.settle(std::move(nb), false);
  return s;
}

LaurentSeries LaurentSeries::truncated(long order) const {
  std::vector<long> b = bounds_;
  b[ring_->trunc] = std::min(order, b[ring_->trunc]);
  return truncated(b);
}

LaurentSeries LaurentSeries::rebased(RingPtr ring) const {
  LaurentSeries s(std::move(ring));
  s.terms_ = terms_;
  s.settle(bounds_, false);
  return s;
}

std::string LaurentSeries::to_string() const {
  const std::size_t t = ring_->trunc;
  std::vector<std::pair<Exponents, mpq_class>> sorted(terms_.begin(), terms_.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [t](const auto& a, const auto& b) {
                     if (a.first[t] != b.first[t]) return a.first[t] < b.first[t];
                     return a.first < b.first;
                   });
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : sorted) {
    const bool neg = c < 0;
    const mpq_class a = neg ? mpq_class(-c) : c;
    if (first)
      os << (neg ? "-" : "");
    else
      os << (neg ? " - " : " + ");
    first = false;
    bool wrote = false;
    const bool constant_term = std::all_of(e.begin(), e.end(), [](int x) { return x == 0; });
    if (a != 1 || constant_term) {
      os << a.get_str();
      wrote = true;
    }
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (wrote) os << "*";
      os << ring_->vars[i];
      if (e[i] != 1) os << "^" << e[i];
      wrote = true;
    }
  }
  if (first) os << "0";
  for (std::size_t i = 0; i < bounds_.size(); ++i)
    if (bounds_[i] != kExact) os << " + O(" << ring_->vars[i] << "^" << bounds_[i] << ")";
  return os.str();
}

std::complex<double> LaurentSeries::evaluate(const std::vector<std::complex<double>>& values) const {
  if (values.size() != ring_->size()) throw ConfigInvalid("evaluate: wrong number of values");
  std::complex<double> acc = 0;
  for (const auto& [e, c] : terms_) {
    std::complex<double> term = c.get_d();
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] != 0) term *= std::pow(values[i], e[i]);
    acc += term;
  }
  return acc;
}

bool equal_up_to(const LaurentSeries& a, const LaurentSeries& b, const std::vector<long>& target) {
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (target[i] == kExact) continue;
    if (a.bounds()[i] < target[i] || b.bounds()[i] < target[i])
      throw TruncationInconsistent("series known only to " + std::to_string(std::min(a.bounds()[i], b.bounds()[i])) +
                                   " in " + a.ring().vars[i] + ", comparison needs " + std::to_string(target[i]));
  }
  const LaurentSeries d = (a - b).truncated(target);
  return d.is_zero();
}

LaurentSeries series_pochhammer(const RingPtr& ring, const Monomial& arg, const Monomial& modulus) {
  LaurentSeries s = LaurentSeries::constant(ring, 1);
  if (arg.coef == 0) return s;
  check_modulus(*ring, modulus);
  std::vector<bool> tail(ring->size(), false);
  Monomial m = arg;
  while (!beyond(*ring, m.exps)) {
    s = s.times_one_minus(m);
    m = m * modulus;
  }
  tail[beyond_var(*ring, m.exps)] = true;
  return finish_tail(std::move(s), tail);
}

LaurentSeries series_pochhammer(const Monomial& arg, const Monomial& modulus, const RingPtr& ring) {
  return series_pochhammer(ring, arg, modulus);
}

LaurentSeries series_pochhammer2(const RingPtr& ring, const Monomial& arg, const Monomial& mod1,
                                 const Monomial& mod2) {
  LaurentSeries s = LaurentSeries::constant(ring, 1);
  if (arg.coef == 0) return s;
  check_modulus(*ring, mod1);
  check_modulus(*ring, mod2);
  std::vector<bool> tail(ring->size(), false);
  Monomial outer = arg;
  while (!beyond(*ring, outer.exps)) {
    Monomial m = outer;
    while (!beyond(*ring, m.exps)) {
      s = s.times_one_minus(m);
      m = m * mod1;
    }
    tail[beyond_var(*ring, m.exps)] = true;
    outer = outer * mod2;
  }
  tail[beyond_var(*ring, outer.exps)] = true;
  return finish_tail(std::move(s), tail);
}

LaurentSeries compute_to(const SeriesRing& base, const std::vector<long>& target,
                         const std::function<LaurentSeries(const RingPtr&)>& build) {
  std::vector<long> caps = base.caps;
  for (std::size_t i = 0; i < caps.size(); ++i) caps[i] = target[i];
  for (int round = 0; round < 64; ++round) {
    RingPtr ring = base.with_caps(caps);
    LaurentSeries r = build(ring);
    bool done = true;
    for (std::size_t i = 0; i < caps.size(); ++i) {
      if (target[i] == kExact || r.bounds()[i] >= target[i]) continue;
      done = false;
      caps[i] += target[i] - r.bounds()[i];
    }
    if (done) return r.truncated(target).rebased(base.with_caps(target));
  }
  throw TruncationInconsistent("working caps did not converge to the requested order");
}

// ---------------------------------------------------------------- triple product

namespace {

bool triple_product_compare(long mu, long kappa, long order, long j_min, long j_max) {
  RingPtr base = SeriesRing::make({"s", "x"}, "s", order);
  const std::vector<long> target{order, kExact};
  std::map<Exponents, mpq_class> sum;
  for (long j = j_min; j <= j_max; ++j) {
    const long e = kappa * j * j + mu * j;
    if (e < order) sum[{static_cast<int>(e), static_cast<int>(kappa * j)}] += 1;
  }
  LaurentSeries lhs = LaurentSeries::from_terms(base, sum, target);
  const int k = static_cast<int>(kappa);
  const int m = static_cast<int>(mu);
  LaurentSeries rhs = compute_to(*base, target, [&](const RingPtr& r) {
    const Monomial mod = mono(*r, {{"s", 2 * k}});
    return series_pochhammer(r, mod, mod) * series_pochhammer(r, mono(*r, {{"s", m + k}, {"x", k}}, -1), mod) *
           series_pochhammer(r, mono(*r, {{"s", k - m}, {"x", -k}}, -1), mod);
  });
  return equal_up_to(lhs, rhs, target);
}

long triple_range(long mu, long kappa, long order) {
  const double disc = static_cast<double>(mu) * mu + 4.0 * kappa * std::abs(order);
  return static_cast<long>(std::ceil((std::abs(mu) + std::sqrt(disc)) / (2.0 * kappa))) + 2;
}

}  // namespace

bool series_triple_product_check(long mu, long kappa, long order) {
  if (kappa < 1) throw DomainViolation("triple product needs kappa >= 1");
  const long J = triple_range(mu, kappa, order);
  return triple_product_compare(mu, kappa, order, -J, J);
}

bool series_triple_product_check(long mu, long kappa, long order, long j_min, long j_max) {
  if (kappa < 1) throw DomainViolation("triple product needs kappa >= 1");
  const long J = triple_range(mu, kappa, order);
  for (long j = -J; j <= J; ++j) {
    if (j >= j_min && j <= j_max) continue;
    if (kappa * j * j + mu * j < order)
      throw TruncationInconsistent("bilateral sum range omits index " + std::to_string(j) + " below the order");
  }
  return triple_product_compare(mu, kappa, order, j_min, j_max);
}

// ---------------------------------------------------------------- root data

int FiniteRoot::height() const {
  int h = 0;
  for (int c : coeffs) h += c;
  return h;
}

AffineRootLayer affine_root_layer(int n, int m) {
  if (n < 2 || m < 0) throw DomainViolation("root layer needs n >= 2 and m >= 0");
  AffineRootLayer layer;
  layer.n = n;
  layer.m = m;
  for (int i = 0; i < n - 1; ++i) {
    for (int j = i; j < n - 1; ++j) {
      FiniteRoot r;
      r.coeffs.assign(n - 1, 0);
      for (int k = i; k <= j; ++k) r.coeffs[k] = 1;
      layer.entries.push_back(r);
      if (m > 0) {
        for (int& c : r.coeffs) c = -c;
        layer.entries.push_back(r);
      }
    }
  }
  layer.imaginary_multiplicity = m > 0 ? n - 1 : 0;
  return layer;
}

std::vector<mpq_class> rho_coordinates(int n) {
  const int r = n - 1;
  std::vector<std::vector<mpq_class>> a(r, std::vector<mpq_class>(r + 1, 0));
  for (int i = 0; i < r; ++i) {
    a[i][i] = 2;
    if (i > 0) a[i][i - 1] = -1;
    if (i + 1 < r) a[i][i + 1] = -1;
    a[i][r] = 1;  // (rho, alpha_i) = 1
  }
  for (int c = 0; c < r; ++c) {
    int piv = c;
    while (a[piv][c] == 0) ++piv;
    std::swap(a[piv], a[c]);
    for (int i = 0; i < r; ++i) {
      if (i == c || a[i][c] == 0) continue;
      const mpq_class f = a[i][c] / a[c][c];
      for (int j = c; j <= r; ++j) a[i][j] -= f * a[c][j];
    }
  }
  std::vector<mpq_class> rho(r);
  for (int i = 0; i < r; ++i) rho[i] = a[i][r] / a[i][i];
  return rho;
}

// ---------------------------------------------------------------- denominator

namespace {

std::vector<std::string> weight_vars(int n) {
  std::vector<std::string> v{"p", "q"};
  for (int k = 1; k < n; ++k) v.push_back("z" + std::to_string(k));
  return v;
}

int to_int(const mpq_class& x) {
  if (x.get_den() != 1) throw DomainViolation("non-integral exponent " + x.get_str());
  return static_cast<int>(x.get_num().get_si());
}

Monomial weight_mono(const SeriesRing& ring, const std::vector<int>& coeffs, int scale) {
  Monomial m;
  m.exps.assign(ring.size(), 0);
  for (std::size_t k = 0; k < coeffs.size(); ++k) m.exps[2 + k] = scale * coeffs[k];
  return m;
}

LaurentSeries delta_factor(const RingPtr& r, int n, int k_mac) {
  LaurentSeries num = LaurentSeries::constant(r, 1);
  LaurentSeries den = LaurentSeries::constant(r, 1);
  const Monomial p = mono(*r, {{"p", 1}});
  for (int i = 1; i < k_mac; ++i) {
    num = num * series_pochhammer(r, mono(*r, {{"p", 1}, {"q", 2 * i}}), p);
    den = den * series_pochhammer(r, mono(*r, {{"p", 1}, {"q", 2 * n * i}}), p);
  }
  return num * den.inverse();
}

Monomial denominator_prefactor(const SeriesRing& ring, int n, int k_mac) {
  const std::vector<mpq_class> rho = rho_coordinates(n);
  Monomial m;
  m.exps.assign(ring.size(), 0);
  for (int k = 0; k < n - 1; ++k) m.exps[2 + k] = to_int(mpq_class(-2 * (k_mac - 1)) * rho[k]);
  return m;
}

}  // namespace

LaurentSeries denominator_layer0(int n, int k_mac, const RingPtr& ring) {
  LaurentSeries s = LaurentSeries::monomial(ring, denominator_prefactor(*ring, n, k_mac));
  const AffineRootLayer l0 = affine_root_layer(n, 0);
  for (int i = 1; i < k_mac; ++i)
    for (const FiniteRoot& a : l0.entries) s = s.times_one_minus(weight_mono(*ring, a.coeffs, 2) * mono(*ring, {{"q", 2 * i}}));
  return s;
}

LaurentSeries denominator_conjecture_series(int n, int k_mac, long order) {
  if (n < 2 || k_mac < 1) throw DomainViolation("denominator needs n >= 2 and k >= 1");
  RingPtr base = SeriesRing::make(weight_vars(n), "p", order);
  std::vector<long> target(base->size(), kExact);
  target[0] = order;
  return compute_to(*base, target, [&](const RingPtr& r) {
    LaurentSeries s = denominator_layer0(n, k_mac, r) * delta_factor(r, n, k_mac);
    const Monomial p = mono(*r, {{"p", 1}});
    const AffineRootLayer l1 = affine_root_layer(n, 1);
    for (int i = 1; i < k_mac; ++i) {
      for (const FiniteRoot& a : l1.entries)
        s = s * series_pochhammer(r, weight_mono(*r, a.coeffs, 2) * mono(*r, {{"p", 1}, {"q", 2 * i}}), p);
      const LaurentSeries im = series_pochhammer(r, mono(*r, {{"p", 1}, {"q", 2 * i}}), p);
      for (int c = 0; c < l1.imaginary_multiplicity; ++c) s = s * im;
    }
    return s;
  });
}

LaurentSeries denominator_theorem_series(long order) {
  RingPtr base = SeriesRing::make(weight_vars(2), "p", order);
  const std::vector<long> target{order, kExact, kExact};
  return compute_to(*base, target, [&](const RingPtr& r) {
    const Monomial p = mono(*r, {{"p", 1}});
    const LaurentSeries pq2 = series_pochhammer(r, mono(*r, {{"p", 1}, {"q", 2}}), p);
    const LaurentSeries f22 = pq2 * series_pochhammer(r, mono(*r, {{"p", 1}, {"q", 4}}), p).inverse();
    return f22 * mono(*r, {{"z1", -1}}) * series_pochhammer(r, mono(*r, {{"z1", 2}, {"q", 2}}), p) *
           series_pochhammer(r, mono(*r, {{"z1", -2}, {"q", 2}, {"p", 1}}), p) * pq2;
  });
}

// ---------------------------------------------------------------- evaluation

LaurentSeries aff_eval_conjecture_series(int n, int k_mac, const std::vector<long>& mu, long k, long order) {
  if (n < 2 || k_mac < 1) throw DomainViolation("evaluation needs n >= 2 and k >= 1");
  if (static_cast<int>(mu.size()) != n - 1) throw DomainViolation("weight must have n - 1 Dynkin labels");
  for (long m : mu)
    if (m < 0) throw DomainViolation("weight must be dominant");
  if (k < 0) throw DomainViolation("level must be nonnegative");
  const std::vector<mpq_class> rho = rho_coordinates(n);
  mpq_class lead = 0;
  for (int i = 0; i < n - 1; ++i) lead += mpq_class(-2 * k_mac) * rho[i] * mpq_class(mu[i]);
  const int lead_e = to_int(lead);
  const long step_num = k + static_cast<long>(k_mac) * n;
  const long step_den = static_cast<long>(k_mac) * n;
  RingPtr base = SeriesRing::make({"s"}, "s", order);
  const std::vector<long> target{order};
  auto pair_num = [&](const FiniteRoot& a) {
    long v = 0;
    for (int i = 0; i < n - 1; ++i) v += a.coeffs[i] * (mu[i] + k_mac);
    return v;
  };
  auto pair_den = [&](const FiniteRoot& a) { return static_cast<long>(k_mac) * a.height(); };
  return compute_to(*base, target, [&](const RingPtr& r) {
    auto S = [&](long e) { return mono(*r, {{"s", static_cast<int>(e)}}); };
    LaurentSeries num = LaurentSeries::monomial(r, S(lead_e));
    LaurentSeries den = LaurentSeries::constant(r, 1);
    const AffineRootLayer l0 = affine_root_layer(n, 0);
    const AffineRootLayer l1 = affine_root_layer(n, 1);
    for (long i = 0; i < k_mac; ++i) {
      for (const FiniteRoot& a : l0.entries) {
        num = num.times_one_minus(S(2 * pair_num(a) + 2 * i));
        den = den.times_one_minus(S(2 * pair_den(a) + 2 * i));
      }
      for (const FiniteRoot& a : l1.entries) {
        num = num * series_pochhammer(r, S(2 * pair_num(a) + 2 * i + 2 * step_num), S(2 * step_num));
        den = den * series_pochhammer(r, S(2 * pair_den(a) + 2 * i + 2 * step_den), S(2 * step_den));
      }
      const LaurentSeries im_num = series_pochhammer(r, S(2 * i + 2 * step_num), S(2 * step_num));
      const LaurentSeries im_den = series_pochhammer(r, S(2 * i + 2 * step_den), S(2 * step_den));
      for (int c = 0; c < l1.imaginary_multiplicity; ++c) {
        num = num * im_num;
        den = den * im_den;
      }
    }
    for (long i = 1; i < k_mac; ++i) {
      num = num * series_pochhammer(r, S(2 * i), S(2 * step_num)) * series_pochhammer(r, S(2 * n * i), S(2 * step_den));
      den = den * series_pochhammer(r, S(2 * n * i), S(2 * step_num)) * series_pochhammer(r, S(2 * i), S(2 * step_den));
    }
    return num * den.inverse();
  });
}

LaurentSeries aff_eval_theorem_series(long mu, long k, long order) {
  if (mu < 0 || k < 0) throw DomainViolation("evaluation needs mu, k >= 0");
  const long kappa = k + 4;
  RingPtr base = SeriesRing::make({"s"}, "s", order);
  const std::vector<long> target{order};
  return compute_to(*base, target, [&](const RingPtr& r) {
    auto S = [&](long e) { return mono(*r, {{"s", static_cast<int>(e)}}); };
    auto P = [&](long a, long m) { return series_pochhammer(r, S(a), S(m)); };
    const long K = 2 * kappa;
    LaurentSeries num = LaurentSeries::monomial(r, S(-2 * mu)) * P(2, K) * P(2 * mu + 4, K) * P(K - 2 * mu - 4, K) *
                        P(2 * mu + 6, K) * P(K - 2 * mu - 2, K) * P(K, K) * P(K + 2, K);
    LaurentSeries den = P(4, K) * P(4, 2) * P(6, 8) * P(2, 8);
    return num * den.inverse();
  });
}

// ---------------------------------------------------------------- Hall limit

bool hall_limit_check(int n, int k_mac, long order) {
  if (n < 2 || k_mac < 1) throw DomainViolation("Hall limit needs n >= 2 and k >= 1");
  RingPtr base = SeriesRing::make({"p", "q", "t"}, "p", order);
  const std::vector<long> target{order, 1, kExact};
  auto build_delta = [&](const RingPtr& r) {
    const Monomial p2 = mono(*r, {{"p", 2}});
    const Monomial q2 = mono(*r, {{"q", 2}});
    const Monomial q2n = mono(*r, {{"q", 2 * n}});
    LaurentSeries num = series_pochhammer2(r, mono(*r, {{"p", 2}, {"q", 2}}), p2, q2) *
                        series_pochhammer2(r, mono(*r, {{"p", 2}, {"t", 2 * n}}), p2, q2n);
    LaurentSeries den = series_pochhammer2(r, mono(*r, {{"p", 2}, {"t", 2}}), p2, q2) *
                        series_pochhammer2(r, mono(*r, {{"p", 2}, {"q", 2 * n}}), p2, q2n);
    return num * den.inverse();
  };
  const LaurentSeries delta = compute_to(*base, target, build_delta);
  const LaurentSeries mac = compute_to(*base, target, [&](const RingPtr& r) {
    const Monomial p2 = mono(*r, {{"p", 2}});
    return series_pochhammer(r, mono(*r, {{"p", 2}, {"t", 2 * n}}), p2) *
           series_pochhammer(r, mono(*r, {{"p", 2}, {"t", 2}}), p2).inverse();
  });
  return equal_up_to(delta, mac, target) && hall_substitution_check(n, k_mac, order);
}

bool hall_substitution_check(int n, int k_mac, long order) {
  if (n < 2 || k_mac < 1) throw DomainViolation("Hall limit needs n >= 2 and k >= 1");
  const long qcap = 2L * n * k_mac * order + 2;
  RingPtr base = SeriesRing::make({"P", "q"}, "P", order);
  const std::vector<long> target{order, qcap};
  const LaurentSeries lhs = compute_to(*base, target, [&](const RingPtr& r) {
    const Monomial P2 = mono(*r, {{"P", 2}});
    LaurentSeries num = LaurentSeries::constant(r, 1);
    LaurentSeries den = LaurentSeries::constant(r, 1);
    for (int i = 1; i < k_mac; ++i) {
      num = num * series_pochhammer(r, mono(*r, {{"P", 2}, {"q", 2 * i}}), P2);
      den = den * series_pochhammer(r, mono(*r, {{"P", 2}, {"q", 2 * n * i}}), P2);
    }
    return num * den.inverse();
  });
  const LaurentSeries rhs = compute_to(*base, target, [&](const RingPtr& r) {
    const Monomial P2 = mono(*r, {{"P", 2}});
    const Monomial q2 = mono(*r, {{"q", 2}});
    const Monomial q2n = mono(*r, {{"q", 2 * n}});
    LaurentSeries num = series_pochhammer2(r, mono(*r, {{"P", 2}, {"q", 2}}), P2, q2) *
                        series_pochhammer2(r, mono(*r, {{"P", 2}, {"q", 2 * k_mac * n}}), P2, q2n);
    LaurentSeries den = series_pochhammer2(r, mono(*r, {{"P", 2}, {"q", 2 * k_mac}}), P2, q2) *
                        series_pochhammer2(r, mono(*r, {{"P", 2}, {"q", 2 * n}}), P2, q2n);
    return num * den.inverse();
  });
  return equal_up_to(lhs, rhs, target);
}

// ---------------------------------------------------------------- theta lemmas

namespace {

struct Factor {
  Monomial arg;
  Monomial mod1;
  std::optional<Monomial> mod2;
};

struct Term {
  Monomial coef;
  std::vector<Factor> factors;
};

class TermBuilder {
 public:
  explicit TermBuilder(const SeriesRing& ring) : ring_(ring) {}

  Monomial m(std::initializer_list<std::pair<const char*, int>> powers, mpq_class c = 1) const {
    return mono(ring_, powers, std::move(c));
  }
  void poch(std::vector<Factor>& out, const Monomial& a, const Monomial& q) const { out.push_back({a, q, std::nullopt}); }
  void theta(std::vector<Factor>& out, const Monomial& a, const Monomial& q) const {
    out.push_back({a, q, std::nullopt});
    out.push_back({q * pow(a, -1), q, std::nullopt});
  }
  // Numerator and denominator halves of the elliptic gamma function.
  void gamma_num(std::vector<Factor>& out, const Monomial& a, const Monomial& q, const Monomial& r) const {
    out.push_back({q * r * pow(a, -1), q, r});
  }
  void gamma_den(std::vector<Factor>& out, const Monomial& a, const Monomial& q, const Monomial& r) const {
    out.push_back({a, q, r});
  }

 private:
  const SeriesRing& ring_;
};

LaurentSeries eval_term(const RingPtr& r, const Term& t) {
  LaurentSeries s = LaurentSeries::monomial(r, t.coef);
  for (const Factor& f : t.factors)
    s = s * (f.mod2 ? series_pochhammer2(r, f.arg, f.mod1, *f.mod2) : series_pochhammer(r, f.arg, f.mod1));
  return s;
}

LaurentSeries eval_sum(const RingPtr& r, const std::vector<Term>& terms) {
  LaurentSeries s(r);
  for (const Term& t : terms) s = s + eval_term(r, t);
  return s;
}

using SideBuilder = std::function<std::vector<Term>(const TermBuilder&)>;

bool compare_sides(const RingPtr& base, long order, const SideBuilder& lhs, const SideBuilder& rhs) {
  std::vector<long> target(base->size(), kExact);
  target[base->trunc] = order;
  auto side = [&](const SideBuilder& b) {
    return compute_to(*base, target, [&](const RingPtr& r) { return eval_sum(r, b(TermBuilder(*r))); });
  };
  return equal_up_to(side(lhs), side(rhs), target);
}

bool theta_simp2(long order) {
  RingPtr base = SeriesRing::make({"r", "a"}, "r", order);
  auto lhs = [](const TermBuilder& B) {
    const Monomial r4 = B.m({{"r", 4}});
    const Monomial r1 = B.m({{"r", 1}});
    Term t1{B.m({}), {}};
    B.theta(t1.factors, B.m({{"a", 2}, {"r", 3}}, -1), r4);
    B.theta(t1.factors, B.m({}, -1), r1);
    Term t2{B.m({{"a", -1}}), {}};
    B.theta(t2.factors, B.m({{"a", 2}, {"r", 1}}, -1), r4);
    B.theta(t2.factors, B.m({}, -1), r1);
    return std::vector<Term>{t1, t2};
  };
  auto rhs = [](const TermBuilder& B) {
    Term t{B.m({{"a", -1}}, 2), {}};
    B.theta(t.factors, B.m({{"r", 3}}, -1), B.m({{"r", 4}}));
    B.theta(t.factors, B.m({{"a", 1}}, -1), B.m({{"r", 1}}));
    return std::vector<Term>{t};
  };
  return compare_sides(base, order, lhs, rhs);
}

bool theta_simp3(long order) {
  RingPtr base = SeriesRing::make({"x", "a", "b"}, "x", order);
  auto common = [](const TermBuilder& B, std::vector<Factor>& f) {
    const Monomial x2 = B.m({{"x", 2}});
    B.theta(f, B.m({}, -1), x2);
    B.theta(f, B.m({}, -1), x2);
    B.theta(f, B.m({{"x", 1}}, -1), x2);
    B.theta(f, B.m({{"x", 1}}), x2);
  };
  auto lhs = [&](const TermBuilder& B) {
    const Monomial x1 = B.m({{"x", 1}});
    const Monomial x2 = B.m({{"x", 2}});
    Term t1{B.m({{"b", 1}}), {}};
    B.theta(t1.factors, B.m({{"a", 1}, {"b", 2}}), x1);
    B.theta(t1.factors, B.m({{"a", 1}, {"b", -4}}, -1), x2);
    common(B, t1.factors);
    Term t2{B.m({{"b", -1}}, -1), {}};
    B.theta(t2.factors, B.m({{"a", 1}, {"b", -2}}), x1);
    B.theta(t2.factors, B.m({{"a", 1}, {"b", 4}}, -1), x2);
    common(B, t2.factors);
    return std::vector<Term>{t1, t2};
  };
  auto rhs = [](const TermBuilder& B) {
    const Monomial x1 = B.m({{"x", 1}});
    const Monomial x2 = B.m({{"x", 2}});
    Term t1{B.m({{"b", -3}}, 2), {}};
    B.theta(t1.factors, B.m({{"a", 1}, {"x", 1}}, -1), x2);
    B.theta(t1.factors, B.m({{"b", 2}}), x1);
    B.theta(t1.factors, B.m({{"b", 4}}, -1), x2);
    B.theta(t1.factors, B.m({{"x", 1}}), x2);
    B.theta(t1.factors, B.m({{"a", 1}}, -1), x2);
    B.theta(t1.factors, B.m({{"a", 1}}, -1), x2);
    Term t2{B.m({{"b", -3}}, -2), {}};
    B.theta(t2.factors, B.m({{"a", 1}, {"x", 1}}, -1), x2);
    B.theta(t2.factors, B.m({{"b", 2}}), x1);
    B.theta(t2.factors, B.m({{"b", 2}}, -1), x1);
    B.theta(t2.factors, B.m({{"b", 2}}, -1), x1);
    B.theta(t2.factors, B.m({{"x", 1}}, -1), x2);
    B.theta(t2.factors, B.m({{"a", 1}}), x2);
    B.theta(t2.factors, B.m({{"a", 1}}), x2);
    return std::vector<Term>{t1, t2};
  };
  return compare_sides(base, order, lhs, rhs);
}

// Nomes x = w X, y = w Y graded by total degree in w.
bool theta_simp4(long order) {
  RingPtr base = SeriesRing::make({"w", "X", "Y"}, "w", order);
  auto xy = [](const TermBuilder& B, int a, int b, mpq_class c = 1) {
    return B.m({{"w", a + b}, {"X", a}, {"Y", b}}, std::move(c));
  };
  // Left side numerators and denominators of the product over Gamma(.; 2 tau, 8 eta).
  auto lhs_parts = [xy](const TermBuilder& B, std::vector<Factor>& num, std::vector<Factor>& den) {
    const Monomial X2 = xy(B, 2, 0);
    const Monomial Y8 = xy(B, 0, 8);
    const std::vector<Monomial> args{xy(B, 1, -4),     xy(B, 0, 6, -1), xy(B, 0, -2),    xy(B, 0, 2, -1),
                                     xy(B, 1, -2),     xy(B, 1, -2),    xy(B, 2, -2),    xy(B, 0, 8, -1),
                                     xy(B, 0, 12),     xy(B, 1, 8, -1), xy(B, 0, 4, -1), xy(B, 1, 0)};
    for (const Monomial& a : args) {
      B.gamma_num(num, a, X2, Y8);
      B.gamma_den(den, a, X2, Y8);
    }
    B.poch(den, X2, X2);
    B.poch(den, Y8, Y8);
  };
  auto rhs_parts = [xy](const TermBuilder& B, std::vector<Factor>& num, std::vector<Factor>& den) {
    const Monomial X1 = xy(B, 1, 0);
    const Monomial Y8 = xy(B, 0, 8);
    B.gamma_num(num, xy(B, 0, 6), X1, Y8);
    B.gamma_den(den, xy(B, 0, 6), X1, Y8);
    B.gamma_den(num, xy(B, 0, 2), X1, Y8);
    B.gamma_num(den, xy(B, 0, 2), X1, Y8);
    B.poch(num, xy(B, 1, 0, -1), X1);
    B.theta(num, xy(B, 0, 2, -1), X1);
    B.theta(num, xy(B, 1, 2, -1), X1);
    B.poch(den, X1, X1);
    B.theta(den, xy(B, 1, 4), X1);
    B.poch(den, xy(B, 0, 4), xy(B, 0, 4));
    B.poch(den, xy(B, 0, 2, -1), xy(B, 0, 2));
  };
  auto lhs = [&](const TermBuilder& B) {
    Term t{B.m({}, 2), {}};
    std::vector<Factor> ln, ld, rn, rd;
    lhs_parts(B, ln, ld);
    rhs_parts(B, rn, rd);
    t.factors = ln;
    t.factors.insert(t.factors.end(), rd.begin(), rd.end());
    return std::vector<Term>{t};
  };
  auto rhs = [&](const TermBuilder& B) {
    Term t{B.m({}, 2), {}};
    std::vector<Factor> ln, ld, rn, rd;
    lhs_parts(B, ln, ld);
    rhs_parts(B, rn, rd);
    t.factors = rn;
    t.factors.insert(t.factors.end(), ld.begin(), ld.end());
    return std::vector<Term>{t};
  };
  return compare_sides(base, order, lhs, rhs);
}

bool sym_rearrange(long order) {
  RingPtr base = SeriesRing::make({"w", "X", "Y", "A"}, "w", order);
  auto m = [](const TermBuilder& B, int x, int y, int a, mpq_class c = 1) {
    return B.m({{"w", x + y}, {"X", x}, {"Y", y}, {"A", a}}, std::move(c));
  };
  auto lhs = [&](const TermBuilder& B) {
    const Monomial X1 = m(B, 1, 0, 0);
    const Monomial Y8 = m(B, 0, 8, 0);
    Term t{B.m({}), {}};
    B.gamma_num(t.factors, m(B, 0, -2, 1), X1, Y8);
    B.gamma_den(t.factors, m(B, 0, 2, 1), X1, Y8);
    B.gamma_den(t.factors, m(B, 0, -2, -1), X1, Y8);
    return std::vector<Term>{t};
  };
  auto rhs = [&](const TermBuilder& B) {
    const Monomial X1 = m(B, 1, 0, 0);
    const Monomial Y8 = m(B, 0, 8, 0);
    Term t{m(B, 0, -2, -1, -1), {}};
    B.gamma_num(t.factors, m(B, 0, -2, 1), X1, Y8);
    B.gamma_num(t.factors, m(B, 0, 2, 1), X1, Y8);
    B.gamma_num(t.factors, m(B, 0, -2, -1), X1, Y8);
    B.theta(t.factors, m(B, 0, 2, 1), X1);
    B.theta(t.factors, m(B, 0, 2, 1), Y8);
    return std::vector<Term>{t};
  };
  return compare_sides(base, order, lhs, rhs);
}

}  // namespace

std::vector<std::string> theta_lemma_ids() { return {"theta-simp2", "theta-simp3", "theta-simp4", "sym-rearrange"}; }

bool theta_lemma_series_check(const std::string& id, long order) {
  if (order < 1) throw ConfigInvalid("series order must be positive");
  if (id == "theta-simp2") return theta_simp2(order);
  if (id == "theta-simp3") return theta_simp3(order);
  if (id == "theta-simp4") return theta_simp4(order);
  if (id == "sym-rearrange") return sym_rearrange(order);
  throw UnknownIdentity("unknown lemma series id " + id);
}

}  // namespace ellid::series
