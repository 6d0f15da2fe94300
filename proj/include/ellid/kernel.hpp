#pragma once

// Building blocks: q-Pochhammer symbols, theta functions, the elliptic gamma
// function and level-kappa theta functions.
//
// Additive convention: the modulus is tau with Im(tau) > 0, the argument z
// enters through e^{2 pi i z}. Multiplicative convention: the modulus is the
// nome q = e^{2 pi i tau} with |q| < 1 and the argument is u itself.
//
//   (u; q)        = prod_{n>=0} (1 - u q^n)
//   (u; q, r)     = prod_{n,m>=0} (1 - u q^n r^m)
//   theta0(u; q)  = (u; q)(q/u; q)
//   theta(z; tau) = i e^{pi i tau/4 - pi i z} (tau; tau) theta0(z; tau)
//   Gamma(z; tau, sigma) = (tau + sigma - z; tau, sigma) / (z; tau, sigma)
//
// Products stop once |u q^n| < term_epsilon; the neglected tail is bounded by
// tail_bound_factor * |u q^n| / (1 - |q|) in relative terms.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <type_traits>

#include "ellid/numeric.hpp"

namespace ellid {

template <class R>
struct TruncationPolicy {
  R term_epsilon = R(1e-17);
  long max_terms = 1000000;
  R tail_bound_factor = R(2);

  void validate() const {
    if (!(term_epsilon > 0) || max_terms < 1 || !(tail_bound_factor > 0))
      throw DomainViolation("truncation policy: term_epsilon > 0 and max_terms >= 1 required");
  }

  // Smallest admissible |1 - u q^n| before a factor counts as a zero.
  R pole_threshold() const { return std::max(term_epsilon, R(16) * machine_eps<R>()); }
};

enum class Convention { additive, multiplicative };

template <class R>
class ModularParam {
 public:
  ModularParam(const cplx<R>& tau) { *this = additive(tau); }

  static ModularParam additive(const cplx<R>& tau) {
    if (!(tau.imag() > 0) || !is_finite(tau))
      throw DomainViolation("additive modular parameter needs Im(tau) > 0");
    ModularParam m(Convention::additive);
    m.value_ = tau;
    m.nome_ = e2pi(tau);
    m.has_value_ = true;
    return m;
  }

  static ModularParam multiplicative(const cplx<R>& nome) {
    if (!(std::abs(nome) < 1) || !is_finite(nome))
      throw DomainViolation("multiplicative modular parameter needs |nome| < 1");
    ModularParam m(Convention::multiplicative);
    m.nome_ = nome;
    if (nome != cplx<R>(0)) {
      // Principal branch: tau = log(q) / (2 pi i).
      m.value_ = std::log(nome) / cplx<R>(0, 2 * pi_v<R>);
      m.has_value_ = true;
    }
    return m;
  }

  Convention convention() const { return convention_; }
  const cplx<R>& nome() const { return nome_; }
  bool has_value() const { return has_value_; }

  const cplx<R>& value() const {
    if (!has_value_) throw DomainViolation("nome 0 has no additive value");
    return value_;
  }

 private:
  explicit ModularParam(Convention c) : convention_(c) {}

  Convention convention_;
  cplx<R> value_{};
  cplx<R> nome_{};
  bool has_value_ = false;
};

template <class R>
using Modulus = std::type_identity_t<ModularParam<R>>;

template <class R>
struct ProductValue {
  cplx<R> value;
  R tail_bound;
  long terms;
};

// (u; q) with a certified relative tail bound.
template <class R>
ProductValue<R> qpoch_bounded(const cplx<R>& u, const cplx<R>& q,
                              const TruncationPolicy<R>& policy = {}, R pole_threshold = R(0)) {
  policy.validate();
  const R aq = std::abs(q);
  cplx<R> x = u;
  cplx<R> prod(1);
  long n = 0;
  while (std::abs(x) >= policy.term_epsilon) {
    if (n >= policy.max_terms)
      throw NonConvergent("q-Pochhammer: max_terms exceeded");
    const cplx<R> f = cplx<R>(1) - x;
    if (pole_threshold > 0 && std::abs(f) <= pole_threshold)
      throw PoleHit("q-Pochhammer factor vanishes");
    prod *= f;
    x *= q;
    ++n;
  }
  const R tail = policy.tail_bound_factor * std::abs(x) / (R(1) - aq);
  return {prod, tail, n};
}

// (u; q, r) with a certified relative tail bound.
template <class R>
ProductValue<R> qpoch2_bounded(const cplx<R>& u, const cplx<R>& q, const cplx<R>& r,
                               const TruncationPolicy<R>& policy = {}, R pole_threshold = R(0)) {
  policy.validate();
  const R aq = std::abs(q);
  const R ar = std::abs(r);
  cplx<R> x = u;
  cplx<R> prod(1);
  R tail = 0;
  long terms = 0;
  long layers = 0;
  while (std::abs(x) >= policy.term_epsilon) {
    if (layers >= policy.max_terms)
      throw NonConvergent("double q-Pochhammer: max_terms exceeded");
    const ProductValue<R> layer = qpoch_bounded(x, q, policy, pole_threshold);
    prod *= layer.value;
    tail += layer.tail_bound;
    terms += layer.terms;
    x *= r;
    ++layers;
  }
  tail += policy.tail_bound_factor * std::abs(x) / ((R(1) - aq) * (R(1) - ar));
  return {prod, tail, terms};
}

template <class R>
cplx<R> qpoch1_mult(const cplx<R>& u, const Modulus<R>& tau, const TruncationPolicy<R>& policy = {}) {
  return qpoch_bounded(u, tau.nome(), policy).value;
}

template <class R>
cplx<R> qpoch1(const cplx<R>& z, const Modulus<R>& tau, const TruncationPolicy<R>& policy = {}) {
  return qpoch_bounded(e2pi(z), tau.nome(), policy).value;
}

template <class R>
cplx<R> qpoch2_mult(const cplx<R>& u, const Modulus<R>& tau, const Modulus<R>& sigma,
                    const TruncationPolicy<R>& policy = {}) {
  return qpoch2_bounded(u, tau.nome(), sigma.nome(), policy).value;
}

template <class R>
cplx<R> qpoch2(const cplx<R>& z, const Modulus<R>& tau, const Modulus<R>& sigma,
               const TruncationPolicy<R>& policy = {}) {
  return qpoch2_bounded(e2pi(z), tau.nome(), sigma.nome(), policy).value;
}

template <class R>
cplx<R> theta0_mult(const cplx<R>& u, const Modulus<R>& tau, const TruncationPolicy<R>& policy = {}) {
  if (u == cplx<R>(0)) throw DomainViolation("theta0 at u = 0");
  const cplx<R>& q = tau.nome();
  return qpoch_bounded(u, q, policy).value * qpoch_bounded(q / u, q, policy).value;
}

// theta0(z; tau), evaluated after reducing z into the fundamental strip
// 0 <= Im(w) < Im(tau) with the quasi-periodicity
// theta0(w + k tau) = (-1)^k e^{-2 pi i (k w + tau k(k-1)/2)} theta0(w).
template <class R>
cplx<R> theta0(const cplx<R>& z, const Modulus<R>& tau, const TruncationPolicy<R>& policy = {}) {
  if (!tau.has_value()) return cplx<R>(1) - e2pi(z);
  const cplx<R>& t = tau.value();
  const R k = std::floor(z.imag() / t.imag());
  cplx<R> w = z - k * t;
  w -= std::floor(w.real() + R(0.5));
  const cplx<R>& q = tau.nome();
  const cplx<R> x = e2pi(w);
  const cplx<R> base = qpoch_bounded(x, q, policy).value * qpoch_bounded(e2pi(t - w), q, policy).value;
  if (k == 0) return base;
  const R sign = std::fmod(std::abs(k), R(2)) == 0 ? R(1) : R(-1);
  return sign * e2pi(-(k * w + t * (k * (k - 1) / 2))) * base;
}

template <class R>
cplx<R> jacobi_theta(const cplx<R>& z, const Modulus<R>& tau, const TruncationPolicy<R>& policy = {}) {
  const cplx<R>& t = tau.value();
  const cplx<R> i(0, 1);
  return i * epi(t / R(4) - z) * qpoch_bounded(tau.nome(), tau.nome(), policy).value * theta0(z, tau, policy);
}

template <class R>
cplx<R> jacobi_theta_prime0(const Modulus<R>& tau, const TruncationPolicy<R>& policy = {}) {
  const cplx<R> p = qpoch_bounded(tau.nome(), tau.nome(), policy).value;
  return R(2) * pi_v<R> * epi(tau.value() / R(4)) * p * p * p;
}

template <class R>
cplx<R> ell_gamma_mult(const cplx<R>& u, const Modulus<R>& tau, const Modulus<R>& sigma,
                       const TruncationPolicy<R>& policy = {}) {
  if (u == cplx<R>(0)) throw PoleHit("elliptic gamma at u = 0");
  const cplx<R>& q = tau.nome();
  const cplx<R>& r = sigma.nome();
  const cplx<R> den = qpoch2_bounded(u, q, r, policy, policy.pole_threshold()).value;
  const cplx<R> num = qpoch2_bounded(q * r / u, q, r, policy).value;
  return num / den;
}

template <class R>
cplx<R> ell_gamma(const cplx<R>& z, const Modulus<R>& tau, const Modulus<R>& sigma,
                  const TruncationPolicy<R>& policy = {}) {
  const cplx<R>& q = tau.nome();
  const cplx<R>& r = sigma.nome();
  const cplx<R> den = qpoch2_bounded(e2pi(z), q, r, policy, policy.pole_threshold()).value;
  const cplx<R> num = qpoch2_bounded(e2pi(tau.value() + sigma.value() - z), q, r, policy).value;
  return num / den;
}

// The cubic polynomial in the three-term modular relation
// Gamma(z/s; t/s, -1/s) = e^{pi i Q(z; t, s)} Gamma((z - s)/t; -1/t, -s/t) Gamma(z; t, s).
template <class R>
cplx<R> ell_gamma_modular_Q(const cplx<R>& z, const cplx<R>& tau, const cplx<R>& sigma) {
  if (tau == cplx<R>(0) || sigma == cplx<R>(0)) throw DomainViolation("Q needs tau * sigma != 0");
  const cplx<R> ts = tau * sigma;
  const cplx<R> one(1);
  return z * z * z / (R(3) * ts) - (tau + sigma - one) / (R(2) * ts) * z * z +
         (tau * tau + sigma * sigma + R(3) * ts - R(3) * tau - R(3) * sigma + one) / (R(6) * ts) * z +
         (tau + sigma - one) * (one / tau + one / sigma - one) / R(12);
}

enum class ThetaMode { series, product };

// theta_{mu,kappa}(lambda; tau) = sum_{n in Z + mu/(2 kappa)} e^{2 pi i kappa (n^2 tau + n lambda)}.
template <class R>
cplx<R> theta_level(long mu, long kappa, const cplx<R>& lambda, const Modulus<R>& tau, ThetaMode mode,
                    const TruncationPolicy<R>& policy = {}) {
  if (kappa < 1) throw DomainViolation("theta_level needs kappa >= 1");
  const cplx<R>& t = tau.value();
  const R k = static_cast<R>(kappa);
  const R m = static_cast<R>(mu);
  if (mode == ThetaMode::product) {
    const ModularParam<R> t2k(R(2) * k * t);
    return epi(t * m * m / (R(2) * k) + lambda * m) * qpoch_bounded(t2k.nome(), t2k.nome(), policy).value *
           theta0(cplx<R>(R(0.5)) + m * t + k * t + k * lambda, t2k, policy);
  }
  // Series: |term(n)| = exp(-2 pi kappa (n^2 Im tau + n Im lambda)), peaked at n* = -Im lambda / (2 Im tau).
  const R shift = m / (R(2) * k);
  const R center = std::round(-lambda.imag() / (R(2) * t.imag()) - shift);
  auto term = [&](R j) {
    const R n = j + shift;
    return e2pi(k * (n * n * t + n * lambda));
  };
  cplx<R> sum = term(center);
  const R peak = std::abs(sum);
  const R stop = std::numeric_limits<R>::epsilon() * R(1e-2);
  for (R side : {R(1), R(-1)}) {
    R j = center + side;
    long count = 0;
    for (;;) {
      const cplx<R> v = term(j);
      sum += v;
      const R n = j + shift;
      const bool past_peak = (n * t.imag() + lambda.imag() / 2) * side > 0;
      if (past_peak && std::abs(v) < stop * std::max(peak, std::abs(sum))) break;
      if (++count > policy.max_terms) throw NonConvergent("theta_level series: Im(tau) too small");
      j += side;
    }
  }
  return sum;
}

}  // namespace ellid
