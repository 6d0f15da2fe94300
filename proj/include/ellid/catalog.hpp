#pragma once

// Integrands and closed forms of the theta hypergeometric identities.
//
// Every contour integral is taken over the cycle that separates two declared
// pole families: the "upper" lattice stays above the cycle, the "lower" one
// below. The cycle is audited against the families before integration.

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "ellid/contour.hpp"
#include "ellid/kernel.hpp"
#include "ellid/numeric.hpp"

namespace ellid {

template <class R>
struct EvalOptions {
  R quad_tol = R(1e-12);
  TruncationPolicy<R> policy{};
  QuadratureOptions<R> quad{};
};

template <class R>
struct Integral {
  cplx<R> value;
  R error;
  long evaluations;
};

template <class R>
PoleLattice<R> upper_lattice(const cplx<R>& base, const cplx<R>& s1, const cplx<R>& s2) {
  return {base, s1, s2, Side::above};
}

template <class R>
PoleLattice<R> lower_lattice(const cplx<R>& base, const cplx<R>& s1, const cplx<R>& s2) {
  return {base, -s1, -s2, Side::below};
}

template <class R, class F>
Integral<R> cycle_integral(const F& f, const std::vector<PoleLattice<R>>& lattices, const EvalOptions<R>& opt) {
  const Contour<R> c = separating_contour(lattices);
  const AuditReport<R> audit = pole_audit(declared_poles(lattices), c);
  if (!audit.pass) throw PoleOnPath("pole audit failed: " + audit.summary());
  QuadratureResult<R> q = integrate(f, c, opt.quad_tol, opt.quad);
  // Small values get a second pass with a relative target.
  const R mag = std::abs(q.value);
  if (mag < R(1) && mag > R(0)) {
    const long first = q.evaluations;
    q = integrate(f, c, opt.quad_tol * mag, opt.quad);
    q.evaluations += first;
  }
  return {q.value, q.error_estimate, q.evaluations};
}

// Distance from z to the lattice Z + Z*sigma.
template <class R>
R lattice_distance(const cplx<R>& z, const cplx<R>& sigma) {
  cplx<R> w = z - std::round(z.imag() / sigma.imag()) * sigma;
  w -= std::round(w.real());
  return std::abs(w);
}

// ---------------------------------------------------------------------------
// Elliptic beta integral

template <class R>
using Six = std::array<cplx<R>, 6>;

template <class R>
void check_balance(const Six<R>& s, const cplx<R>& tau, const cplx<R>& sigma) {
  cplx<R> sum(0);
  for (const auto& x : s) sum += x;
  if (std::abs(sum - tau - sigma) > R(1e-12)) throw BalanceViolation("sum of s_i must equal tau + sigma");
}

template <class R>
std::vector<PoleLattice<R>> spiridonov_lattices(const Six<R>& s, const cplx<R>& tau, const cplx<R>& sigma) {
  std::vector<PoleLattice<R>> out;
  for (const auto& x : s) {
    out.push_back(upper_lattice(x, tau, sigma));
    out.push_back(lower_lattice(-x, tau, sigma));
  }
  return out;
}

template <class R>
Integral<R> spiridonov_lhs(const Six<R>& s, const cplx<R>& tau, const cplx<R>& sigma, const EvalOptions<R>& opt = {}) {
  check_balance(s, tau, sigma);
  const auto& pol = opt.policy;
  auto f = [&](const cplx<R>& t) {
    // 1 / Gamma(+-2t) = theta0(2t; tau) theta0(-2t; sigma)
    cplx<R> v = theta0(R(2) * t, tau, pol) * theta0(R(-2) * t, sigma, pol);
    for (const auto& x : s) v *= ell_gamma(x + t, tau, sigma, pol) * ell_gamma(x - t, tau, sigma, pol);
    return v;
  };
  return cycle_integral<R>(f, spiridonov_lattices(s, tau, sigma), opt);
}

template <class R>
cplx<R> spiridonov_rhs(const Six<R>& s, const cplx<R>& tau, const cplx<R>& sigma, const EvalOptions<R>& opt = {}) {
  check_balance(s, tau, sigma);
  const auto& pol = opt.policy;
  cplx<R> v = R(2) / (qpoch1(tau, tau, pol) * qpoch1(sigma, sigma, pol));
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) v *= ell_gamma(s[i] + s[j], tau, sigma, pol);
  return v;
}

// ---------------------------------------------------------------------------
// Evaluations of the first kind (cycles at +-1/4)

template <class R>
cplx<R> quarter_prefactor(const cplx<R>& tau, const cplx<R>& sigma, const TruncationPolicy<R>& pol) {
  const cplx<R> h(R(0.5));
  return cplx<R>(1) / (qpoch1(tau, tau, pol) * qpoch1(tau + h, R(2) * tau, pol) * qpoch1(sigma, sigma, pol) *
                       qpoch1(sigma + h, R(2) * sigma, pol));
}

// sign = +1: cycle above -1/4, below 1/4; sign = -1: the mirrored cycle.
template <class R>
Integral<R> quarter_lhs(int sign, const cplx<R>& tau, const cplx<R>& sigma, const EvalOptions<R>& opt) {
  const auto& pol = opt.policy;
  const cplx<R> a(R(0.25) * R(sign));
  const cplx<R> h(R(0.5));
  auto f = [&](const cplx<R>& t) {
    return ell_gamma(t + a, tau, sigma, pol) / ell_gamma(t - a, tau, sigma, pol) * theta0(t + h, tau, pol) /
           theta0(t - a, tau, pol) * theta0(t + h, sigma, pol) / theta0(t - a, sigma, pol);
  };
  return cycle_integral<R>(f, {upper_lattice(a, tau, sigma), lower_lattice(-a, tau, sigma)}, opt);
}

template <class R>
Integral<R> eval1_lhs(const cplx<R>& tau, const cplx<R>& sigma, const EvalOptions<R>& opt = {}) {
  return quarter_lhs(1, tau, sigma, opt);
}

template <class R>
Integral<R> eval2_lhs(const cplx<R>& tau, const cplx<R>& sigma, const EvalOptions<R>& opt = {}) {
  return quarter_lhs(-1, tau, sigma, opt);
}

template <class R>
cplx<R> eval1_rhs(const cplx<R>& tau, const cplx<R>& sigma, const EvalOptions<R>& opt = {}) {
  const auto& pol = opt.policy;
  return -cplx<R>(1, 1) * ell_gamma(cplx<R>(R(0.25)), tau, sigma, pol) / ell_gamma(cplx<R>(R(0.75)), tau, sigma, pol) *
         quarter_prefactor(tau, sigma, pol);
}

template <class R>
cplx<R> eval2_rhs(const cplx<R>& tau, const cplx<R>& sigma, const EvalOptions<R>& opt = {}) {
  const auto& pol = opt.policy;
  return -cplx<R>(1, -1) * ell_gamma(cplx<R>(R(0.75)), tau, sigma, pol) /
         ell_gamma(cplx<R>(R(0.25)), tau, sigma, pol) * quarter_prefactor(tau, sigma, pol);
}

// ---------------------------------------------------------------------------
// Evaluation of the second kind

template <class R>
std::vector<PoleLattice<R>> asym_lattices(const cplx<R>& tau, const cplx<R>& eta) {
  const cplx<R> e8 = R(8) * eta;
  return {upper_lattice(R(-2) * eta, tau, e8), lower_lattice(R(2) * eta, tau, e8)};
}

template <class R>
void check_asym_domain(const cplx<R>& tau, const cplx<R>& eta) {
  if (!(tau.imag() > 0) || !(eta.imag() > 0)) throw DomainViolation("asymmetric integral needs Im(tau), Im(eta) > 0");
}

template <class R>
Integral<R> I_tilde(const cplx<R>& lambda, const cplx<R>& tau, const cplx<R>& eta, const EvalOptions<R>& opt = {}) {
  check_asym_domain(tau, eta);
  const auto& pol = opt.policy;
  const cplx<R> e2 = R(2) * eta;
  const cplx<R> e8 = R(8) * eta;
  const cplx<R> t8 = R(8) * tau;
  const cplx<R> shift = R(6) * tau - R(4) * lambda + R(0.5);
  auto f = [&](const cplx<R>& t) {
    return ell_gamma(t - e2, tau, e8, pol) / ell_gamma(t + e2, tau, e8, pol) * theta0(t + lambda, tau, pol) /
           theta0(t + e2, tau, pol) * theta0(t - R(4) * eta, e8, pol) / theta0(t + e2, e8, pol) *
           theta0(R(2) * t + shift, t8, pol);
  };
  Integral<R> r = cycle_integral<R>(f, asym_lattices(tau, eta), opt);
  const cplx<R> pre = epi(R(-3) * lambda);
  r.value *= pre;
  r.error *= std::abs(pre);
  return r;
}

template <class R>
Integral<R> I_sym(const cplx<R>& lambda, const cplx<R>& tau, const cplx<R>& eta, const EvalOptions<R>& opt = {}) {
  const Integral<R> a = I_tilde(lambda, tau, eta, opt);
  const Integral<R> b = I_tilde(-lambda, tau, eta, opt);
  return {a.value - b.value, a.error + b.error, a.evaluations + b.evaluations};
}

template <class R>
cplx<R> eval3_rhs(const cplx<R>& lambda, const cplx<R>& tau, const cplx<R>& eta, const EvalOptions<R>& opt = {}) {
  check_asym_domain(tau, eta);
  const auto& pol = opt.policy;
  const cplx<R> e2 = R(2) * eta;
  const cplx<R> e8 = R(8) * eta;
  const cplx<R> t8 = R(8) * tau;
  const cplx<R> e4 = R(4) * eta;
  const cplx<R> head = e2pi(R(-6) * eta) * ell_gamma(R(6) * eta, tau, e8, pol) / ell_gamma(e2, tau, e8, pol) /
                       (qpoch1(t8, t8, pol) * theta0(-e4, tau, pol)) /
                       (qpoch1(e4, e4, pol) * qpoch1(e2 + R(0.5), e2, pol));
  return head * epi(R(-3) * lambda) * theta0(lambda, tau, pol) * theta0(lambda - e2, tau, pol) *
         theta0(lambda + e2, tau, pol);
}

// ---------------------------------------------------------------------------
// Felder-Varchenko function

template <class R>
std::vector<PoleLattice<R>> fv_lattices(const cplx<R>& tau, const cplx<R>& sigma, const cplx<R>& eta) {
  return {upper_lattice(R(2) * eta, tau, sigma), lower_lattice(R(-2) * eta, tau, sigma)};
}

template <class R>
Integral<R> fv_u(const cplx<R>& lambda, const cplx<R>& mu, const cplx<R>& tau, const cplx<R>& sigma,
                 const cplx<R>& eta, const EvalOptions<R>& opt = {}) {
  if (eta == cplx<R>(0)) throw DomainViolation("fv_u needs eta != 0");
  const auto& pol = opt.policy;
  const cplx<R> e2 = R(2) * eta;
  auto f = [&](const cplx<R>& t) {
    return ell_gamma(t + e2, tau, sigma, pol) / ell_gamma(t - e2, tau, sigma, pol) *
           jacobi_theta(t + lambda, tau, pol) / jacobi_theta(t - e2, tau, pol) * jacobi_theta(t + mu, sigma, pol) /
           jacobi_theta(t - e2, sigma, pol);
  };
  Integral<R> r = cycle_integral<R>(f, fv_lattices(tau, sigma, eta), opt);
  const cplx<R> pre = epi(-lambda * mu / e2);
  r.value *= pre;
  r.error *= std::abs(pre);
  return r;
}

// Special value at eta = -1/8.
template <class R>
cplx<R> fv_val1_rhs(const cplx<R>& tau, const cplx<R>& sigma, const EvalOptions<R>& opt = {}) {
  const auto& pol = opt.policy;
  return -cplx<R>(1, 1) * ell_gamma(cplx<R>(R(0.75)), tau, sigma, pol) /
         ell_gamma(cplx<R>(R(0.25)), tau, sigma, pol) * quarter_prefactor(tau, sigma, pol);
}

// Special value at eta = 1/8, in the form obtained from the first-kind
// evaluation with the cycle above -1/4 and below 1/4.
template <class R>
cplx<R> fv_val2_rhs(const cplx<R>& tau, const cplx<R>& sigma, const EvalOptions<R>& opt = {}) {
  const auto& pol = opt.policy;
  return -cplx<R>(1, -1) * ell_gamma(cplx<R>(R(0.25)), tau, sigma, pol) /
         ell_gamma(cplx<R>(R(0.75)), tau, sigma, pol) * quarter_prefactor(tau, sigma, pol);
}

// The eta = 1/8 value with the gamma ratio inverted, as it is printed.
template <class R>
cplx<R> fv_val2_printed(const cplx<R>& tau, const cplx<R>& sigma, const EvalOptions<R>& opt = {}) {
  const auto& pol = opt.policy;
  return -cplx<R>(1, -1) * ell_gamma(cplx<R>(R(0.75)), tau, sigma, pol) /
         ell_gamma(cplx<R>(R(0.25)), tau, sigma, pol) * quarter_prefactor(tau, sigma, pol);
}

// ---------------------------------------------------------------------------
// Hypergeometric theta functions and elliptic Macdonald polynomials

template <class R>
cplx<R> Q_factor(const cplx<R>& mu, const cplx<R>& sigma, const cplx<R>& eta, const TruncationPolicy<R>& pol = {}) {
  const cplx<R> e2 = R(2) * eta;
  const R eps = R(1e-12);
  if (lattice_distance(mu - e2, sigma) < eps || lattice_distance(mu + e2, sigma) < eps)
    throw PoleHit("Q factor: mu +- 2 eta on the period lattice");
  return jacobi_theta(R(4) * eta, sigma, pol) * jacobi_theta_prime0<R>(sigma, pol) /
         (jacobi_theta(mu - e2, sigma, pol) * jacobi_theta(mu + e2, sigma, pol));
}

template <class R>
void check_htf_domain(const cplx<R>& tau, const cplx<R>& eta) {
  if (!(eta.imag() < 0)) throw DomainViolation("hypergeometric theta function needs Im(eta) < 0");
  if (!(tau.imag() > 0)) throw DomainViolation("hypergeometric theta function needs Im(tau) > 0");
  const R j = R(-4) * eta.imag() / tau.imag();
  const R jr = std::round(j);
  if (jr >= 1 && std::abs(j - jr) < R(1e-9)) {
    const cplx<R> z = jr * tau + R(4) * eta;
    if (std::abs(z.real() - std::round(z.real())) < R(1e-9))
      throw DomainViolation("j tau + 4 eta is an integer");
  }
}

template <class R>
Integral<R> htf_I_tilde(long mu, long kappa, const cplx<R>& lambda, const cplx<R>& tau, const cplx<R>& eta,
                        const EvalOptions<R>& opt = {}) {
  check_htf_domain(tau, eta);
  if (kappa < 1) throw DomainViolation("kappa must be positive");
  const auto& pol = opt.policy;
  const R k = static_cast<R>(kappa);
  const R m = static_cast<R>(mu);
  const cplx<R> sigma = R(-2) * eta * k;
  const cplx<R> e2 = R(2) * eta;
  const ModularParam<R> tm(tau);
  auto f = [&](const cplx<R>& t) {
    return ell_gamma(t + e2, tau, sigma, pol) / ell_gamma(t - e2, tau, sigma, pol) *
           jacobi_theta(t + lambda, tau, pol) / jacobi_theta(t - e2, tau, pol) *
           jacobi_theta(t + e2 * m, sigma, pol) / jacobi_theta(t - e2, sigma, pol) * e2pi(-m * t / k) *
           theta_level(mu, kappa, R(2) * t / k - lambda, tm, ThetaMode::product, pol);
  };
  return cycle_integral<R>(f, fv_lattices(tau, sigma, eta), opt);
}

template <class R>
Integral<R> delta_tilde(long mu, long kappa, const cplx<R>& lambda, const cplx<R>& tau, const cplx<R>& eta,
                        const EvalOptions<R>& opt = {}) {
  const R k = static_cast<R>(kappa);
  const R m = static_cast<R>(mu);
  Integral<R> r = htf_I_tilde(mu, kappa, lambda, tau, eta, opt);
  const cplx<R> pre = e2pi(eta * m * m / k) * Q_factor(R(2) * eta * m, R(-2) * eta * k, eta, opt.policy);
  r.value *= pre;
  r.error *= std::abs(pre);
  return r;
}

template <class R>
Integral<R> delta_sym(long mu, long kappa, const cplx<R>& lambda, const cplx<R>& tau, const cplx<R>& eta,
                      const EvalOptions<R>& opt = {}) {
  const Integral<R> a = delta_tilde(mu, kappa, lambda, tau, eta, opt);
  const Integral<R> b = delta_tilde(mu, kappa, -lambda, tau, eta, opt);
  return {a.value - b.value, a.error + b.error, a.evaluations + b.evaluations};
}

inline long mod_floor(long a, long n) { return ((a % n) + n) % n; }

inline void check_macdonald_indices(long mu, long kappa) {
  if (kappa < 4) throw DomainViolation("elliptic Macdonald polynomial needs kappa >= 4");
  const long r = mod_floor(mu + 2, kappa);
  if (r == 1 || r == kappa - 1) throw DomainViolation("mu + 2 = +-1 mod kappa");
}

template <class R>
Integral<R> ellmac_P(long mu, long kappa, const cplx<R>& lambda, const cplx<R>& tau, const cplx<R>& eta,
                     const EvalOptions<R>& opt = {}) {
  check_macdonald_indices(mu, kappa);
  check_htf_domain(tau, eta);
  const auto& pol = opt.policy;
  const R k = static_cast<R>(kappa);
  const R m2 = static_cast<R>(mu + 2);
  const cplx<R> e2 = R(2) * eta;
  const cplx<R> den =
      jacobi_theta(lambda - e2, tau, pol) * jacobi_theta(lambda, tau, pol) * jacobi_theta(lambda + e2, tau, pol);
  if (den == cplx<R>(0)) throw PoleHit("elliptic Macdonald polynomial: lambda at a theta zero");
  Integral<R> d = delta_sym(mu + 2, kappa, lambda, tau, eta, opt);
  const cplx<R> pre = epi(-(R(4) * eta + tau) * m2 * m2 / (R(2) * k) + R(0.75) * tau);
  d.value = pre * d.value / den;
  d.error = std::abs(pre / den) * d.error;
  return d;
}

template <class R>
cplx<R> ellmac_P04_closed(const cplx<R>& tau, const cplx<R>& eta, const EvalOptions<R>& opt = {}) {
  const auto& pol = opt.policy;
  const cplx<R> m8 = R(-8) * eta;
  const cplx<R> m4 = R(-4) * eta;
  const cplx<R> p = qpoch1(tau, tau, pol);
  return R(-2) * pi_v<R> * ell_gamma(R(-6) * eta, tau, m8, pol) / ell_gamma(R(-2) * eta, tau, m8, pol) /
         (theta0(R(4) * eta, tau, pol) * p * p * p) * qpoch1(m4, m4, pol) / qpoch1(R(-2) * eta, m4, pol);
}

template <class R>
cplx<R> ellmac_eval_rhs(long mu, long kappa, const cplx<R>& eta, const EvalOptions<R>& opt = {}) {
  check_macdonald_indices(mu, kappa);
  const auto& pol = opt.policy;
  const R k = static_cast<R>(kappa);
  const R m2 = static_cast<R>(mu + 2);
  const cplx<R> sk = R(-2) * k * eta;
  const cplx<R> m8 = R(-8) * eta;
  const cplx<R> m4 = R(-4) * eta;
  const cplx<R> m2e = R(-2) * eta;
  const cplx<R> pk = qpoch1(sk, sk, pol);
  const cplx<R> p4 = qpoch1(m4, m4, pol);
  return R(-2) * pi_v<R> * e2pi(R(-6) * eta - m2 * eta) * ell_gamma(R(-6) * eta, sk, m8, pol) /
         ell_gamma(m2e, sk, m8, pol) * theta0(R(2) * m2 * eta, sk, pol) * pk * pk /
         (qpoch1(m8, m8, pol) * p4 * p4 * qpoch1(m2e, m2e, pol));
}

// The defining j-series, summed outward from j = mu until terms drop below
// rel_stop relative to the running sum.
template <class R>
Integral<R> delta_series(long mu, long kappa, const cplx<R>& lambda, const cplx<R>& tau, const cplx<R>& eta,
                         const EvalOptions<R>& opt = {}, R rel_stop = R(1e-14), long max_blocks = 40) {
  check_htf_domain(tau, eta);
  const auto& pol = opt.policy;
  const R k = static_cast<R>(kappa);
  const cplx<R> sigma = R(-2) * eta * k;
  auto term = [&](long j, Integral<R>& acc) {
    const R jr = static_cast<R>(j);
    const Integral<R> u = fv_u(lambda, R(2) * eta * jr, tau, sigma, eta, opt);
    const cplx<R> w = Q_factor(R(2) * eta * jr, sigma, eta, pol) * epi((tau + R(4) * eta) * jr * jr / (R(2) * k));
    acc.value += u.value * w;
    acc.error += u.error * std::abs(w);
    acc.evaluations += u.evaluations;
    return std::abs(u.value * w);
  };
  Integral<R> acc{cplx<R>(0), R(0), 0};
  term(mu, acc);
  for (int dir : {1, -1}) {
    for (long b = 1;; ++b) {
      if (b > max_blocks) throw NonConvergent("j-series did not converge");
      const R mag = term(mu + dir * 2 * kappa * b, acc);
      if (mag < rel_stop * std::abs(acc.value)) break;
    }
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Modular relations for P_{0,4}

template <class R>
Integral<R> modular_S(int which, const cplx<R>& tau, const cplx<R>& eta, const EvalOptions<R>& opt = {}) {
  const auto& pol = opt.policy;
  const cplx<R> A = cplx<R>(1) / (R(8) * eta);
  const cplx<R> h(R(0.5)), q1(R(0.25)), q3(R(0.75));
  if (which < 0) {
    const cplx<R> B = tau / (R(8) * eta);
    if (!(B.imag() > 0) || !(A.imag() > 0)) throw DomainViolation("S-minus needs Im(1/8eta), Im(tau/8eta) > 0");
    Integral<R> u = fv_u(h, h, A, B, cplx<R>(R(-0.125)), opt);
    const cplx<R> w = R(-2) * jacobi_theta(h, B, pol) * jacobi_theta_prime0<R>(B, pol) /
                      (jacobi_theta(q3, B, pol) * jacobi_theta(q1, B, pol));
    return {u.value * w, u.error * std::abs(w), u.evaluations};
  }
  const cplx<R> B = -tau / (R(8) * eta);
  if (!(B.imag() > 0) || !(A.imag() > 0)) throw DomainViolation("S-plus needs Im(1/8eta), Im(-tau/8eta) > 0");
  Integral<R> u = fv_u(h, -h, A, B, cplx<R>(R(0.125)), opt);
  const cplx<R> w = R(2) * jacobi_theta(h, B, pol) * jacobi_theta_prime0<R>(B, pol) /
                    (jacobi_theta(q1, B, pol) * jacobi_theta(q3, B, pol));
  return {u.value * w, u.error * std::abs(w), u.evaluations};
}

template <class R>
cplx<R> modular_rhs(int which, const cplx<R>& tau, const cplx<R>& eta) {
  const cplx<R> c = R(4) * std::sqrt(R(2)) * pi_v<R> * cplx<R>(0, 1) * tau;
  const cplx<R> i(0, 1);
  if (which < 0)
    return c * std::exp(i * pi_v<R> *
                        (R(4) + R(216) * eta * eta - R(42) * eta * (tau - R(1)) + R(3) * tau + R(4) * tau * tau) /
                        (R(12) * tau));
  return -c * std::exp(i * pi_v<R> *
                       (R(4) + R(216) * eta * eta - R(42) * eta * (R(1) + tau) - R(3) * tau + R(4) * tau * tau) /
                       (R(12) * tau));
}

template <class R>
Integral<R> modular_lhs(int which, const cplx<R>& lambda, const cplx<R>& tau, const cplx<R>& eta,
                        const EvalOptions<R>& opt = {}) {
  const cplx<R> tau2 = cplx<R>(-1) / tau;
  const cplx<R> eta2 = (which < 0 ? eta : -eta) / tau;
  const Integral<R> p1 = ellmac_P(0, 4, lambda, tau, eta, opt);
  const Integral<R> p2 = ellmac_P(0, 4, lambda, tau2, eta2, opt);
  const Integral<R> s = modular_S(which, tau, eta, opt);
  const cplx<R> v = p1.value * s.value / p2.value;
  const R rel = p1.error / std::abs(p1.value) + s.error / std::abs(s.value) + p2.error / std::abs(p2.value);
  return {v, rel * std::abs(v), p1.evaluations + p2.evaluations + s.evaluations};
}

// ---------------------------------------------------------------------------
// Lemmas behind the second-kind evaluation


template <class R>
struct Sides {
  cplx<R> lhs;
  cplx<R> rhs;
  R quad_error = 0;
};

template <class R>
Sides<R> lemma_sym_rearrange(const cplx<R>& t, const cplx<R>& tau, const cplx<R>& eta, const TruncationPolicy<R>& pol = {}) {
  const cplx<R> e2 = R(2) * eta;
  const cplx<R> e8 = R(8) * eta;
  const cplx<R> lhs = ell_gamma(t - e2, tau, e8, pol) / ell_gamma(t + e2, tau, e8, pol) /
                      (theta0(t + e2, tau, pol) * theta0(t + e2, e8, pol));
  const cplx<R> rhs = -e2pi(-t - e2) * ell_gamma(t - e2, tau, e8, pol) * ell_gamma(-t - e2, tau, e8, pol);
  return {lhs, rhs};
}

template <class R>
cplx<R> J1_tilde(const cplx<R>& t, const cplx<R>& tau, const cplx<R>& eta, const TruncationPolicy<R>& pol) {
  const cplx<R> e2 = R(2) * eta;
  const cplx<R> e8 = R(8) * eta;
  return ell_gamma(t - e2, tau, e8, pol) * ell_gamma(-t - e2, tau, e8, pol) * theta0(t + R(4) * eta, e8, pol);
}

template <class R>
cplx<R> J2_tilde(const cplx<R>& t, const cplx<R>& lambda, const cplx<R>& tau, const TruncationPolicy<R>& pol) {
  const cplx<R> t8 = R(8) * tau;
  return epi(R(-3) * lambda) * theta0(t + lambda, tau, pol) *
         theta0(R(2) * t + R(6) * tau - R(4) * lambda + R(0.5), t8, pol);
}

template <class R>
Sides<R> lemma_int_rearrange(const cplx<R>& lambda, const cplx<R>& tau, const cplx<R>& eta, const EvalOptions<R>& opt = {}) {
  check_asym_domain(tau, eta);
  const auto& pol = opt.policy;
  const Integral<R> a = I_tilde(lambda, tau, eta, opt);
  auto f = [&](const cplx<R>& t) { return J1_tilde(t, tau, eta, pol) * J2_tilde(t, lambda, tau, pol); };
  const Integral<R> b = cycle_integral<R>(f, asym_lattices(tau, eta), opt);
  const cplx<R> pre = e2pi(R(-6) * eta);
  return {a.value, pre * b.value, a.error + std::abs(pre) * b.error};
}

template <class R>
Sides<R> lemma_theta_simp(const cplx<R>& t, const cplx<R>& lambda, const cplx<R>& tau, const TruncationPolicy<R>& pol = {}) {
  const cplx<R> t2 = R(2) * tau;
  const cplx<R> h(R(0.5));
  const cplx<R> lhs = J2_tilde(t, lambda, tau, pol) - J2_tilde(-t, -lambda, tau, pol);
  const cplx<R> rhs = R(2) * theta0(R(6) * tau + h, R(8) * tau, pol) * epi(lambda - R(2) * t) *
                      theta0(t + lambda, tau, pol) * theta0(t - R(2) * lambda + h, t2, pol) / theta0(h, t2, pol);
  return {lhs, rhs};
}

template <class R>
Sides<R> lemma_full_sym(const cplx<R>& t, const cplx<R>& lambda, const cplx<R>& tau, const TruncationPolicy<R>& pol = {}) {
  const cplx<R> t2 = R(2) * tau;
  const cplx<R> h(R(0.5));
  const cplx<R> lhs = J2_tilde(t, lambda, tau, pol) - J2_tilde(t, -lambda, tau, pol) + J2_tilde(-t, lambda, tau, pol) -
                      J2_tilde(-t, -lambda, tau, pol);
  const cplx<R> th = theta0(h, t2, pol);
  const cplx<R> common = e2pi(-t) * theta0(t + tau + h, t2, pol);
  const cplx<R> a = theta0(R(2) * lambda + h, t2, pol) / theta0(tau + h, t2, pol) * common *
                    std::pow(theta0(t + h, t2, pol), 2);
  const cplx<R> b =
      std::pow(theta0(lambda + h, tau, pol), 2) / theta0(tau, t2, pol) * common * std::pow(theta0(t, t2, pol), 2);
  const cplx<R> rhs =
      R(4) * theta0(R(6) * tau + h, R(8) * tau, pol) * theta0(lambda, tau, pol) / (th * th * th) * epi(R(-3) * lambda) * (a - b);
  return {lhs, rhs};
}

template <class R>
Sides<R> lemma_theta_simp2(const cplx<R>& z, const cplx<R>& sigma, const TruncationPolicy<R>& pol = {}) {
  const cplx<R> s4 = R(4) * sigma;
  const cplx<R> h(R(0.5));
  const cplx<R> lhs = theta0(R(2) * z + R(3) * sigma + h, s4, pol) + e2pi(-z) * theta0(R(2) * z + sigma + h, s4, pol);
  const cplx<R> rhs =
      R(2) * theta0(R(3) * sigma + h, s4, pol) * e2pi(-z) * theta0(z + h, sigma, pol) / theta0(h, sigma, pol);
  return {lhs, rhs};
}

template <class R>
Sides<R> lemma_theta_simp3(const cplx<R>& t, const cplx<R>& lambda, const cplx<R>& tau, const TruncationPolicy<R>& pol = {}) {
  const cplx<R> t2 = R(2) * tau;
  const cplx<R> h(R(0.5));
  const cplx<R> lhs = epi(lambda) * theta0(t + lambda, tau, pol) * theta0(t - R(2) * lambda + h, t2, pol) -
                      epi(-lambda) * theta0(t - lambda, tau, pol) * theta0(t + R(2) * lambda + h, t2, pol);
  const cplx<R> th = theta0(h, t2, pol);
  const cplx<R> a = theta0(R(2) * lambda + h, t2, pol) / theta0(tau + h, t2, pol) * std::pow(theta0(t + h, t2, pol), 2);
  const cplx<R> b = std::pow(theta0(lambda + h, tau, pol), 2) / theta0(tau, t2, pol) * std::pow(theta0(t, t2, pol), 2);
  const cplx<R> rhs = R(2) * epi(R(-3) * lambda) * theta0(t + tau + h, t2, pol) * theta0(lambda, tau, pol) / (th * th) * (a - b);
  return {lhs, rhs};
}

// 14-factor product of Gamma(.; 2 tau, 8 eta) shared by the theta-simp4 left
// side and the second integral evaluation.
template <class R>
cplx<R> int_eval2_closed(const cplx<R>& tau, const cplx<R>& eta, const TruncationPolicy<R>& pol = {}) {
  const cplx<R> t2 = R(2) * tau;
  const cplx<R> e8 = R(8) * eta;
  const cplx<R> h(R(0.5));
  auto G = [&](const cplx<R>& z) { return ell_gamma(z, t2, e8, pol); };
  const cplx<R> e = eta;
  return R(2) / (qpoch1(t2, t2, pol) * qpoch1(e8, e8, pol)) * G(R(-4) * e + tau) * G(R(6) * e + h) * G(R(-2) * e) *
         G(R(2) * e + h) * std::pow(G(R(-2) * e + tau), 2) * G(R(-2) * e + t2) * G(R(8) * e + h) * G(R(12) * e) *
         G(R(8) * e + tau + h) * G(R(4) * e + h) * G(tau);
}

template <class R>
cplx<R> int_eval1_closed(const cplx<R>& tau, const cplx<R>& eta, const TruncationPolicy<R>& pol = {}) {
  const cplx<R> t2 = R(2) * tau;
  const cplx<R> e8 = R(8) * eta;
  const cplx<R> h(R(0.5));
  auto G = [&](const cplx<R>& z) { return ell_gamma(z, t2, e8, pol); };
  const cplx<R> e = eta;
  return R(-2) / (qpoch1(t2, t2, pol) * qpoch1(e8, e8, pol)) * G(R(-4) * e + tau) * G(R(6) * e) *
         G(R(-2) * e + h) * G(R(2) * e + h) * G(R(-2) * e + tau) * G(R(6) * e + tau) * G(R(-2) * e + tau + h) *
         G(R(2) * e + tau + h) * G(R(-2) * e + t2) * G(R(8) * e + h) * G(R(12) * e + h) * G(R(8) * e + tau) *
         G(R(4) * e) * G(tau + h);
}

template <class R>
Sides<R> lemma_theta_simp4(const cplx<R>& tau, const cplx<R>& eta, const TruncationPolicy<R>& pol = {}) {
  const cplx<R> e8 = R(8) * eta;
  const cplx<R> e4 = R(4) * eta;
  const cplx<R> e2 = R(2) * eta;
  const cplx<R> h(R(0.5));
  const cplx<R> rhs = R(2) * ell_gamma(R(6) * eta, tau, e8, pol) / ell_gamma(e2, tau, e8, pol) *
                      qpoch1(tau + h, tau, pol) * theta0(e2 + h, tau, pol) * theta0(tau + e2 + h, tau, pol) /
                      (qpoch1(tau, tau, pol) * theta0(tau + e4, tau, pol)) /
                      (qpoch1(e4, e4, pol) * qpoch1(e2 + h, e2, pol));
  return {int_eval2_closed(tau, eta, pol), rhs};
}

// which = 1: theta0(t; 2 tau)^2 weight; which = 2: theta0(t + 1/2; 2 tau)^2.
template <class R>
Sides<R> lemma_int_eval(int which, const cplx<R>& tau, const cplx<R>& eta, const EvalOptions<R>& opt = {}) {
  check_asym_domain(tau, eta);
  const auto& pol = opt.policy;
  const cplx<R> t2 = R(2) * tau;
  const cplx<R> e2 = R(2) * eta;
  const cplx<R> e8 = R(8) * eta;
  const cplx<R> h(R(0.5));
  const cplx<R> shift = which == 1 ? cplx<R>(0) : h;
  auto f = [&](const cplx<R>& t) {
    return ell_gamma(t - e2, tau, e8, pol) * ell_gamma(-t - e2, tau, e8, pol) * theta0(t + R(4) * eta, e8, pol) *
           e2pi(-t) * std::pow(theta0(t + shift, t2, pol), 2) * theta0(t + tau + h, t2, pol);
  };
  const Integral<R> r = cycle_integral<R>(f, asym_lattices(tau, eta), opt);
  const cplx<R> rhs = which == 1 ? int_eval1_closed(tau, eta, pol) : int_eval2_closed(tau, eta, pol);
  return {r.value, rhs, r.error};
}

}  // namespace ellid
