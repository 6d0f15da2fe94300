#pragma once

// Affine Macdonald values for n = 2, k = 2 through elliptic Macdonald polynomials.

#include <cmath>
#include <complex>

#include "ellid/catalog.hpp"
#include "ellid/kernel.hpp"
#include "ellid/numeric.hpp"

namespace ellid {

template <class R>
struct AffineParams {
  long mu = 0;
  long k = 0;
  cplx<R> q{R(2)};
  cplx<R> lambda{R(2)};
  cplx<R> omega{R(4)};

  long kappa() const { return k + 4; }

  void validate() const {
    if (mu < 0 || k < 0) throw DomainViolation("affine parameters need mu, k >= 0");
    if (!(std::abs(q) > R(1))) throw DomainViolation("affine parameters need |q| > 1");
    const cplx<R> lq = std::log(q);
    if (!((omega * lq).real() > R(3) * lq.real()))
      throw DomainViolation("affine parameters need |q^(-2 omega)| < |q^(-6)|");
  }
};

template <class R>
struct AdditiveParams {
  cplx<R> eta;
  cplx<R> tau;
  cplx<R> lambda;
};

template <class R>
cplx<R> eta_from_q(const cplx<R>& q) {
  return std::log(q) / cplx<R>(0, R(2) * pi_v<R>);
}

template <class R>
AdditiveParams<R> convert_conventions(const AffineParams<R>& a) {
  a.validate();
  const cplx<R> eta = eta_from_q(a.q);
  return {eta, R(-2) * eta * a.omega, R(2) * eta * a.lambda};
}


template <class R>
cplx<R> f22(const cplx<R>& q, const cplx<R>& omega, const TruncationPolicy<R>& pol = {}) {
  const cplx<R> eta = eta_from_q(q);
  const cplx<R> p = R(-2) * eta * omega;
  if (!(p.imag() > R(0))) throw DomainViolation("f22 needs |q^(-2 omega)| < 1");
  return qpoch1(p + R(2) * eta, p, pol) / qpoch1(p + R(4) * eta, p, pol);
}

template <class R>
cplx<R> chi_002(const cplx<R>& q, const cplx<R>& lambda, const cplx<R>& omega, const TruncationPolicy<R>& pol = {}) {
  const cplx<R> eta = eta_from_q(q);
  const cplx<R> p = R(-2) * eta * omega;
  if (!(p.imag() > R(0))) throw DomainViolation("chi_002 needs |q^(-2 omega)| < 1");
  const cplx<R> two(R(2));
  return e2pi(lambda * eta) * f22(q, omega, pol) * qpoch1((two - R(2) * lambda) * eta, p, pol) *
         qpoch1((R(2) * lambda + two) * eta + p, p, pol) * qpoch1(p + R(2) * eta, p, pol);
}

template <class R>
struct BridgeValue {
  cplx<R> value;
  R error;
};

template <class R>
BridgeValue<R> J_mu_k2(const AffineParams<R>& a, const EvalOptions<R>& opt = {}) {
  const AdditiveParams<R> c = convert_conventions(a);
  const auto& pol = opt.policy;
  EvalOptions<R> tight = opt;
  tight.quad_tol = std::min(opt.quad_tol, R(1e-10));
  const cplx<R> eta = c.eta;
  const cplx<R> p = c.tau;
  auto A = [&](R x) { return x * eta; };
  const R m = static_cast<R>(a.mu);
  const cplx<R> K = A(R(-2) * static_cast<R>(a.kappa()));
  const Integral<R> P = ellmac_P(a.mu, a.kappa(), c.lambda, c.tau, eta, tight);
  const cplx<R> ratio = qpoch2(p + A(2), p, K, pol) / qpoch2(p + A(-2), p, K, pol);
  const cplx<R> pre = qpoch1(A(-4), p, pol) * std::pow(qpoch1(p, p, pol), 3) / qpoch1(p + A(2), p, pol) * ratio *
                      ratio * e2pi(eta * (m + R(4))) * qpoch1(A(R(-2) * m - R(6)), K, pol) *
                      qpoch1(A(R(2) * m + R(2)) + K, K, pol) / (qpoch1(A(-4), K, pol) * qpoch1(K, K, pol));
  const cplx<R> scale = pre / (R(2) * pi_v<R> * f22(a.q, a.omega, pol));
  return {scale * P.value, std::abs(scale) * P.error};
}

template <class R>
cplx<R> eval_conj_rhs(long mu, long k, const cplx<R>& q, const TruncationPolicy<R>& pol = {}) {
  const cplx<R> eta = eta_from_q(q);
  auto A = [&](R x) { return x * eta; };
  const R m = static_cast<R>(mu);
  const cplx<R> K = A(R(-2) * static_cast<R>(k + 4));
  const cplx<R> num = e2pi(R(2) * m * eta) * qpoch1(A(-2), K, pol) * theta0(A(R(-2) * m - R(4)), K, pol) *
                      qpoch1(A(R(-2) * m - R(6)), K, pol) * qpoch1(A(R(2) * m + R(2)) + K, K, pol) *
                      qpoch1(K, K, pol) * qpoch1(K + A(-2), K, pol);
  const cplx<R> den = qpoch1(A(-4), K, pol) * qpoch1(A(-4), A(-2), pol) * qpoch1(A(-6), A(-8), pol) *
                      qpoch1(A(-2), A(-8), pol);
  return num / den;
}

template <class R>
struct BridgeCheck {
  cplx<R> lhs;
  cplx<R> rhs;
  R rel_error;
  R quad_error;
  bool absolute = false;
};

template <class R>
BridgeCheck<R> eval_conj_check(long mu, long k, const cplx<R>& q, const EvalOptions<R>& opt = {}) {
  const AffineParams<R> a{mu, k, q, cplx<R>(2), cplx<R>(4)};
  const BridgeValue<R> j = J_mu_k2(a, opt);
  const cplx<R> r = eval_conj_rhs(mu, k, q, opt.policy);
  // A vanishing closed form is compared on an absolute scale of one.
  const bool absolute = std::abs(r) == R(0);
  const R scale = absolute ? R(1) : std::abs(r);
  return {j.value, r, std::abs(j.value - r) / scale, j.error, absolute};
}

}  // namespace ellid
