#include <gtest/gtest.h>

#include "ellid/kernel.hpp"
#include "support.hpp"

using namespace ellid;
using ellid::test::C;
using ellid::test::Draw;
using ellid::test::rel;

namespace {

const C z0(0.23, 0.11);
const C tau0(0.1, 0.9);
const C sigma0(-0.2, 0.7);

}  // namespace

// ---------------------------------------------------------------- oracles (mpmath, 40 digits)

TEST(Kernel, QpochMultiplicativeOracle) {
  const auto q = ModularParam<double>::multiplicative(C(0.25));
  EXPECT_LT(rel(qpoch1_mult(C(0.5), q), C(0.4194224417951075977)), 1e-15);
}

TEST(Kernel, DoubleQpochOracle) {
  const auto q = ModularParam<double>::multiplicative(C(0.2));
  const auto r = ModularParam<double>::multiplicative(C(0.1));
  EXPECT_LT(rel(qpoch2_mult(C(0.3), q, r), C(0.6214030495093608757)), 1e-15);
}

TEST(Kernel, ThetaOracles) {
  EXPECT_LT(rel(theta0(z0, tau0), C(0.93527808281923516877, -0.49173839097224469443)), 1e-14);
  EXPECT_LT(rel(jacobi_theta(z0, tau0), C(0.66405012586008902135, 0.31314662651009433897)), 1e-14);
  EXPECT_LT(rel(jacobi_theta_prime0<double>(tau0), C(3.0645140228228784694, 0.22199649506393400964)), 1e-14);
}

TEST(Kernel, EllipticGammaOracle) {
  EXPECT_LT(rel(ell_gamma(z0, tau0, sigma0), C(0.83598878691794039356, 0.44628883015608891852)),
            1e-13);
}

TEST(Kernel, ThetaLevelOracle) {
  const C want(0.29054223493308978688, 0.44742510224732851869);
  const C lam(0.3, 0.05);
  EXPECT_LT(rel(theta_level(1, 3, lam, tau0, ThetaMode::series), want), 1e-13);
  EXPECT_LT(rel(theta_level(1, 3, lam, tau0, ThetaMode::product), want), 1e-13);
}

// ---------------------------------------------------------------- trivial values

TEST(Kernel, QpochAtZeroArgumentIsOne) {
  const auto q = ModularParam<double>::multiplicative(C(0.7, 0.1));
  EXPECT_EQ(qpoch1_mult(C(0), q), C(1));
}

TEST(Kernel, ThetaAtZeroNome) {
  const auto q = ModularParam<double>::multiplicative(C(0));
  const C u(0.3, -0.4);
  EXPECT_LT(std::abs(theta0_mult(u, q) - (1.0 - u)), 1e-15);
}

TEST(Kernel, JacobiThetaVanishesAtZero) { EXPECT_LT(std::abs(jacobi_theta(C(0), tau0)), 1e-15); }

TEST(Kernel, GammaAtSymmetricPointIsOne) {
  EXPECT_LT(std::abs(ell_gamma((tau0 + sigma0) / 2.0, tau0, sigma0) - 1.0), 1e-15);
}

TEST(Kernel, GammaPoleRaises) {
  const TruncationPolicy<double> pol;
  EXPECT_THROW(ell_gamma(-tau0 - sigma0 + 1.0, tau0, sigma0, pol), PoleHit);
}

TEST(Kernel, ModularParamValidation) {
  EXPECT_THROW(ModularParam<double>::additive(C(0.2, -0.1)), DomainViolation);
  EXPECT_THROW(ModularParam<double>::multiplicative(C(1.0, 0.0)), DomainViolation);
  const auto m = ModularParam<double>::multiplicative(e2pi(tau0));
  EXPECT_LT(std::abs(m.value() - tau0), 1e-14);
}

TEST(Kernel, PolicyRejectsBadFields) {
  TruncationPolicy<double> pol;
  pol.term_epsilon = 0;
  EXPECT_THROW(theta0(z0, tau0, pol), DomainViolation);
  pol.term_epsilon = 1e-17;
  pol.max_terms = 0;
  EXPECT_THROW(theta0(z0, tau0, pol), DomainViolation);
}

TEST(Kernel, MaxTermsExceeded) {
  TruncationPolicy<double> pol;
  pol.max_terms = 3;
  const auto q = ModularParam<double>::multiplicative(C(0.9));
  EXPECT_THROW(qpoch1_mult(C(0.5), q, pol), NonConvergent);
}

TEST(Kernel, ThetaPrimeLargeImaginaryLimit) {
  const C t(0.3, 12);
  EXPECT_LT(rel(jacobi_theta_prime0<double>(t) / epi(t / 4.0), C(2 * pi_v<double>)), 1e-12);
  EXPECT_LT(std::abs(jacobi_theta_prime0<double>(t)), 2 * pi_v<double> * std::exp(-pi_v<double> * 12 / 4) * 1.001);
}

TEST(Kernel, ModularQConstantAndLeadingTerm) {
  const C q0 = ell_gamma_modular_Q(C(0), tau0, sigma0);
  EXPECT_LT(std::abs(q0 - (tau0 + sigma0 - 1.0) * (1.0 / tau0 + 1.0 / sigma0 - 1.0) / 12.0), 1e-15);
  // Third finite difference of a cubic with unit step is 6 times the leading coefficient.
  auto Q = [&](double x) { return ell_gamma_modular_Q(C(x), tau0, sigma0); };
  const C d3 = Q(3) - 3.0 * Q(2) + 3.0 * Q(1) - Q(0);
  EXPECT_LT(rel(d3 / 6.0, 1.0 / (3.0 * tau0 * sigma0)), 1e-12);
}

// ---------------------------------------------------------------- properties

TEST(KernelProperty, QpochRecurrences) {
  Draw d(11);
  for (int i = 0; i < 100; ++i) {
    const C z = d.box(-0.5, 0.5, -0.3, 0.3);
    const C t = d.box(-0.5, 0.5, 0.3, 1.5);
    const C s = d.box(-0.5, 0.5, 0.3, 1.5);
    EXPECT_LT(rel(qpoch1(z, t), (1.0 - e2pi(z)) * qpoch1(z + t, t)), 1e-12);
    EXPECT_LT(rel(qpoch2(z, t, s), qpoch2(z, s, t)), 1e-12);
    EXPECT_LT(rel(qpoch2(z, t, s), qpoch1(z, t) * qpoch2(z + s, t, s)), 1e-12);
  }
}

TEST(KernelProperty, ThetaQuasiPeriodicity) {
  Draw d(12);
  for (int i = 0; i < 100; ++i) {
    const C z = d.box(-0.5, 0.5, -0.4, 0.4);
    const C t = d.box(-0.5, 0.5, 0.3, 1.5);
    const C th = theta0(z, t);
    EXPECT_LT(rel(theta0(z + 1.0, t), th), 1e-12);
    EXPECT_LT(rel(theta0(z + t, t), -e2pi(-z) * th), 1e-12);
    EXPECT_LT(rel(theta0(-z, t), -e2pi(-z) * th), 1e-12);
    EXPECT_LT(rel(jacobi_theta(-z, t), -jacobi_theta(z, t)), 1e-12);
  }
}

TEST(KernelProperty, ThetaModularRelation) {
  Draw d(13);
  for (int i = 0; i < 50; ++i) {
    const C z = d.box(-0.5, 0.5, -0.3, 0.3);
    const C t = d.box(-0.5, 0.5, 0.3, 1.5);
    C root = std::sqrt(C(0, -1) * t);
    if (root.real() < 0) root = -root;
    const C rhs = C(0, -1) * root * epi(z * z / t) * jacobi_theta(z, t);
    EXPECT_LT(rel(jacobi_theta(z / t, -1.0 / t), rhs), 1e-10);
  }
}

TEST(KernelProperty, ThetaPrimeMatchesFiniteDifference) {
  Draw d(14);
  for (int i = 0; i < 20; ++i) {
    const C t = d.box(-0.5, 0.5, 0.3, 1.5);
    const double h = 1e-6;
    const C fd = (jacobi_theta(C(h), t) - jacobi_theta(C(-h), t)) / (2 * h);
    EXPECT_LT(rel(jacobi_theta_prime0<double>(t), fd), 1e-8);
    const C p = qpoch1(t, t);
    EXPECT_LT(rel(jacobi_theta_prime0<double>(t) / (p * p * p), 2 * pi_v<double> * epi(t / 4.0)), 1e-12);
  }
}

TEST(KernelProperty, GammaFunctionalEquations) {
  Draw d(15);
  for (int i = 0; i < 100; ++i) {
    const C z = d.box(-0.5, 0.5, -0.2, 0.2);
    const C t = d.box(-0.5, 0.5, 0.3, 1.5);
    const C s = d.box(-0.5, 0.5, 0.3, 1.5);
    const C g = ell_gamma(z, t, s);
    EXPECT_LT(rel(ell_gamma(z, s, t), g), 1e-12);
    EXPECT_LT(std::abs(g * ell_gamma(t + s - z, t, s) - 1.0), 1e-12);
    EXPECT_LT(rel(ell_gamma(z + t, t, s), theta0(z, s) * g), 1e-12);
    EXPECT_LT(rel(ell_gamma(z + s, t, s), theta0(z, t) * g), 1e-12);
  }
}

TEST(KernelProperty, GammaModularRelation) {
  Draw d(16);
  int done = 0;
  while (done < 50) {
    const C z = d.box(-0.5, 0.5, -0.2, 0.2);
    const C t = d.box(-0.5, 0.5, 0.3, 1.5);
    const C s = d.box(-0.5, 0.5, 0.3, 1.5);
    if (!((t / s).imag() > 0.05)) continue;
    const C lhs = ell_gamma(z / s, t / s, -1.0 / s);
    const C rhs = epi(ell_gamma_modular_Q(z, t, s)) * ell_gamma((z - s) / t, -1.0 / t, -s / t) * ell_gamma(z, t, s);
    EXPECT_LT(rel(lhs, rhs), 1e-8);
    ++done;
  }
}

TEST(KernelProperty, ThetaLevelModesAgree) {
  Draw d(17);
  for (int i = 0; i < 40; ++i) {
    const long kappa = 1 + i % 4;
    const long mu = i % 7 - 3;
    const C lam = d.box(-0.5, 0.5, -0.2, 0.2);
    const C t = d.box(-0.5, 0.5, 0.3, 1.5);
    const C s = theta_level(mu, kappa, lam, t, ThetaMode::series);
    EXPECT_LT(rel(theta_level(mu, kappa, lam, t, ThetaMode::product), s), 1e-10);
    EXPECT_LT(rel(theta_level(mu + 2 * kappa, kappa, lam, t, ThetaMode::series), s), 1e-12);
    const C k = static_cast<double>(kappa);
    EXPECT_LT(rel(theta_level(mu, kappa, lam + 2.0 * t, t, ThetaMode::series), e2pi(-k * (t + lam)) * s), 1e-10);
  }
}

TEST(KernelProperty, ExtendedPrecisionTracksDouble) {
  using LD = long double;
  const cplx<LD> z = cast<LD>(z0), t = cast<LD>(tau0), s = cast<LD>(sigma0);
  EXPECT_LT(rel(cast<double>(ell_gamma(z, t, s)), ell_gamma(z0, tau0, sigma0)), 1e-14);
  EXPECT_LT(rel(cast<double>(theta0(z, t)), theta0(z0, tau0)), 1e-15);
}

TEST(KernelProperty, PureFunctionsAreBitIdentical) {
  EXPECT_EQ(ell_gamma(z0, tau0, sigma0), ell_gamma(z0, tau0, sigma0));
  EXPECT_EQ(theta_level(2, 3, z0, tau0, ThetaMode::series), theta_level(2, 3, z0, tau0, ThetaMode::series));
}
