#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ellid {

template <class R>
using cplx = std::complex<R>;

template <class R>
inline constexpr R pi_v = std::numbers::pi_v<R>;

// Arithmetic mode: double is "standard", long double is "extended".
enum class Precision { standard, extended };

inline const char* to_string(Precision p) {
  return p == Precision::standard ? "standard" : "extended";
}

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonConvergent : Error {
  using Error::Error;
};
struct PoleHit : Error {
  using Error::Error;
};
struct DomainViolation : Error {
  using Error::Error;
};
struct ToleranceNotReached : Error {
  using Error::Error;
};
struct OverlappingDeformations : Error {
  using Error::Error;
};
struct CenterOutOfRange : Error {
  using Error::Error;
};
struct PoleOnPath : Error {
  using Error::Error;
};
struct BalanceViolation : Error {
  using Error::Error;
};
struct UnknownIdentity : Error {
  using Error::Error;
};
struct NonTerminating : Error {
  using Error::Error;
};
struct TruncationInconsistent : Error {
  using Error::Error;
};
struct ConfigInvalid : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};

// e^{2 pi i z}
template <class R>
cplx<R> e2pi(const cplx<R>& z) {
  const R tp = 2 * pi_v<R>;
  return std::polar(std::exp(-tp * z.imag()), tp * z.real());
}

// e^{pi i z}
template <class R>
cplx<R> epi(const cplx<R>& z) {
  return std::polar(std::exp(-pi_v<R> * z.imag()), pi_v<R> * z.real());
}

template <class R>
bool is_finite(const cplx<R>& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

template <class R>
R machine_eps() {
  return std::numeric_limits<R>::epsilon();
}

template <class To, class From>
cplx<To> cast(const cplx<From>& z) {
  return {static_cast<To>(z.real()), static_cast<To>(z.imag())};
}

}  // namespace ellid
