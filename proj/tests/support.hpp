#pragma once

#include <complex>
#include <random>

#include "ellid/numeric.hpp"

namespace ellid::test {

using C = std::complex<double>;

inline double rel(C a, C b) { return std::abs(a - b) / std::abs(b); }

// Fixed-seed draws for property tests.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : gen_(seed) {}
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  C box(double re_lo, double re_hi, double im_lo, double im_hi) {
    const double re = real(re_lo, re_hi);
    return {re, real(im_lo, im_hi)};
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace ellid::test
