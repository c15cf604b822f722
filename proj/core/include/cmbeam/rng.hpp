#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <utility>

namespace cmbeam {

// Deterministic random source with a fully documented sample path, so that
// identical seeds reproduce identical snapshot sets bit-for-bit.
//
// Engine: std::mt19937_64 (algorithm fixed by the C++ standard).
// Uniform doubles: u = 1 - (raw >> 11) * 2^-53, i.e. uniform on (0, 1]
// (the shift keeps 53 mantissa bits; the reflection keeps log(u) finite).
// Normals: one Box-Muller pair per call, no spare caching:
//   r = sqrt(-2 ln u1), z0 = r cos(2 pi u2), z1 = r sin(2 pi u2).
// Circular complex Gaussian with unit E|s|^2: (z0 + i z1)/sqrt(2).
// QPSK symbol: one raw draw; bit 0 picks the real sign, bit 1 the imaginary
// sign, value ((+-1) + (+-1)i)/sqrt(2).
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  // Uniform on (0, 1].
  double uniform() {
    return 1.0 - static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  std::pair<double, double> normal_pair() {
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * 3.141592653589793238462643383279502884 * u2;
    return {r * std::cos(t), r * std::sin(t)};
  }

  std::complex<double> complex_gaussian() {
    const auto [g1, g2] = normal_pair();
    constexpr double inv_sqrt2 = 0.70710678118654752440084436210485;
    return {g1 * inv_sqrt2, g2 * inv_sqrt2};
  }

  std::complex<double> qpsk() {
    const std::uint64_t v = gen_();
    constexpr double inv_sqrt2 = 0.70710678118654752440084436210485;
    const double re = (v & 1u) ? inv_sqrt2 : -inv_sqrt2;
    const double im = (v & 2u) ? inv_sqrt2 : -inv_sqrt2;
    return {re, im};
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace cmbeam
