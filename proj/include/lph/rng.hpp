#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace lph {

/// Seeded source for every random coefficient in a run.
///
/// Draws are made from the raw 64-bit engine output so sequences are identical
/// across standard libraries (std::uniform_real_distribution is not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  double sign() { return (engine_() >> 63) != 0 ? -1.0 : 1.0; }

  /// exp(i * theta), theta uniform in [0, 2 pi).
  std::complex<double> unit_complex() {
    return std::polar(1.0, 2.0 * std::numbers::pi * uniform01());
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace lph
