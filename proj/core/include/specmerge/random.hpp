#pragma once

#include <cstdint>
#include <random>

#include "specmerge/image.hpp"

namespace specmerge {

/// Seeded generator whose output is identical on every platform (the
/// standard distributions are implementation-defined, so they are avoided).
class SeededRandom {
 public:
  explicit SeededRandom(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi].
  long long integer(long long lo, long long hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long long>(engine_() % span);
  }

  Image image(std::size_t rows, std::size_t cols) {
    Image img(rows, cols);
    for (auto& p : img.pixels()) p = uniform();
    return img;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace specmerge
