#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

#include "bregman/legendre.hpp"

namespace bregman {

/// Deterministic sampler. Uniform doubles are built from raw engine bits so
/// that streams do not depend on the standard library's distributions.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  /// Uniform on {lo, ..., hi}.
  std::size_t integer(std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(engine_() % (hi - lo + 1));
  }
  double normal();

  Vector uniform_box(std::size_t dimension, double lo, double hi);
  Vector uniform_box(const Vector& lo, const Vector& hi);
  /// Uniformly distributed on the unit sphere.
  Vector direction(std::size_t dimension);

 private:
  std::mt19937_64 engine_;
};

/// Mixes a base seed with a label (FNV-1a followed by splitmix64).
std::uint64_t derive_seed(std::uint64_t base, std::string_view label);

}  // namespace bregman
