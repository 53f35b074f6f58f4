#include "bregman/random.hpp"

#include <cmath>
#include <numbers>

namespace bregman {

double Sampler::normal() {
  // Box-Muller; 1 - unit() avoids log(0).
  const double u = 1.0 - unit();
  const double v = unit();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

Vector Sampler::uniform_box(std::size_t dimension, double lo, double hi) {
  Vector x(dimension);
  for (std::size_t j = 0; j < dimension; ++j) x[j] = uniform(lo, hi);
  return x;
}

Vector Sampler::uniform_box(const Vector& lo, const Vector& hi) {
  Vector x(lo.size());
  for (Eigen::Index j = 0; j < lo.size(); ++j) x[j] = uniform(lo[j], hi[j]);
  return x;
}

Vector Sampler::direction(std::size_t dimension) {
  while (true) {
    Vector w(dimension);
    for (std::size_t j = 0; j < dimension; ++j) w[j] = normal();
    const double norm = w.norm();
    if (norm > 1e-12) return w / norm;
  }
}

std::uint64_t derive_seed(std::uint64_t base, std::string_view label) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char ch : label) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  std::uint64_t z = base ^ hash;
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace bregman
