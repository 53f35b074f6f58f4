#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "bregman/legendre.hpp"
#include "bregman/point_set.hpp"

namespace bregman {

/// Default relative tolerance used to collect the argmax set.
inline constexpr double kDefaultTieTolerance = 1e-9;

/// D(x, y) = f(x) - f(y) - <grad f(y), x - y> for y in U, +inf otherwise.
double bregman_distance(const LegendreSpec& f, const Vector& x,
                        const Vector& y);

struct FarthestResult {
  /// Exact maximum of the distances over C.
  double value = 0.0;
  /// Every index whose distance is >= value - tie_tolerance (1 + value),
  /// in increasing order.
  std::vector<std::size_t> argmax_indices;
  /// Least element of argmax_indices.
  std::size_t witness = 0;
  /// Largest minus second-largest distance; +inf when |C| = 1.
  double top_gap = kInfinity;

  bool is_singleton() const { return argmax_indices.size() == 1; }
  bool contains(std::size_t index) const;
};

/// Farthest points of C from y in the left argument: argmax_c D(c, y).
FarthestResult left_farthest(const LegendreSpec& f, const PointSet& C,
                             const Vector& y,
                             double tie_tolerance = kDefaultTieTolerance);

/// argmax_c D(y, c), evaluated directly.
FarthestResult right_farthest_direct(
    const LegendreSpec& f, const PointSet& C, const Vector& y,
    double tie_tolerance = kDefaultTieTolerance);

/// argmax_c D(y, c), evaluated as the left farthest map of grad f(C) under
/// f* at grad f(y). Indices refer to C since grad f is a bijection.
FarthestResult right_farthest_dual(const LegendreSpec& f, const PointSet& C,
                                   const Vector& y,
                                   double tie_tolerance = kDefaultTieTolerance);

/// Tests x in P(y) through the inequality
///   D(c, x) <= <grad f(y) - grad f(x), c - x>  for all c in C,
/// with slack 1e-9 (1 + |lhs| + |rhs|). x must be an element of C.
bool check_farthest_characterization(const LegendreSpec& f, const PointSet& C,
                                     const Vector& y, const Vector& x);

/// z = grad f*(lambda grad f(y) + (1 - lambda) grad f(x)), lambda >= 1.
Vector ray_point(const LegendreSpec& f, const Vector& x, const Vector& y,
                 double lambda);

/// <p_y - p_x, grad f(x) - grad f(y)> for the witnesses p_x, p_y.
double monotonicity_gap(const LegendreSpec& f, const PointSet& C,
                        const Vector& x, const Vector& y,
                        double tie_tolerance = kDefaultTieTolerance);

/// A query point where the two largest distances over C coincide.
struct TieWitness {
  Vector location;
  double value = 0.0;
  double top_gap = 0.0;
  std::pair<std::size_t, std::size_t> pair;
};

/// Index of the exact maximizer of D(c, y), least index among exact ties.
std::size_t farthest_label(const LegendreSpec& f, const PointSet& C,
                           const Vector& y);

/// Bisects [a, b], clipped to U, on the change of farthest_label and then
/// refines by golden-section search on the gap between the two competing
/// distances. Throws PreconditionError when the labels at both ends agree
/// (always the case for a singleton C) and DomainError when the segment
/// does not meet U. Returns nullopt if the final top gap exceeds
/// 1e-10 (1 + value).
std::optional<TieWitness> find_tie(const LegendreSpec& f, const PointSet& C,
                                   const Vector& a, const Vector& b);

}  // namespace bregman
