#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "bregman/farthest.hpp"

namespace bregman {

/// (-f(-.) + indicator of -C)^*(s) = max_c f(c) - <s, c>.
double neg_restricted_conjugate(const LegendreSpec& f, const PointSet& C,
                                const Vector& s);

/// theta_C(x) = min_c f(x + c) - f(c); +inf when x + c leaves dom f for
/// every c.
double theta(const LegendreSpec& f, const PointSet& C, const Vector& x);

/// theta_C^*(s) = f*(s) + neg_restricted_conjugate(s).
double theta_conjugate(const LegendreSpec& f, const PointSet& C,
                       const Vector& s);

/// Left farthest distance composed with grad f*: s -> max_c D(c, grad f*(s)).
double farthest_distance_dual(const LegendreSpec& f, const PointSet& C,
                              const Vector& s);

struct SubderivativeEstimate {
  Vector direction;
  /// Richardson extrapolation of the last two forward difference quotients.
  double dini_value = 0.0;
  /// max over farthest points p of <hess f(y) (y - p), w>.
  double formula_value = 0.0;
  std::vector<double> step_schedule;
  /// True when the default schedule left U and was scaled down once.
  bool schedule_shrunk = false;
};

/// Estimates the one-sided directional derivative of the left farthest
/// distance at y along w with steps 1e-3 ... 1e-7 and compares it with the
/// closed form. Throws DomainError if even the shrunk schedule leaves U.
SubderivativeEstimate dini_subderivative(
    const LegendreSpec& f, const PointSet& C, const Vector& y, const Vector& w,
    double tie_tolerance = kDefaultTieTolerance);

/// Extreme generators hess f(y) (y - p), p in P(y), of the Clarke
/// subdifferential of the left farthest distance at y.
std::vector<Vector> clarke_subdifferential_generators(
    const LegendreSpec& f, const PointSet& C, const Vector& y,
    double tie_tolerance = kDefaultTieTolerance);

/// Support function of the Clarke subdifferential in direction w.
double clarke_subdifferential_support(
    const LegendreSpec& f, const PointSet& C, const Vector& y, const Vector& w,
    double tie_tolerance = kDefaultTieTolerance);

struct FarthestGradient {
  /// Set iff P(y) is a singleton.
  std::optional<Vector> gradient;
  /// Subdifferential generators; a single entry when differentiable.
  std::vector<Vector> generators;
  std::vector<std::size_t> active_indices;
  /// Central differences of the farthest distance (differentiable case).
  Vector finite_difference;
  /// ||finite_difference - gradient|| / (1 + ||gradient||).
  double cross_check_residual = 0.0;

  bool multi_valued() const { return !gradient.has_value(); }
};

/// Gradient hess f(y) (y - p) of the left farthest distance when the
/// farthest point p is unique; otherwise the multi-valued signal.
/// Throws PreconditionError if the Hessian at y is not positive definite.
FarthestGradient gradient_farthest_distance(
    const LegendreSpec& f, const PointSet& C, const Vector& y,
    double tie_tolerance = kDefaultTieTolerance);

/// grad (farthest distance o grad f*)(s) = grad f*(s) - p when
/// P(grad f*(s)) = {p}; nullopt otherwise.
std::optional<Vector> dual_farthest_gradient(
    const LegendreSpec& f, const PointSet& C, const Vector& s,
    double tie_tolerance = kDefaultTieTolerance);

struct InverseCheck {
  /// f(c) - <s, c> attains neg_restricted_conjugate(s).
  bool attains_conjugate_max = false;
  /// c is a left farthest point of grad f*(s).
  bool is_farthest_point = false;

  bool agree() const { return attains_conjugate_max == is_farthest_point; }
};

/// Evaluates both sides of s in d(-f(-.) + indicator of -C)(-c)
/// <=> c in P(grad f*(s)). c must be an element of C.
InverseCheck subdifferential_inverse_check(
    const LegendreSpec& f, const PointSet& C, const Vector& c, const Vector& s,
    double tie_tolerance = kDefaultTieTolerance);

struct ConvexityProbe {
  bool violation_found = false;
  std::size_t trials = 0;
  /// Largest normalized excess theta(mid) - (theta(x) + theta(y)) / 2.
  double worst_excess = -kInfinity;
  Vector x;
  Vector y;
};

/// Randomized midpoint-convexity search on theta_C. x and y are drawn from
/// the box centered at 0 whose width is twice the coordinate spread of C.
/// Stops at the first excess above slack (1 + |theta| scale).
ConvexityProbe probe_theta_convexity(const LegendreSpec& f, const PointSet& C,
                                     std::uint64_t seed,
                                     std::size_t trials = 10000,
                                     double slack = 1e-10);

}  // namespace bregman
