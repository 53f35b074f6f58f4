#include "bregman/variational.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "bregman/random.hpp"

namespace bregman {

double neg_restricted_conjugate(const LegendreSpec& f, const PointSet& C,
                                const Vector& s) {
  require_dimension(f, s);
  C.validate(f);
  double best = -kInfinity;
  for (const auto& c : C) best = std::max(best, value(f, c) - s.dot(c));
  return best;
}

double theta(const LegendreSpec& f, const PointSet& C, const Vector& x) {
  require_dimension(f, x);
  C.validate(f);
  double best = kInfinity;
  for (const auto& c : C) {
    const double shifted = value(f, x + c);
    if (shifted == kInfinity) continue;
    best = std::min(best, shifted - value(f, c));
  }
  return best;
}

double theta_conjugate(const LegendreSpec& f, const PointSet& C,
                       const Vector& s) {
  return conjugate_value(f, s) + neg_restricted_conjugate(f, C, s);
}

double farthest_distance_dual(const LegendreSpec& f, const PointSet& C,
                              const Vector& s) {
  return left_farthest(f, C, conjugate_gradient(f, s)).value;
}

std::vector<Vector> clarke_subdifferential_generators(
    const LegendreSpec& f, const PointSet& C, const Vector& y,
    double tie_tolerance) {
  const FarthestResult far = left_farthest(f, C, y, tie_tolerance);
  const Matrix h = hessian(f, y);
  std::vector<Vector> generators;
  generators.reserve(far.argmax_indices.size());
  for (std::size_t i : far.argmax_indices) generators.push_back(h * (y - C[i]));
  return generators;
}

double clarke_subdifferential_support(const LegendreSpec& f, const PointSet& C,
                                      const Vector& y, const Vector& w,
                                      double tie_tolerance) {
  require_dimension(f, w);
  double support = -kInfinity;
  for (const auto& g :
       clarke_subdifferential_generators(f, C, y, tie_tolerance)) {
    support = std::max(support, g.dot(w));
  }
  return support;
}

SubderivativeEstimate dini_subderivative(const LegendreSpec& f,
                                         const PointSet& C, const Vector& y,
                                         const Vector& w,
                                         double tie_tolerance) {
  require_interior(f, y, "y");
  require_dimension(f, w);

  SubderivativeEstimate estimate;
  estimate.direction = w;
  estimate.step_schedule = {1e-3, 1e-4, 1e-5, 1e-6, 1e-7};
  auto schedule_inside = [&] {
    return std::all_of(
        estimate.step_schedule.begin(), estimate.step_schedule.end(),
        [&](double t) { return f.in_domain(Vector(y + t * w)); });
  };
  if (!schedule_inside()) {
    for (double& t : estimate.step_schedule) t *= 1e-2;
    estimate.schedule_shrunk = true;
    if (!schedule_inside()) {
      throw DomainError("difference-quotient steps leave int dom f");
    }
  }

  const double base = left_farthest(f, C, y, tie_tolerance).value;
  std::vector<double> quotients;
  for (double t : estimate.step_schedule) {
    const double moved = left_farthest(f, C, y + t * w, tie_tolerance).value;
    quotients.push_back((moved - base) / t);
  }
  // Successive steps shrink by 10: first-order Richardson on the last two.
  const std::size_t n = quotients.size();
  const double ratio =
      estimate.step_schedule[n - 2] / estimate.step_schedule[n - 1];
  estimate.dini_value =
      (ratio * quotients[n - 1] - quotients[n - 2]) / (ratio - 1.0);
  estimate.formula_value =
      clarke_subdifferential_support(f, C, y, w, tie_tolerance);
  return estimate;
}

FarthestGradient gradient_farthest_distance(const LegendreSpec& f,
                                            const PointSet& C, const Vector& y,
                                            double tie_tolerance) {
  const Matrix h = hessian(f, y);
  if (Eigen::LLT<Matrix>(h).info() != Eigen::Success) {
    throw PreconditionError("Hessian is not positive definite at y");
  }
  const FarthestResult far = left_farthest(f, C, y, tie_tolerance);

  FarthestGradient result;
  result.active_indices = far.argmax_indices;
  for (std::size_t i : far.argmax_indices) {
    result.generators.push_back(h * (y - C[i]));
  }
  if (!far.is_singleton()) return result;

  result.gradient = result.generators.front();
  result.finite_difference = Vector(y.size());
  for (Eigen::Index j = 0; j < y.size(); ++j) {
    double step = 1e-6 * (1.0 + std::abs(y[j]));
    Vector forward = y;
    Vector backward = y;
    for (int shrink = 0; shrink < 8; ++shrink) {
      forward[j] = y[j] + step;
      backward[j] = y[j] - step;
      if (f.in_domain(forward) && f.in_domain(backward)) break;
      step *= 0.1;
    }
    result.finite_difference[j] =
        (left_farthest(f, C, forward, tie_tolerance).value -
         left_farthest(f, C, backward, tie_tolerance).value) /
        (2.0 * step);
  }
  result.cross_check_residual =
      (result.finite_difference - *result.gradient).norm() /
      (1.0 + result.gradient->norm());
  return result;
}

std::optional<Vector> dual_farthest_gradient(const LegendreSpec& f,
                                             const PointSet& C,
                                             const Vector& s,
                                             double tie_tolerance) {
  const Vector y = conjugate_gradient(f, s);
  const FarthestResult far = left_farthest(f, C, y, tie_tolerance);
  if (!far.is_singleton()) return std::nullopt;
  return Vector(y - C[far.witness]);
}

InverseCheck subdifferential_inverse_check(const LegendreSpec& f,
                                           const PointSet& C, const Vector& c,
                                           const Vector& s,
                                           double tie_tolerance) {
  require_dimension(f, s);
  if (!C.index_of(c)) {
    throw PreconditionError("c must be an element of the point set");
  }
  InverseCheck check;
  const double attained = value(f, c) - s.dot(c);
  const double maximum = neg_restricted_conjugate(f, C, s);
  check.attains_conjugate_max =
      attained >= maximum - 1e-9 * (1.0 + std::abs(maximum));

  const FarthestResult far =
      left_farthest(f, C, conjugate_gradient(f, s), tie_tolerance);
  for (std::size_t i : far.argmax_indices) {
    if (C[i] == c) {
      check.is_farthest_point = true;
      break;
    }
  }
  return check;
}

ConvexityProbe probe_theta_convexity(const LegendreSpec& f, const PointSet& C,
                                     std::uint64_t seed, std::size_t trials,
                                     double slack) {
  C.validate(f);
  const std::size_t dim = C.dimension();
  Vector lo = C[0];
  Vector hi = C[0];
  for (const auto& c : C) {
    lo = lo.cwiseMin(c);
    hi = hi.cwiseMax(c);
  }
  Vector spread = hi - lo;
  const double widest = spread.maxCoeff();
  for (std::size_t j = 0; j < dim; ++j) {
    if (spread[j] <= 0) spread[j] = widest > 0 ? widest : 1.0;
  }

  Sampler sampler(seed);
  ConvexityProbe probe;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    ++probe.trials;
    const Vector x = sampler.uniform_box(-spread, spread);
    const Vector y = sampler.uniform_box(-spread, spread);
    const double tx = theta(f, C, x);
    const double ty = theta(f, C, y);
    if (!std::isfinite(tx) || !std::isfinite(ty)) continue;
    const double tm = theta(f, C, Vector(0.5 * (x + y)));
    const double scale =
        1.0 + std::max({std::abs(tx), std::abs(ty), std::abs(tm)});
    const double excess = (tm - 0.5 * (tx + ty)) / scale;
    if (excess > probe.worst_excess) {
      probe.worst_excess = excess;
      probe.x = x;
      probe.y = y;
    }
    if (excess > slack) {
      probe.violation_found = true;
      break;
    }
  }
  return probe;
}

}  // namespace bregman
