#include "bregman/farthest.hpp"

#include <algorithm>
#include <cmath>

namespace bregman {

namespace {

FarthestResult summarize(const std::vector<double>& distances,
                         double tie_tolerance) {
  FarthestResult result;
  double best = -kInfinity;
  double second = -kInfinity;
  for (double d : distances) {
    if (d > best) {
      second = best;
      best = d;
    } else if (d > second) {
      second = d;
    }
  }
  result.value = best;
  result.top_gap = distances.size() > 1 ? best - second : kInfinity;
  const double threshold = best - tie_tolerance * (1.0 + std::abs(best));
  for (std::size_t i = 0; i < distances.size(); ++i) {
    if (distances[i] >= threshold) result.argmax_indices.push_back(i);
  }
  result.witness = result.argmax_indices.front();
  return result;
}

void require_compatible(const LegendreSpec& f, const PointSet& C) {
  C.validate(f);
}

}  // namespace

bool FarthestResult::contains(std::size_t index) const {
  return std::binary_search(argmax_indices.begin(), argmax_indices.end(),
                            index);
}

double bregman_distance(const LegendreSpec& f, const Vector& x,
                        const Vector& y) {
  require_dimension(f, x);
  require_dimension(f, y);
  if (!f.in_domain(y)) return kInfinity;
  switch (f.kind()) {
    case LegendreKind::Energy:
      return 0.5 * (x - y).squaredNorm();
    case LegendreKind::Shannon: {
      double sum = 0.0;
      for (Eigen::Index j = 0; j < x.size(); ++j) {
        if (x[j] < 0) return kInfinity;
        sum += x[j] == 0 ? y[j] : x[j] * std::log(x[j] / y[j]) - x[j] + y[j];
      }
      return sum;
    }
    default: {
      const double fx = value(f, x);
      if (fx == kInfinity) return kInfinity;
      return fx - value(f, y) - gradient(f, y).dot(x - y);
    }
  }
}

FarthestResult left_farthest(const LegendreSpec& f, const PointSet& C,
                             const Vector& y, double tie_tolerance) {
  require_interior(f, y, "y");
  require_compatible(f, C);
  std::vector<double> distances(C.size());
  for (std::size_t i = 0; i < C.size(); ++i) {
    distances[i] = bregman_distance(f, C[i], y);
  }
  return summarize(distances, tie_tolerance);
}

FarthestResult right_farthest_direct(const LegendreSpec& f, const PointSet& C,
                                     const Vector& y, double tie_tolerance) {
  require_interior(f, y, "y");
  require_compatible(f, C);
  std::vector<double> distances(C.size());
  for (std::size_t i = 0; i < C.size(); ++i) {
    distances[i] = bregman_distance(f, y, C[i]);
  }
  return summarize(distances, tie_tolerance);
}

FarthestResult right_farthest_dual(const LegendreSpec& f, const PointSet& C,
                                   const Vector& y, double tie_tolerance) {
  require_interior(f, y, "y");
  require_compatible(f, C);
  const LegendreSpec dual = conjugate(f);
  std::vector<Vector> mapped;
  mapped.reserve(C.size());
  for (const auto& c : C) mapped.push_back(gradient(f, c));
  const PointSet dual_set(std::move(mapped), dual);
  return left_farthest(dual, dual_set, gradient(f, y), tie_tolerance);
}

bool check_farthest_characterization(const LegendreSpec& f, const PointSet& C,
                                     const Vector& y, const Vector& x) {
  require_interior(f, y, "y");
  require_compatible(f, C);
  if (!C.index_of(x)) {
    throw PreconditionError("x must be an element of the point set");
  }
  const Vector shift = gradient(f, y) - gradient(f, x);
  for (const auto& c : C) {
    const double lhs = bregman_distance(f, c, x);
    const double rhs = shift.dot(c - x);
    const double slack = 1e-9 * (1.0 + std::abs(lhs) + std::abs(rhs));
    if (lhs > rhs + slack) return false;
  }
  return true;
}

Vector ray_point(const LegendreSpec& f, const Vector& x, const Vector& y,
                 double lambda) {
  if (!(lambda >= 1.0)) {
    throw PreconditionError("ray parameter lambda must satisfy lambda >= 1");
  }
  require_interior(f, x, "x");
  require_interior(f, y, "y");
  return conjugate_gradient(
      f, lambda * gradient(f, y) + (1.0 - lambda) * gradient(f, x));
}

double monotonicity_gap(const LegendreSpec& f, const PointSet& C,
                        const Vector& x, const Vector& y,
                        double tie_tolerance) {
  const Vector& px = C[left_farthest(f, C, x, tie_tolerance).witness];
  const Vector& py = C[left_farthest(f, C, y, tie_tolerance).witness];
  return (py - px).dot(gradient(f, x) - gradient(f, y));
}

std::size_t farthest_label(const LegendreSpec& f, const PointSet& C,
                           const Vector& y) {
  return left_farthest(f, C, y, 0.0).witness;
}

std::optional<TieWitness> find_tie(const LegendreSpec& f, const PointSet& C,
                                   const Vector& a, const Vector& b) {
  require_dimension(f, a);
  require_dimension(f, b);
  require_compatible(f, C);
  if (C.size() < 2) {
    throw PreconditionError(
        "a tie needs at least two points; the farthest label is constant");
  }

  // Clip the parameter range [0, 1] of a + t (b - a) to the open box U.
  const Vector direction = b - a;
  double t_min = 0.0;
  double t_max = 1.0;
  bool clipped_min = false;
  bool clipped_max = false;
  for (std::size_t j = 0; j < f.dimension(); ++j) {
    const Interval& bounds = f.domain()[j];
    const double d = direction[j];
    if (d == 0) {
      if (!bounds.contains(a[j])) {
        throw DomainError("segment does not meet int dom f (coordinate " +
                          std::to_string(j) + ")");
      }
      continue;
    }
    double enter = (bounds.lower - a[j]) / d;
    double leave = (bounds.upper - a[j]) / d;
    if (enter > leave) std::swap(enter, leave);
    if (enter > t_min) {
      t_min = enter;
      clipped_min = true;
    }
    if (leave < t_max) {
      t_max = leave;
      clipped_max = true;
    }
  }
  if (!(t_min < t_max)) {
    throw DomainError("segment does not meet int dom f");
  }
  const double width = t_max - t_min;
  if (clipped_min) t_min += 1e-8 * width;
  if (clipped_max) t_max -= 1e-8 * width;

  auto point_at = [&](double t) -> Vector { return a + t * direction; };
  const std::size_t label_lo = farthest_label(f, C, point_at(t_min));
  std::size_t label_hi = farthest_label(f, C, point_at(t_max));
  if (label_lo == label_hi) {
    throw PreconditionError(
        "farthest labels at both ends of the segment coincide");
  }

  // Bisect on the endpoints themselves rather than on t: the midpoint of two
  // vectors keeps full relative precision near the origin, where a + t d
  // only resolves about ulp(|a|) and steep distances need more.
  Vector lo = point_at(t_min);
  Vector hi = point_at(t_max);
  for (int iteration = 0; iteration < 2200; ++iteration) {
    const Vector mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const std::size_t label = farthest_label(f, C, mid);
    if (label == label_lo) {
      lo = mid;
    } else {
      hi = mid;
      label_hi = label;
    }
  }

  const Vector span = hi - lo;
  auto at_u = [&](double u) -> Vector { return lo + u * span; };
  auto gap_at = [&](double u) {
    const Vector z = at_u(u);
    return std::abs(bregman_distance(f, C[label_lo], z) -
                    bregman_distance(f, C[label_hi], z));
  };

  // Golden-section refinement of |D(c_lo, z) - D(c_hi, z)| on [lo, hi].
  constexpr double kInvPhi = 0.6180339887498949;
  double left = 0.0;
  double right = 1.0;
  double x1 = right - kInvPhi * (right - left);
  double x2 = left + kInvPhi * (right - left);
  double g1 = gap_at(x1);
  double g2 = gap_at(x2);
  for (int iteration = 0; iteration < 64 && left < x1 && x2 < right;
       ++iteration) {
    if (g1 <= g2) {
      right = x2;
      x2 = x1;
      g2 = g1;
      x1 = right - kInvPhi * (right - left);
      g1 = gap_at(x1);
    } else {
      left = x1;
      x1 = x2;
      g1 = g2;
      x2 = left + kInvPhi * (right - left);
      g2 = gap_at(x2);
    }
  }
  double best_u = 0.0;
  double best_gap = gap_at(0.0);
  for (double u : {1.0, x1, x2}) {
    const double g = gap_at(u);
    if (g < best_gap) {
      best_gap = g;
      best_u = u;
    }
  }

  TieWitness tie;
  tie.location = at_u(best_u);
  const FarthestResult at = left_farthest(f, C, tie.location, 0.0);
  tie.value = at.value;
  tie.top_gap = at.top_gap;
  tie.pair = {std::min(label_lo, label_hi), std::max(label_lo, label_hi)};
  if (!f.in_domain(tie.location) ||
      tie.top_gap > 1e-10 * (1.0 + std::abs(tie.value))) {
    return std::nullopt;
  }
  return tie;
}

}  // namespace bregman
