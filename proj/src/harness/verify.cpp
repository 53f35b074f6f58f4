#include "bregman/harness/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <utility>

#include "bregman/harness/field.hpp"
#include "bregman/harness/io.hpp"
#include "bregman/random.hpp"
#include "bregman/variational.hpp"

namespace bregman::harness {

namespace {

constexpr double kLambdas[] = {1.0, 1.25, 2.0};
constexpr double kPerturbationRadius = 1e-6;
constexpr int kDrawAttempts = 1000;
/// Tie points only need the Hessian to exist along the Dini schedule; a
/// wider band would exclude most one-dimensional ppower(p < 2) ties,
/// which sit between the two extremes of C, near the origin.
constexpr double kTieMargin = 0.01;

std::string describe(const Vector& v) {
  std::string text = "(";
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    if (j > 0) text += ", ";
    text += format_real(v[j]);
  }
  return text + ")";
}

/// Sampling boxes per family. Points of C and query points stay well inside
/// U; Hessian-based checks additionally keep away from the nonsmooth set.
struct Boxes {
  double point_lo;
  double point_hi;
  double query_lo;
  double query_hi;
};

Boxes boxes_for(const LegendreSpec& f) {
  if (f.kind() == LegendreKind::Shannon) return {0.2, 3.0, 0.1, 4.0};
  return {-2.0, 2.0, -3.0, 3.0};
}

bool smooth_enough(const LegendreSpec& f, const Vector& y, double margin) {
  if (!f.in_domain(y)) return false;
  switch (f.kind()) {
    case LegendreKind::Shannon:
      return y.minCoeff() >= margin;
    case LegendreKind::PPower:
      return f.p() >= 2.0 || y.cwiseAbs().minCoeff() >= margin;
    default:
      return true;
  }
}

class SuiteRunner {
 public:
  SuiteRunner(Suite suite, const FunctionChoice& function,
              std::size_t dimension, const VerifyContext& context)
      : suite_(suite),
        f_(function.make(dimension)),
        dim_(dimension),
        ctx_(context),
        tol_(context.tolerances),
        sizes_(context.sizes),
        boxes_(boxes_for(f_)),
        sampler_(0) {
    entry_.check_name = std::string(suite_name(suite));
    entry_.function = function.label();
    entry_.dimension = dimension;
    entry_.seed = derive_seed(
        context.seed, entry_.check_name + "/" + entry_.function + "/" +
                          std::to_string(dimension));
    sampler_ = Sampler(entry_.seed);
  }

  SuiteEntry run() {
    switch (suite_) {
      case Suite::RoundTrip: round_trip(); break;
      case Suite::FenchelYoung: fenchel_young(); break;
      case Suite::GradientConsistency: gradient_consistency(); break;
      case Suite::HessianConsistency: hessian_consistency(); break;
      case Suite::Convexity: convexity(); break;
      case Suite::FarthestCharacterization: farthest_characterization(); break;
      case Suite::RayInvariance: ray_invariance(); break;
      case Suite::DualAgreement: dual_agreement(); break;
      case Suite::Monotonicity: monotonicity(); break;
      case Suite::UpperSemicontinuity: upper_semicontinuity(); break;
      case Suite::NegConjugateIdentity: neg_conjugate_identity(); break;
      case Suite::ThetaConjugateIdentity: theta_conjugate_identity(); break;
      case Suite::DualConvexity: dual_convexity(); break;
      case Suite::SubdifferentialInverse: subdifferential_inverse(); break;
      case Suite::ClarkeRegularity: clarke_regularity(); break;
      case Suite::GradientFormula: gradient_formula(); break;
      case Suite::DifferentiabilityDichotomy: differentiability_dichotomy(); break;
      case Suite::DualGradientSingleton: dual_gradient_singleton(); break;
      case Suite::ThetaFalsifier: theta_falsifier(); break;
      case Suite::ThetaSingletonConvexity: theta_singleton_convexity(); break;
      case Suite::KleeForward: klee_forward(); break;
      case Suite::KleeContrapositive: klee_contrapositive(); break;
      case Suite::RightKleeDual: right_klee_dual(); break;
    }
    return entry_;
  }

 private:
  // ---- sampling -----------------------------------------------------------

  Vector query() { return sampler_.uniform_box(dim_, boxes_.query_lo, boxes_.query_hi); }

  Vector smooth_query(double margin) {
    for (int attempt = 0; attempt < kDrawAttempts; ++attempt) {
      Vector y = query();
      if (smooth_enough(f_, y, margin)) return y;
    }
    throw PreconditionError("could not sample a query point away from the "
                            "nonsmooth set");
  }

  Vector dual_query() { return sampler_.uniform_box(dim_, -3.0, 3.0); }

  PointSet draw_set(std::size_t min_size, std::size_t max_size) {
    if (ctx_.fixed_points && !ctx_.fixed_points->empty() &&
        static_cast<std::size_t>(ctx_.fixed_points->front().size()) == dim_ &&
        ctx_.fixed_points->size() >= min_size &&
        ctx_.fixed_points->size() <= max_size) {
      return PointSet(*ctx_.fixed_points, f_);
    }
    const std::size_t n = sampler_.integer(min_size, max_size);
    std::vector<Vector> points;
    points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      points.push_back(
          sampler_.uniform_box(dim_, boxes_.point_lo, boxes_.point_hi));
    }
    return PointSet(std::move(points), f_);
  }

  bool uses_fixed_set(std::size_t min_size) const {
    return ctx_.fixed_points && !ctx_.fixed_points->empty() &&
           static_cast<std::size_t>(ctx_.fixed_points->front().size()) == dim_ &&
           ctx_.fixed_points->size() >= min_size;
  }

  PointSet any_set() { return draw_set(1, sizes_.max_set_size); }
  PointSet plural_set() { return draw_set(2, sizes_.max_set_size); }
  PointSet singleton_set() { return draw_set(1, 1); }

  /// Two query points whose exact farthest labels differ: random probes in
  /// the box first, then the dual axes s = +-R e_j, where for large R the
  /// labels are the extreme points of C along e_j.
  std::optional<std::pair<Vector, Vector>> label_change(
      const LegendreSpec& f, const PointSet& C, double lo, double hi) {
    const Vector first = sampler_.uniform_box(dim_, lo, hi);
    const std::size_t label = farthest_label(f, C, first);
    for (int probe = 0; probe < 200; ++probe) {
      Vector other = sampler_.uniform_box(dim_, lo, hi);
      if (farthest_label(f, C, other) != label) {
        return std::make_pair(first, std::move(other));
      }
    }
    double radius = 1.0;
    for (const auto& c : C) {
      radius = std::max(radius, 1.0 + gradient(f, c).cwiseAbs().maxCoeff());
    }
    for (; radius < 600.0; radius *= 2.0) {
      for (std::size_t j = 0; j < dim_; ++j) {
        Vector s = Vector::Zero(static_cast<Eigen::Index>(dim_));
        s[j] = radius;
        const Vector plus = conjugate_gradient(f, s);
        const Vector minus = conjugate_gradient(f, Vector(-s));
        if (!f.in_domain(plus) || !f.in_domain(minus)) continue;
        if (farthest_label(f, C, plus) != farthest_label(f, C, minus)) {
          return std::make_pair(plus, minus);
        }
      }
    }
    return std::nullopt;
  }

  std::optional<TieWitness> construct_tie(const LegendreSpec& f,
                                          const PointSet& C, double lo,
                                          double hi,
                                          std::optional<double> margin) {
    for (int attempt = 0; attempt < 50; ++attempt) {
      const auto ends = label_change(f, C, lo, hi);
      if (!ends) return std::nullopt;
      auto tie = find_tie(f, C, ends->first, ends->second);
      if (!tie) continue;
      if (margin && !smooth_enough(f, tie->location, *margin)) continue;
      return tie;
    }
    return std::nullopt;
  }

  std::optional<TieWitness> construct_tie(const PointSet& C,
                                          std::optional<double> margin) {
    return construct_tie(f_, C, boxes_.query_lo, boxes_.query_hi, margin);
  }

  /// A plural set together with a tie point away from the nonsmooth set. In
  /// low dimension a set can have all its ties inside the excluded band, so
  /// the set is redrawn a few times.
  std::optional<std::pair<PointSet, TieWitness>> tie_instance() {
    for (int draw = 0; draw < 200; ++draw) {
      PointSet C = plural_set();
      if (auto tie = construct_tie(C, kTieMargin)) {
        return std::make_pair(std::move(C), std::move(*tie));
      }
      if (uses_fixed_set(2)) break;
    }
    return std::nullopt;
  }

  template <typename Fn>
  void per_query(std::size_t count, std::function<PointSet()> make_set,
                 Fn&& body) {
    std::optional<PointSet> C;
    for (std::size_t i = 0; i < count; ++i) {
      if (i % sizes_.queries_per_set == 0) C = make_set();
      body(*C, i);
    }
  }

  // ---- Legendre function --------------------------------------------------

  void round_trip() {
    entry_.tolerance = tol_.round_trip;
    for (std::size_t i = 0; i < sizes_.round_trip_points; ++i) {
      const Vector x = query();
      const Vector s = dual_query();
      const double primal =
          (conjugate_gradient(f_, gradient(f_, x)) - x).norm() / (1.0 + x.norm());
      const double dual =
          (gradient(f_, conjugate_gradient(f_, s)) - s).norm() / (1.0 + s.norm());
      const double residual = std::max(primal, dual);
      entry_.record(residual <= tol_.round_trip, residual,
                    "x = " + describe(x) + ", s = " + describe(s));
    }
  }

  void fenchel_young() {
    entry_.tolerance = tol_.identity;
    for (std::size_t i = 0; i < sizes_.round_trip_points; ++i) {
      const Vector x = query();
      const Vector g = gradient(f_, x);
      const double fx = value(f_, x);
      const double fs = conjugate_value(f_, g);
      const double inner = g.dot(x);
      const double residual = std::abs(fx + fs - inner) /
                              (1.0 + std::abs(fx) + std::abs(fs) + std::abs(inner));
      entry_.record(residual <= tol_.identity, residual, "x = " + describe(x));
    }
  }

  void gradient_consistency() {
    entry_.tolerance = tol_.finite_difference;
    for (std::size_t i = 0; i < sizes_.round_trip_points; ++i) {
      const Vector x = smooth_query(0.1);
      const Vector g = gradient(f_, x);
      double residual = 0.0;
      for (std::size_t j = 0; j < dim_; ++j) {
        const double h = 1e-6 * (1.0 + std::abs(x[j]));
        Vector forward = x;
        Vector backward = x;
        forward[j] += h;
        backward[j] -= h;
        const double fd = (value(f_, forward) - value(f_, backward)) / (2.0 * h);
        residual = std::max(residual, std::abs(fd - g[j]) / (1.0 + std::abs(g[j])));
      }
      entry_.record(residual <= tol_.finite_difference, residual,
                    "x = " + describe(x));
    }
  }

  void hessian_consistency() {
    entry_.tolerance = tol_.hessian;
    for (std::size_t i = 0; i < sizes_.round_trip_points; ++i) {
      const Vector x = smooth_query(0.1);
      const Matrix h = hessian(f_, x);
      double residual = 0.0;
      for (std::size_t j = 0; j < dim_; ++j) {
        const double step = 1e-6 * (1.0 + std::abs(x[j]));
        Vector forward = x;
        Vector backward = x;
        forward[j] += step;
        backward[j] -= step;
        const Vector column =
            (gradient(f_, forward) - gradient(f_, backward)) / (2.0 * step);
        for (std::size_t k = 0; k < dim_; ++k) {
          residual = std::max(residual, std::abs(column[k] - h(k, j)) /
                                            (1.0 + std::abs(h(k, j))));
        }
      }
      entry_.record(residual <= tol_.hessian, residual, "x = " + describe(x));
    }
  }

  void convexity() {
    constexpr double kSlack = 1e-12;
    entry_.tolerance = kSlack;
    for (std::size_t i = 0; i < sizes_.round_trip_points; ++i) {
      const Vector x = query();
      const Vector y = query();
      const double lambda = sampler_.uniform(0.0, 1.0);
      const double lhs = value(f_, Vector(lambda * x + (1.0 - lambda) * y));
      const double rhs = lambda * value(f_, x) + (1.0 - lambda) * value(f_, y);
      const double excess = std::max(0.0, (lhs - rhs) / (1.0 + std::abs(rhs)));
      entry_.record(excess <= kSlack, excess,
                    "x = " + describe(x) + ", y = " + describe(y));
    }
  }

  // ---- farthest points ----------------------------------------------------

  void farthest_characterization() {
    entry_.tolerance = 0.0;
    per_query(sizes_.characterization_queries, [&] { return any_set(); },
              [&](const PointSet& C, std::size_t) {
                const Vector y = query();
                const FarthestResult far = left_farthest(f_, C, y, tol_.tie);
                std::size_t disagreements = 0;
                for (std::size_t i = 0; i < C.size(); ++i) {
                  if (check_farthest_characterization(f_, C, y, C[i]) !=
                      far.contains(i)) {
                    ++disagreements;
                  }
                }
                entry_.record(disagreements == 0,
                              static_cast<double>(disagreements),
                              "y = " + describe(y) + ", |C| = " +
                                  std::to_string(C.size()) + ", " +
                                  std::to_string(disagreements) +
                                  " disagreements");
              });
  }

  void ray_invariance() {
    entry_.tolerance = 0.0;
    for (std::size_t i = 0; i < sizes_.ray_instances; ++i) {
      std::optional<PointSet> C;
      Vector y;
      FarthestResult far;
      for (int attempt = 0; attempt < kDrawAttempts; ++attempt) {
        C = plural_set();
        y = query();
        far = left_farthest(f_, *C, y, tol_.tie);
        if (far.is_singleton()) break;
      }
      if (!far.is_singleton()) {
        entry_.record(false, 1.0, "no query with a unique farthest point");
        continue;
      }
      const Vector& x = (*C)[far.witness];
      bool ok = true;
      std::string detail;
      for (double lambda : kLambdas) {
        const Vector z = ray_point(f_, x, y, lambda);
        if (!f_.in_domain(z)) {
          ok = false;
          detail = "z leaves U for lambda " + format_real(lambda);
          break;
        }
        const FarthestResult at = left_farthest(f_, *C, z, tol_.tie);
        const bool good = lambda == 1.0
                              ? at.contains(far.witness)
                              : at.is_singleton() && at.witness == far.witness &&
                                    at.top_gap > 0;
        if (!good) {
          ok = false;
          detail = "lambda " + format_real(lambda) + ", y = " + describe(y);
          break;
        }
      }
      entry_.record(ok, ok ? 0.0 : 1.0, detail);
    }
  }

  void dual_agreement() {
    entry_.tolerance = tol_.identity;
    per_query(sizes_.dual_queries, [&] { return any_set(); },
              [&](const PointSet& C, std::size_t) {
                const Vector y = query();
                const FarthestResult direct =
                    right_farthest_direct(f_, C, y, tol_.tie);
                const FarthestResult dual = right_farthest_dual(f_, C, y, tol_.tie);
                const double residual = std::abs(direct.value - dual.value) /
                                        (1.0 + std::abs(direct.value));
                const bool ok = residual <= tol_.identity &&
                                direct.argmax_indices == dual.argmax_indices;
                entry_.record(ok, residual, "y = " + describe(y));
              });
  }

  void monotonicity() {
    entry_.tolerance = tol_.monotonicity;
    per_query(sizes_.monotone_pairs, [&] { return any_set(); },
              [&](const PointSet& C, std::size_t) {
                const Vector x = query();
                const Vector y = query();
                const double gap = monotonicity_gap(f_, C, x, y, tol_.tie);
                const Vector& px = C[left_farthest(f_, C, x, tol_.tie).witness];
                const Vector& py = C[left_farthest(f_, C, y, tol_.tie).witness];
                const double scale =
                    1.0 + (gradient(f_, x) - gradient(f_, y)).norm() * (px - py).norm();
                const double residual = std::max(0.0, -gap) / scale;
                entry_.record(residual <= tol_.monotonicity, residual,
                              "x = " + describe(x) + ", y = " + describe(y));
              });
  }

  void upper_semicontinuity() {
    entry_.tolerance = 0.0;
    for (std::size_t i = 0; i < sizes_.usc_ties; ++i) {
      const auto instance = tie_instance();
      if (!instance) {
        entry_.record(false, 1.0, "no tie point constructed");
        continue;
      }
      const PointSet& C = instance->first;
      const TieWitness* tie = &instance->second;
      const FarthestResult at = left_farthest(f_, C, tie->location, tol_.tie);
      std::size_t escapes = 0;
      for (std::size_t k = 0; k < sizes_.usc_perturbations; ++k) {
        const Vector moved =
            tie->location + kPerturbationRadius * sampler_.direction(dim_);
        if (!f_.in_domain(moved)) continue;
        if (!at.contains(left_farthest(f_, C, moved, tol_.tie).witness)) {
          ++escapes;
        }
      }
      entry_.record(escapes == 0, static_cast<double>(escapes),
                    "tie at " + describe(tie->location));
    }
  }

  // ---- conjugate identities -----------------------------------------------

  void neg_conjugate_identity() {
    entry_.tolerance = tol_.identity;
    per_query(sizes_.identity_points, [&] { return any_set(); },
              [&](const PointSet& C, std::size_t) {
                const Vector s = dual_query();
                const double lhs = neg_restricted_conjugate(f_, C, s);
                const double rhs =
                    farthest_distance_dual(f_, C, s) - conjugate_value(f_, s);
                const double residual = std::abs(lhs - rhs) / (1.0 + std::abs(lhs));
                entry_.record(residual <= tol_.identity, residual,
                              "s = " + describe(s));
              });
  }

  void theta_conjugate_identity() {
    entry_.tolerance = tol_.identity;
    per_query(sizes_.identity_points, [&] { return any_set(); },
              [&](const PointSet& C, std::size_t) {
                const Vector s = dual_query();
                const double lhs = theta_conjugate(f_, C, s);
                const double rhs = farthest_distance_dual(f_, C, s);
                const double residual = std::abs(lhs - rhs) / (1.0 + std::abs(rhs));
                entry_.record(residual <= tol_.identity, residual,
                              "s = " + describe(s));
              });
  }

  void dual_convexity() {
    entry_.tolerance = tol_.convexity;
    per_query(sizes_.convexity_pairs, [&] { return any_set(); },
              [&](const PointSet& C, std::size_t) {
                const Vector s = dual_query();
                const Vector t = dual_query();
                const double gs = farthest_distance_dual(f_, C, s);
                const double gt = farthest_distance_dual(f_, C, t);
                const double gm = farthest_distance_dual(f_, C, Vector(0.5 * (s + t)));
                const double scale =
                    1.0 + std::max({std::abs(gs), std::abs(gt), std::abs(gm)});
                const double excess = std::max(0.0, (gm - 0.5 * (gs + gt)) / scale);
                entry_.record(excess <= tol_.convexity, excess,
                              "s = " + describe(s) + ", t = " + describe(t));
              });
  }

  void subdifferential_inverse() {
    entry_.tolerance = 0.0;
    per_query(sizes_.inverse_pairs, [&] { return any_set(); },
              [&](const PointSet& C, std::size_t i) {
                const Vector s = dual_query();
                // Alternate between a random element and the farthest point,
                // so both "true" and "false" verdicts are exercised.
                const std::size_t index =
                    i % 2 == 0 ? sampler_.integer(0, C.size() - 1)
                               : left_farthest(f_, C, conjugate_gradient(f_, s),
                                               tol_.tie)
                                     .witness;
                const InverseCheck check =
                    subdifferential_inverse_check(f_, C, C[index], s, tol_.tie);
                entry_.record(check.agree(), check.agree() ? 0.0 : 1.0,
                              "s = " + describe(s) + ", c = " + describe(C[index]));
              });
  }

  // ---- subdifferentials ---------------------------------------------------

  void clarke_at(const PointSet& C, const Vector& y, std::string_view kind) {
    double worst = 0.0;
    bool ok = true;
    for (std::size_t d = 0; d < sizes_.clarke_directions; ++d) {
      const Vector w = sampler_.direction(dim_);
      const SubderivativeEstimate est = dini_subderivative(f_, C, y, w, tol_.tie);
      const double support = clarke_subdifferential_support(f_, C, y, w, tol_.tie);
      const double residual = std::max(
          std::abs(est.dini_value - est.formula_value) /
              (1.0 + std::abs(est.formula_value)),
          std::abs(support - est.formula_value) / (1.0 + std::abs(support)));
      worst = std::max(worst, residual);
      ok = ok && residual <= tol_.dini;
    }
    entry_.record(ok, worst, std::string(kind) + " point y = " + describe(y));
  }

  void clarke_regularity() {
    entry_.tolerance = tol_.dini;
    for (std::size_t i = 0; i < sizes_.clarke_generic; ++i) {
      const PointSet C = any_set();
      clarke_at(C, smooth_query(0.05), "generic");
    }
    for (std::size_t i = 0; i < sizes_.clarke_ties; ++i) {
      const auto instance = tie_instance();
      if (!instance) {
        entry_.record(false, 1.0, "no tie point constructed");
        continue;
      }
      const PointSet& C = instance->first;
      const TieWitness* tie = &instance->second;
      clarke_at(C, tie->location, "tie");
    }
  }

  void gradient_formula() {
    entry_.tolerance = tol_.finite_difference;
    for (std::size_t i = 0; i < sizes_.gradient_points; ++i) {
      std::optional<PointSet> C;
      Vector y;
      bool found = false;
      for (int attempt = 0; attempt < kDrawAttempts && !found; ++attempt) {
        C = any_set();
        y = smooth_query(0.05);
        const FarthestResult far = left_farthest(f_, *C, y, tol_.tie);
        // Keep the finite-difference stencil inside one farthest region.
        found = far.is_singleton() && far.top_gap >= 1e-2 * (1.0 + far.value);
      }
      if (!found) {
        entry_.record(false, 1.0, "no point with a unique farthest point");
        continue;
      }
      const FarthestGradient g = gradient_farthest_distance(f_, *C, y, tol_.tie);
      const bool ok = !g.multi_valued() &&
                      g.cross_check_residual <= tol_.finite_difference;
      entry_.record(ok, g.cross_check_residual, "y = " + describe(y));
    }
  }

  void differentiability_dichotomy() {
    entry_.tolerance = 0.0;
    for (std::size_t i = 0; i < sizes_.gradient_ties; ++i) {
      const auto instance = tie_instance();
      if (!instance) {
        entry_.record(false, 1.0, "no tie point constructed");
        continue;
      }
      const PointSet& C = instance->first;
      const TieWitness* tie = &instance->second;
      const FarthestGradient g =
          gradient_farthest_distance(f_, C, tie->location, tol_.tie);
      entry_.record(g.multi_valued(), g.multi_valued() ? 0.0 : 1.0,
                    "tie at " + describe(tie->location) +
                        " reported differentiable");
    }
  }

  void dual_gradient_singleton() {
    entry_.tolerance = tol_.finite_difference;
    for (std::size_t i = 0; i < sizes_.gradient_points; ++i) {
      const PointSet C = singleton_set();
      const Vector s = dual_query();
      const auto grad = dual_farthest_gradient(f_, C, s, tol_.tie);
      if (!grad) {
        entry_.record(false, 1.0, "singleton set reported multi-valued");
        continue;
      }
      Vector fd(static_cast<Eigen::Index>(dim_));
      for (std::size_t j = 0; j < dim_; ++j) {
        const double h = 1e-6 * (1.0 + std::abs(s[j]));
        Vector forward = s;
        Vector backward = s;
        forward[j] += h;
        backward[j] -= h;
        fd[j] = (farthest_distance_dual(f_, C, forward) -
                 farthest_distance_dual(f_, C, backward)) /
                (2.0 * h);
      }
      const double residual = (fd - *grad).norm() / (1.0 + grad->norm());
      entry_.record(residual <= tol_.finite_difference, residual,
                    "s = " + describe(s));
    }
  }

  // ---- Klee dichotomy -----------------------------------------------------

  void theta_falsifier() {
    entry_.tolerance = tol_.convexity;
    entry_.max_inconclusive_fraction = 0.05;
    for (std::size_t i = 0; i < sizes_.klee_sets; ++i) {
      const PointSet C = plural_set();
      const ConvexityProbe probe =
          probe_theta_convexity(f_, C, sampler_.next(), sizes_.theta_trials,
                                tol_.convexity);
      if (probe.violation_found) {
        entry_.record(true, probe.worst_excess, "");
      } else {
        entry_.record_inconclusive("no midpoint violation in " +
                                   std::to_string(probe.trials) +
                                   " trials, |C| = " + std::to_string(C.size()));
      }
    }
  }

  void theta_singleton_convexity() {
    entry_.tolerance = tol_.convexity;
    for (std::size_t i = 0; i < sizes_.klee_singleton_sets; ++i) {
      const PointSet C = singleton_set();
      const ConvexityProbe probe =
          probe_theta_convexity(f_, C, sampler_.next(), sizes_.theta_trials,
                                tol_.convexity);
      entry_.record(!probe.violation_found, std::max(0.0, probe.worst_excess),
                    "midpoint violation for singleton C at x = " +
                        describe(probe.x) + ", y = " + describe(probe.y));
    }
  }

  void klee_forward() {
    entry_.tolerance = 0.0;
    for (std::size_t i = 0; i < sizes_.klee_singleton_sets; ++i) {
      const PointSet C = singleton_set();
      std::size_t multi = 0;
      auto visit = [&](const Vector& y) {
        if (!left_farthest(f_, C, y, tol_.tie).is_singleton()) ++multi;
      };
      if (dim_ <= 2) {
        GridSpec grid;
        grid.lower = Vector::Constant(static_cast<Eigen::Index>(dim_), boxes_.query_lo);
        grid.upper = Vector::Constant(static_cast<Eigen::Index>(dim_), boxes_.query_hi);
        grid.resolution.assign(dim_, sizes_.klee_grid);
        for (std::size_t k = 0; k < grid.node_count(); ++k) visit(grid.node(k));
      } else {
        for (std::size_t k = 0; k < sizes_.klee_grid * sizes_.klee_grid; ++k) {
          visit(query());
        }
      }
      entry_.record(multi == 0, static_cast<double>(multi),
                    std::to_string(multi) + " nodes with several farthest points");
    }
  }

  void klee_contrapositive() {
    entry_.tolerance = tol_.tie_gap;
    for (std::size_t i = 0; i < sizes_.klee_sets; ++i) {
      const PointSet C = plural_set();
      const auto tie = construct_tie(C, std::nullopt);
      if (!tie) {
        entry_.record(false, kInfinity,
                      "no tie found for |C| = " + std::to_string(C.size()));
        continue;
      }
      const double residual = tie->top_gap / (1.0 + std::abs(tie->value));
      entry_.record(residual <= tol_.tie_gap, residual,
                    "tie at " + describe(tie->location));
    }
  }

  void right_klee_dual() {
    entry_.tolerance = tol_.tie_gap;
    const LegendreSpec dual = conjugate(f_);
    for (std::size_t i = 0; i < sizes_.klee_sets; ++i) {
      const PointSet C = plural_set();
      std::vector<Vector> mapped;
      for (const auto& c : C) mapped.push_back(gradient(f_, c));
      const PointSet dual_set(std::move(mapped), dual);
      const auto tie = construct_tie(dual, dual_set, -3.0, 3.0, std::nullopt);
      if (!tie) {
        entry_.record(false, kInfinity, "no dual tie found");
        continue;
      }
      const Vector y = conjugate_gradient(f_, tie->location);
      if (!f_.in_domain(y)) {
        entry_.record(false, kInfinity, "mapped tie leaves U");
        continue;
      }
      const FarthestResult right = right_farthest_direct(f_, C, y, tol_.tie);
      const double residual = right.top_gap / (1.0 + std::abs(right.value));
      entry_.record(right.argmax_indices.size() >= 2, residual,
                    "right farthest point unique at " + describe(y));
    }
  }

  Suite suite_;
  LegendreSpec f_;
  std::size_t dim_;
  const VerifyContext& ctx_;
  const Tolerances& tol_;
  const VerifySizes& sizes_;
  Boxes boxes_;
  Sampler sampler_;
  SuiteEntry entry_;
};

nlohmann::ordered_json real_json(double v) {
  if (std::isfinite(v)) return v;
  return format_real(v);
}

}  // namespace

void SuiteEntry::record(bool ok, double residual, std::string_view detail) {
  ++instances_run;
  if (ok) {
    ++pass_count;
  } else if (first_failure.empty()) {
    first_failure = "instance " + std::to_string(instances_run - 1) + ": " +
                    std::string(detail) + " (residual " +
                    format_real(residual) + ")";
  }
  if (std::isnan(residual) || residual > worst_residual) {
    worst_residual = residual;
  }
}

void SuiteEntry::record_inconclusive(std::string_view detail) {
  ++instances_run;
  ++inconclusive;
  if (first_failure.empty()) {
    first_failure = "instance " + std::to_string(instances_run - 1) +
                    " inconclusive: " + std::string(detail);
  }
}

bool SuiteEntry::passed() const {
  if (instances_run == 0) return false;
  if (failures() != 0) return false;
  return static_cast<double>(inconclusive) <=
         max_inconclusive_fraction * static_cast<double>(instances_run);
}

std::string_view suite_name(Suite suite) {
  switch (suite) {
    case Suite::RoundTrip: return "conjugate_round_trip";
    case Suite::FenchelYoung: return "fenchel_young_equality";
    case Suite::GradientConsistency: return "gradient_consistency";
    case Suite::HessianConsistency: return "hessian_consistency";
    case Suite::Convexity: return "convexity_spot_check";
    case Suite::FarthestCharacterization: return "farthest_characterization";
    case Suite::RayInvariance: return "ray_invariance";
    case Suite::DualAgreement: return "right_left_duality";
    case Suite::Monotonicity: return "monotonicity";
    case Suite::UpperSemicontinuity: return "upper_semicontinuity";
    case Suite::NegConjugateIdentity: return "neg_restricted_conjugate_identity";
    case Suite::ThetaConjugateIdentity: return "theta_conjugate_identity";
    case Suite::DualConvexity: return "dual_farthest_convexity";
    case Suite::SubdifferentialInverse: return "subdifferential_inverse";
    case Suite::ClarkeRegularity: return "clarke_regularity";
    case Suite::GradientFormula: return "gradient_formula";
    case Suite::DifferentiabilityDichotomy: return "differentiability_dichotomy";
    case Suite::DualGradientSingleton: return "dual_gradient_singleton";
    case Suite::ThetaFalsifier: return "theta_nonconvexity";
    case Suite::ThetaSingletonConvexity: return "theta_singleton_convexity";
    case Suite::KleeForward: return "klee_forward";
    case Suite::KleeContrapositive: return "klee_contrapositive";
    case Suite::RightKleeDual: return "right_klee_dual";
  }
  return "unknown";
}

const std::vector<Suite>& all_suites() {
  static const std::vector<Suite> suites = {
      Suite::RoundTrip,
      Suite::FenchelYoung,
      Suite::GradientConsistency,
      Suite::HessianConsistency,
      Suite::Convexity,
      Suite::FarthestCharacterization,
      Suite::RayInvariance,
      Suite::DualAgreement,
      Suite::Monotonicity,
      Suite::UpperSemicontinuity,
      Suite::NegConjugateIdentity,
      Suite::ThetaConjugateIdentity,
      Suite::DualConvexity,
      Suite::SubdifferentialInverse,
      Suite::ClarkeRegularity,
      Suite::GradientFormula,
      Suite::DifferentiabilityDichotomy,
      Suite::DualGradientSingleton,
      Suite::ThetaFalsifier,
      Suite::ThetaSingletonConvexity,
      Suite::KleeForward,
      Suite::KleeContrapositive,
      Suite::RightKleeDual,
  };
  return suites;
}

bool is_function_suite(Suite suite) {
  switch (suite) {
    case Suite::RoundTrip:
    case Suite::FenchelYoung:
    case Suite::GradientConsistency:
    case Suite::HessianConsistency:
    case Suite::Convexity:
      return true;
    default:
      return false;
  }
}

SuiteEntry run_suite(Suite suite, const FunctionChoice& function,
                     std::size_t dimension, const VerifyContext& context) {
  return SuiteRunner(suite, function, dimension, context).run();
}

std::vector<FunctionChoice> default_catalog() {
  std::vector<FunctionChoice> catalog;
  catalog.push_back({"energy", 2.0, std::nullopt});
  catalog.push_back({"shannon", 2.0, std::nullopt});
  for (double p : {1.5, 2.0, 4.0}) catalog.push_back({"ppower", p, std::nullopt});
  return catalog;
}

bool VerificationReport::passed() const {
  return std::all_of(suites.begin(), suites.end(),
                     [](const SuiteEntry& e) { return e.passed(); });
}

nlohmann::ordered_json VerificationReport::to_json() const {
  nlohmann::ordered_json root;
  root["seed"] = seed;
  root["tie_tolerance"] = real_json(tie_tolerance);
  root["passed"] = passed();
  auto& list = root["suites"] = nlohmann::ordered_json::array();
  for (const auto& e : suites) {
    nlohmann::ordered_json node;
    node["check_name"] = e.check_name;
    node["function"] = e.function;
    node["dimension"] = e.dimension;
    node["instances_run"] = e.instances_run;
    node["pass_count"] = e.pass_count;
    node["inconclusive"] = e.inconclusive;
    node["worst_residual"] = real_json(e.worst_residual);
    node["tolerance"] = real_json(e.tolerance);
    node["seed"] = e.seed;
    node["passed"] = e.passed();
    node["first_failure"] = e.first_failure.empty()
                                ? nlohmann::ordered_json(nullptr)
                                : nlohmann::ordered_json(e.first_failure);
    list.push_back(std::move(node));
  }
  return root;
}

std::string VerificationReport::serialize() const {
  return to_json().dump(2) + "\n";
}

VerificationReport run_verification(const std::vector<FunctionChoice>& functions,
                                    const VerifyContext& context) {
  VerificationReport report;
  report.seed = context.seed;
  report.tie_tolerance = context.tolerances.tie;
  for (const auto& function : functions) {
    for (Suite suite : all_suites()) {
      std::vector<std::size_t> dims =
          is_function_suite(suite) ? context.sizes.round_trip_dimensions
                                   : context.sizes.set_dimensions;
      if (function.dimension) dims = {*function.dimension};
      if (!is_function_suite(suite) && context.fixed_points &&
          !context.fixed_points->empty()) {
        dims = {static_cast<std::size_t>(context.fixed_points->front().size())};
      }
      for (std::size_t dim : dims) {
        report.suites.push_back(run_suite(suite, function, dim, context));
      }
    }
  }
  return report;
}

}  // namespace bregman::harness
