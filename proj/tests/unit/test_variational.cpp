#include <cmath>

#include <gtest/gtest.h>

#include "bregman/random.hpp"
#include "bregman/variational.hpp"
#include "helpers.hpp"

using namespace bregman;
using testing_support::points;
using testing_support::vec;

namespace {

std::vector<Vector> random_points(Sampler& sampler, std::size_t n,
                                  std::size_t dim, double lo, double hi) {
  std::vector<Vector> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(sampler.uniform_box(dim, lo, hi));
  return out;
}

/// Independent central-difference gradient of the farthest distance.
Vector numeric_gradient(const LegendreSpec& f, const PointSet& C, const Vector& y,
                        double h) {
  Vector g(y.size());
  for (Eigen::Index j = 0; j < y.size(); ++j) {
    Vector a = y;
    Vector b = y;
    a[j] += h;
    b[j] -= h;
    g[j] = (left_farthest(f, C, a).value - left_farthest(f, C, b).value) / (2 * h);
  }
  return g;
}

}  // namespace

TEST(NegRestrictedConjugate, Examples) {
  const auto f = LegendreSpec::energy(2);
  EXPECT_DOUBLE_EQ(neg_restricted_conjugate(f, PointSet(points({{0, 0}}), f), vec({3, -1})),
                   0.0);
  EXPECT_DOUBLE_EQ(neg_restricted_conjugate(f, PointSet(points({{0, 0}, {2, 0}}), f),
                                            vec({1, 0})),
                   0.0);
}

TEST(NegRestrictedConjugate, ShannonIdentity) {
  Sampler sampler(31);
  const auto f = LegendreSpec::shannon(3);
  const PointSet C(random_points(sampler, 8, 3, 0.2, 3), f);
  for (int i = 0; i < 100; ++i) {
    const Vector s = sampler.uniform_box(3, -3, 3);
    const double lhs = neg_restricted_conjugate(f, C, s);
    // bfD_C(grad f*(s)) - f*(s) with grad f* = exp, f* = sum exp
    const Vector y = s.array().exp();
    double far = 0;
    for (const auto& c : C) far = std::max(far, bregman_distance(f, c, y));
    EXPECT_NEAR(lhs, far - y.sum(), 1e-9 * (1 + std::abs(lhs)));
  }
}

TEST(Theta, Examples) {
  const auto energy = LegendreSpec::energy(2);
  const PointSet C(points({{0, 0}, {1, 0}}), energy);
  EXPECT_DOUBLE_EQ(theta(energy, C, vec({0, 0})), 0.0);
  EXPECT_DOUBLE_EQ(theta(energy, C, vec({1, 0})), 0.5);

  const auto shannon = LegendreSpec::shannon(1);
  const PointSet one(points({{1}}), shannon);
  EXPECT_DOUBLE_EQ(theta(shannon, one, vec({-1})), 1.0);
  EXPECT_EQ(theta(shannon, one, vec({-2})), kInfinity);
  EXPECT_DOUBLE_EQ(theta(shannon, one, vec({0})), 0.0);
}

TEST(ThetaConjugate, Examples) {
  const auto f = LegendreSpec::energy(2);
  const PointSet C(points({{0, 0}, {2, 0}}), f);
  EXPECT_DOUBLE_EQ(theta_conjugate(f, C, vec({1, 0})), 0.5);
  EXPECT_DOUBLE_EQ(farthest_distance_dual(f, C, vec({1, 0})), 0.5);
}

TEST(ThetaConjugate, SingletonIsFenchelYoungRearrangement) {
  const auto f = LegendreSpec::ppower(3.0, 2);
  const Vector c = vec({0.5, -1.5});
  const PointSet C({c}, f);
  Sampler sampler(1);
  for (int i = 0; i < 50; ++i) {
    const Vector s = sampler.uniform_box(2, -3, 3);
    const double d = bregman_distance(f, c, conjugate_gradient(f, s));
    EXPECT_NEAR(theta_conjugate(f, C, s), d, 1e-9 * (1 + d));
  }
}

TEST(ThetaConjugate, ShannonAndPPowerIdentity) {
  Sampler sampler(37);
  for (const auto& f : {LegendreSpec::shannon(2), LegendreSpec::ppower(4.0, 2)}) {
    const double lo = f.kind() == LegendreKind::Shannon ? 0.2 : -2;
    const PointSet C(random_points(sampler, 10, 2, lo, 3), f);
    for (int i = 0; i < 100; ++i) {
      const Vector s = sampler.uniform_box(2, -3, 3);
      const double rhs = farthest_distance_dual(f, C, s);
      EXPECT_NEAR(theta_conjugate(f, C, s), rhs, 1e-9 * (1 + rhs)) << f.name();
    }
  }
}

TEST(Dini, EnergySingletonIsLinear) {
  const auto f = LegendreSpec::energy(2);
  const PointSet C(points({{0, 0}, {3, 3}}), f);
  const Vector y = vec({-1, 0.5});
  const Vector w = vec({0.6, -0.8});
  const auto est = dini_subderivative(f, C, y, w);
  EXPECT_NEAR(est.formula_value, (y - vec({3, 3})).dot(w), 1e-14);
  EXPECT_NEAR(est.dini_value, est.formula_value, 1e-4 * (1 + std::abs(est.formula_value)));
  EXPECT_EQ(est.step_schedule.size(), 5u);
  EXPECT_TRUE(std::is_sorted(est.step_schedule.rbegin(), est.step_schedule.rend()));
}

TEST(Dini, EnergyTieExample) {
  const auto f = LegendreSpec::energy(2);
  const PointSet C(points({{0, 0}, {2, 0}}), f);
  const Vector y = vec({1, 1});
  for (const Vector& w : {vec({1, 0}), vec({-1, 0})}) {
    const auto est = dini_subderivative(f, C, y, w);
    EXPECT_DOUBLE_EQ(est.formula_value, 1.0);
    EXPECT_NEAR(est.dini_value, 1.0, 1e-4 * 2);
  }
  EXPECT_DOUBLE_EQ(clarke_subdifferential_support(f, C, y, vec({0, 1})), 1.0);
  EXPECT_EQ(clarke_subdifferential_generators(f, C, y).size(), 2u);
}

TEST(Dini, ShrinksScheduleNearBoundary) {
  const auto f = LegendreSpec::shannon(1);
  const PointSet C(points({{1}, {3}}), f);
  const auto est = dini_subderivative(f, C, vec({5e-4}), vec({-1}));
  EXPECT_TRUE(est.schedule_shrunk);
  EXPECT_THROW(dini_subderivative(f, C, vec({5e-7}), vec({-1})), DomainError);
}

TEST(Clarke, SupportMatchesDiniEverywhereSampled) {
  Sampler sampler(41);
  const auto f = LegendreSpec::shannon(2);
  const PointSet C(random_points(sampler, 7, 2, 0.2, 3), f);
  for (int i = 0; i < 50; ++i) {
    const Vector y = sampler.uniform_box(2, 0.1, 4);
    const Vector w = sampler.direction(2);
    const auto est = dini_subderivative(f, C, y, w);
    const double support = clarke_subdifferential_support(f, C, y, w);
    EXPECT_DOUBLE_EQ(support, est.formula_value);
    EXPECT_NEAR(est.dini_value, support, 1e-4 * (1 + std::abs(support)));
  }
}

TEST(GradientFormula, EnergyIsClassical) {
  const auto f = LegendreSpec::energy(2);
  const PointSet C(points({{0, 0}, {3, 1}}), f);
  const auto g = gradient_farthest_distance(f, C, vec({-1, 0}));
  ASSERT_FALSE(g.multi_valued());
  EXPECT_LE((*g.gradient - vec({-4, -1})).norm(), 1e-15);
}

TEST(GradientFormula, ShannonExample) {
  const auto f = LegendreSpec::shannon(2);
  const PointSet C(points({{1, 1}, {2, 3}}), f);
  const Vector y = vec({1.5, 1.5});
  const auto g = gradient_farthest_distance(f, C, y);
  ASSERT_FALSE(g.multi_valued());
  // D((2,3), y) = 0.654.. > D((1,1), y) = 0.189.., so p = (2,3) and
  // grad = diag(1/1.5) (y - p) = (-1/3, -1).
  EXPECT_EQ(g.active_indices, std::vector<std::size_t>{1});
  EXPECT_NEAR((*g.gradient)[0], -1.0 / 3.0, 1e-15);
  EXPECT_NEAR((*g.gradient)[1], -1.0, 1e-15);
  const Vector fd = numeric_gradient(f, C, y, 1e-6);
  EXPECT_LE((fd - *g.gradient).norm(), 1e-5 * (1 + g.gradient->norm()));
  EXPECT_LE(g.cross_check_residual, 1e-5);
}

TEST(GradientFormula, TiePointIsMultiValued) {
  const auto f = LegendreSpec::shannon(2);
  const PointSet C(points({{1, 1}, {3, 1}}), f);
  const auto tie = find_tie(f, C, vec({0.5, 1}), vec({3.5, 1}));
  ASSERT_TRUE(tie.has_value());
  const auto g = gradient_farthest_distance(f, C, tie->location);
  EXPECT_TRUE(g.multi_valued());
  EXPECT_EQ(g.generators.size(), 2u);
}

TEST(GradientFormula, RequiresTwiceDifferentiability) {
  const auto f = LegendreSpec::ppower(1.5, 2);
  const PointSet C(points({{1, 1}, {-1, 2}}), f);
  EXPECT_THROW(gradient_farthest_distance(f, C, vec({0, 1})),
               NotTwiceDifferentiableError);
}

TEST(DualGradient, SingletonMatchesFiniteDifferences) {
  Sampler sampler(43);
  for (const auto& f : {LegendreSpec::shannon(2), LegendreSpec::ppower(1.5, 2)}) {
    const Vector c = vec({0.7, 1.3});
    const PointSet C({c}, f);
    for (int i = 0; i < 30; ++i) {
      const Vector s = sampler.uniform_box(2, -2, 2);
      const auto g = dual_farthest_gradient(f, C, s);
      ASSERT_TRUE(g.has_value());
      EXPECT_LE((*g - (conjugate_gradient(f, s) - c)).norm(), 1e-15);
      Vector fd(2);
      for (int j = 0; j < 2; ++j) {
        Vector a = s;
        Vector b = s;
        a[j] += 1e-6;
        b[j] -= 1e-6;
        fd[j] = (farthest_distance_dual(f, C, a) - farthest_distance_dual(f, C, b)) / 2e-6;
      }
      EXPECT_LE((fd - *g).norm(), 1e-5 * (1 + g->norm())) << f.name();
    }
  }
}

TEST(DualGradient, TieHasNoGradient) {
  const auto f = LegendreSpec::energy(2);
  const PointSet C(points({{0, 0}, {2, 0}}), f);
  EXPECT_FALSE(dual_farthest_gradient(f, C, vec({1, 4})).has_value());
}

TEST(SubdifferentialInverse, Examples) {
  const auto energy = LegendreSpec::energy(2);
  const PointSet C(points({{0, 0}, {2, 0}}), energy);
  for (const auto& c : C) {
    const auto check = subdifferential_inverse_check(energy, C, c, vec({1, 0}));
    EXPECT_TRUE(check.attains_conjugate_max);
    EXPECT_TRUE(check.is_farthest_point);
  }
  const auto miss = subdifferential_inverse_check(energy, C, C[0], vec({-3, 0}));
  EXPECT_FALSE(miss.attains_conjugate_max);
  EXPECT_FALSE(miss.is_farthest_point);

  const auto shannon = LegendreSpec::shannon(2);
  const PointSet one(points({{2, 0.5}}), shannon);
  const auto single = subdifferential_inverse_check(shannon, one, one[0], vec({-1, 4}));
  EXPECT_TRUE(single.attains_conjugate_max && single.is_farthest_point);
}

TEST(SubdifferentialInverse, ShannonSweepAgrees) {
  Sampler sampler(47);
  const auto f = LegendreSpec::shannon(2);
  const PointSet C(random_points(sampler, 9, 2, 0.2, 3), f);
  std::size_t hits = 0;
  for (int i = 0; i < 1000; ++i) {
    const Vector s = sampler.uniform_box(2, -3, 3);
    const auto& c = C[sampler.integer(0, C.size() - 1)];
    const auto check = subdifferential_inverse_check(f, C, c, s);
    EXPECT_TRUE(check.agree());
    hits += check.is_farthest_point ? 1 : 0;
  }
  EXPECT_GT(hits, 0u);
}

TEST(ThetaConvexity, SingletonIsConvex) {
  const auto f = LegendreSpec::shannon(2);
  const PointSet C(points({{1.5, 0.5}}), f);
  const auto probe = probe_theta_convexity(f, C, 99, 10000, 1e-10);
  EXPECT_FALSE(probe.violation_found);
  EXPECT_EQ(probe.trials, 10000u);
}

TEST(ThetaConvexity, TwoPointsViolateMidpointConvexity) {
  const auto f = LegendreSpec::energy(1);
  const PointSet C(points({{0}, {1}}), f);
  // theta(x) = x^2 / 2 + min(0, x): theta(+-0.1) = 0.005, -0.095 while
  // theta(0) = 0 lies above their mean.
  EXPECT_DOUBLE_EQ(theta(f, C, vec({-0.1})), 0.005 - 0.1);
  EXPECT_GT(theta(f, C, vec({0})),
            0.5 * (theta(f, C, vec({-0.1})) + theta(f, C, vec({0.1}))));
  const auto probe = probe_theta_convexity(f, C, 3, 10000, 1e-10);
  EXPECT_TRUE(probe.violation_found);
  const double lhs = theta(f, C, 0.5 * (probe.x + probe.y));
  EXPECT_GT(lhs, 0.5 * (theta(f, C, probe.x) + theta(f, C, probe.y)));
}

TEST(ThetaConvexity, DeterministicForSeed) {
  const auto f = LegendreSpec::ppower(4.0, 2);
  const PointSet C(points({{0, 0}, {1, -1}, {0.5, 2}}), f);
  const auto a = probe_theta_convexity(f, C, 5);
  const auto b = probe_theta_convexity(f, C, 5);
  EXPECT_EQ(a.trials, b.trials);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.worst_excess, b.worst_excess);
}
