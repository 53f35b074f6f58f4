#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "bregman/legendre.hpp"
#include "bregman/random.hpp"
#include "helpers.hpp"

using namespace bregman;
using testing_support::vec;

namespace {

const double kE = std::exp(1.0);

/// phi = cosh, phi* (s) = s asinh(s) - sqrt(1 + s^2); no conjugate oracles
/// are given, so the library has to invert sinh numerically.
ScalarLegendre cosh_scalar() {
  ScalarLegendre phi;
  phi.name = "cosh";
  phi.value = [](double t) { return std::cosh(t); };
  phi.derivative = [](double t) { return std::sinh(t); };
  phi.second_derivative = [](double t) { return std::cosh(t); };
  return phi;
}

/// The Shannon kernel rebuilt as a custom scalar, so that the numeric
/// inverse has to expand its bracket toward the finite lower bound 0.
ScalarLegendre custom_entropy() {
  ScalarLegendre phi;
  phi.name = "entropy";
  phi.domain = {0.0, kInfinity};
  phi.value = [](double t) { return t == 0 ? 0.0 : t * std::log(t) - t; };
  phi.derivative = [](double t) { return std::log(t); };
  phi.second_derivative = [](double t) { return 1.0 / t; };
  return phi;
}

}  // namespace

TEST(Value, EnergyExample) {
  EXPECT_DOUBLE_EQ(value(LegendreSpec::energy(2), vec({3, 4})), 12.5);
}

TEST(Value, ShannonAtOnes) {
  EXPECT_DOUBLE_EQ(value(LegendreSpec::shannon(2), vec({1, 1})), -2.0);
}

TEST(Value, ShannonOutsideDomainIsInfinite) {
  EXPECT_EQ(value(LegendreSpec::shannon(2), vec({-1, 1})), kInfinity);
}

TEST(Value, ShannonZeroLogZeroIsZero) {
  // 0 ln 0 - 0 + (2 ln 2 - 2)
  EXPECT_DOUBLE_EQ(value(LegendreSpec::shannon(2), vec({0, 2})),
                   2 * std::log(2.0) - 2);
}

TEST(Value, PPowerMatchesDefinition) {
  const auto f = LegendreSpec::ppower(3.0, 2);
  EXPECT_NEAR(value(f, vec({-2, 1})), (8.0 + 1.0) / 3.0, 1e-15);
}

TEST(Value, DimensionMismatchThrows) {
  EXPECT_THROW(value(LegendreSpec::energy(2), vec({1, 2, 3})), DimensionError);
}

TEST(Gradient, Examples) {
  EXPECT_EQ(gradient(LegendreSpec::energy(2), vec({3, 4})), vec({3, 4}));
  const Vector g = gradient(LegendreSpec::shannon(2), vec({1, kE}));
  EXPECT_NEAR(g[0], 0.0, 1e-15);
  EXPECT_NEAR(g[1], 1.0, 1e-15);
  EXPECT_NEAR(gradient(LegendreSpec::ppower(3.0, 1), vec({2}))[0], 4.0, 1e-14);
}

TEST(Gradient, DomainViolationNamesCoordinate) {
  try {
    gradient(LegendreSpec::shannon(3), vec({1, 2, 0}));
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_EQ(e.coordinate(), 2u);
    EXPECT_NE(std::string(e.what()).find("[2]"), std::string::npos) << e.what();
  }
}

TEST(Hessian, Examples) {
  EXPECT_EQ(hessian(LegendreSpec::energy(3), vec({1, -5, 2})),
            Matrix::Identity(3, 3));
  const Matrix hs = hessian(LegendreSpec::shannon(2), vec({2, 4}));
  EXPECT_DOUBLE_EQ(hs(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(hs(1, 1), 0.25);
  EXPECT_DOUBLE_EQ(hs(0, 1), 0.0);
  const Matrix hp = hessian(LegendreSpec::ppower(4.0, 2), vec({1, 2}));
  EXPECT_NEAR(hp(0, 0), 3.0, 1e-14);
  EXPECT_NEAR(hp(1, 1), 12.0, 1e-13);
}

TEST(Hessian, PPowerAtZeroCoordinate) {
  EXPECT_THROW(hessian(LegendreSpec::ppower(1.5, 2), vec({0, 1})),
               NotTwiceDifferentiableError);
  EXPECT_DOUBLE_EQ(hessian(LegendreSpec::ppower(2.0, 1), vec({0}))(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(hessian(LegendreSpec::ppower(3.0, 1), vec({0}))(0, 0), 0.0);
}

TEST(ConjugateValue, Examples) {
  EXPECT_DOUBLE_EQ(conjugate_value(LegendreSpec::energy(2), vec({3, 4})), 12.5);
  EXPECT_DOUBLE_EQ(conjugate_value(LegendreSpec::shannon(2), vec({0, 0})), 2.0);
  EXPECT_NEAR(conjugate_value(LegendreSpec::ppower(2.0, 1), vec({5})), 12.5,
              1e-13);
}

TEST(ConjugateValue, PPowerUsesDualExponent) {
  // p = 3 -> q = 1.5
  EXPECT_NEAR(conjugate_value(LegendreSpec::ppower(3.0, 1), vec({4})),
              std::pow(4.0, 1.5) / 1.5, 1e-13);
}

TEST(ConjugateGradient, Examples) {
  EXPECT_EQ(conjugate_gradient(LegendreSpec::energy(2), vec({1, -2})),
            vec({1, -2}));
  const Vector x = conjugate_gradient(LegendreSpec::shannon(2), vec({0, 1}));
  EXPECT_DOUBLE_EQ(x[0], 1.0);
  EXPECT_DOUBLE_EQ(x[1], kE);
}

TEST(ConjugateGradient, RoundTripAllCatalogMembers) {
  Sampler sampler(11);
  for (const auto& f :
       {LegendreSpec::energy(3), LegendreSpec::shannon(3),
        LegendreSpec::ppower(1.5, 3), LegendreSpec::ppower(2.0, 3),
        LegendreSpec::ppower(4.0, 3)}) {
    for (int i = 0; i < 100; ++i) {
      const Vector s = sampler.uniform_box(3, -5, 5);
      const Vector back = gradient(f, conjugate_gradient(f, s));
      EXPECT_LE((back - s).norm(), 1e-9 * (1 + s.norm())) << f.name();
    }
  }
}

TEST(Construction, PPowerRejectsSmallExponents) {
  EXPECT_THROW(LegendreSpec::ppower(1.0, 2), PreconditionError);
  EXPECT_THROW(LegendreSpec::ppower(0.5, 2), PreconditionError);
  EXPECT_NO_THROW(LegendreSpec::ppower(1.0001, 2));
}

TEST(Construction, NamesAndDomains) {
  EXPECT_EQ(LegendreSpec::energy(1).name(), "energy");
  EXPECT_EQ(LegendreSpec::shannon(1).name(), "shannon");
  const auto f = LegendreSpec::shannon(2);
  EXPECT_TRUE(f.in_domain(vec({1e-300, 5})));
  EXPECT_FALSE(f.in_domain(vec({0, 5})));
  EXPECT_TRUE(LegendreSpec::energy(2).in_domain(vec({-1e300, 1e300})));
}

TEST(Conjugate, CatalogMembersMapToDualMembers) {
  EXPECT_EQ(conjugate(LegendreSpec::energy(2)).kind(), LegendreKind::Energy);
  const auto q = conjugate(LegendreSpec::ppower(3.0, 2));
  ASSERT_EQ(q.kind(), LegendreKind::PPower);
  EXPECT_NEAR(q.p(), 1.5, 1e-15);
}

TEST(Conjugate, ShannonConjugateIsExponentialWithEntropyConjugate) {
  const auto g = conjugate(LegendreSpec::shannon(2));
  EXPECT_TRUE(g.in_domain(vec({-3, 3})));
  EXPECT_NEAR(value(g, vec({0, 1})), 1 + kE, 1e-14);
  // g* = f: t ln t - t
  EXPECT_NEAR(conjugate_value(g, vec({2, 0.5})),
              2 * std::log(2.0) - 2 + 0.5 * std::log(0.5) - 0.5, 1e-12);
  const Vector x = conjugate_gradient(g, vec({kE, 1}));
  EXPECT_NEAR(x[0], 1.0, 1e-14);
  EXPECT_NEAR(x[1], 0.0, 1e-14);
}

TEST(Separable, NumericInverseMatchesClosedForm) {
  const auto f = LegendreSpec::separable(cosh_scalar(), 2);
  for (double s : {-50.0, -3.0, -1e-9, 0.0, 0.7, 12.0, 1e4}) {
    const Vector x = conjugate_gradient(f, vec({s, -s}));
    EXPECT_NEAR(x[0], std::asinh(s), 1e-12 * (1 + std::abs(std::asinh(s))));
    EXPECT_NEAR(x[1], -std::asinh(s), 1e-12 * (1 + std::abs(std::asinh(s))));
    const double closed = s * std::asinh(s) - std::sqrt(1 + s * s);
    EXPECT_NEAR(conjugate_value(f, vec({s, s})), 2 * closed,
                1e-9 * (1 + std::abs(closed)));
  }
}

TEST(Separable, BracketExpandsTowardFiniteBound) {
  const ScalarLegendre phi = custom_entropy();
  for (double s : {-700.0, -30.0, -1.0, 0.0, 2.5, 40.0}) {
    const double t = invert_derivative(phi, s);
    EXPECT_NEAR(std::log(t), s, 1e-12 * (1 + std::abs(s)));
  }
}

TEST(Separable, ConjugateSpecNeedsOracles) {
  EXPECT_THROW(conjugate(LegendreSpec::separable(cosh_scalar(), 1)),
               ConjugateUnavailableError);
  const auto g = conjugate(LegendreSpec::separable(exponential_scalar(), 1));
  EXPECT_NEAR(gradient(g, vec({kE}))[0], 1.0, 1e-15);
}

TEST(Separable, MissingSecondDerivativeMeansNoHessian) {
  ScalarLegendre phi = cosh_scalar();
  phi.second_derivative = nullptr;
  EXPECT_THROW(hessian(LegendreSpec::separable(phi, 1), vec({0.3})),
               NotTwiceDifferentiableError);
}

TEST(FenchelYoung, EqualityAtGradientPairs) {
  Sampler sampler(5);
  const auto f = LegendreSpec::ppower(1.5, 4);
  for (int i = 0; i < 200; ++i) {
    const Vector x = sampler.uniform_box(4, -3, 3);
    const Vector g = gradient(f, x);
    const double fx = value(f, x);
    const double fs = conjugate_value(f, g);
    EXPECT_NEAR(fx + fs, g.dot(x), 1e-12 * (1 + std::abs(fx) + std::abs(fs)));
  }
}
