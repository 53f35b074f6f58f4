#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bregman/errors.hpp"

namespace bregman {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Open interval (lower, upper); either end may be infinite.
struct Interval {
  double lower = -kInfinity;
  double upper = kInfinity;

  bool contains(double t) const { return lower < t && t < upper; }
  bool contains_closure(double t) const { return lower <= t && t <= upper; }
};

/// U = int dom f, described as a product of open intervals.
/// Membership is strict on every coordinate; no epsilon is applied.
class DomainDescriptor {
 public:
  DomainDescriptor(std::size_t dimension, Interval coordinate);
  explicit DomainDescriptor(std::vector<Interval> coordinates);

  std::size_t dimension() const { return coordinates_.size(); }
  const Interval& operator[](std::size_t j) const { return coordinates_[j]; }

  bool contains(const Vector& x) const;
  /// Index of the first coordinate of x that is not strictly inside U.
  std::optional<std::size_t> first_violation(const Vector& x) const;

 private:
  std::vector<Interval> coordinates_;
};

/// One-dimensional Legendre oracle phi for separable f(x) = sum_j phi(x_j).
///
/// `value` is consulted on the closure of `domain`; outside of it the value
/// is +inf without calling the oracle. `derivative` must be continuous and
/// strictly increasing on `domain` with range all of R. The remaining
/// oracles are optional: without `second_derivative` the Hessian is
/// unavailable; without the conjugate pair, phi* and (phi*)' are obtained
/// from a numeric inverse of phi', and the conjugate spec cannot be formed.
struct ScalarLegendre {
  std::string name;
  Interval domain;
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  std::function<double(double)> second_derivative;
  std::function<double(double)> conjugate_value;
  std::function<double(double)> conjugate_derivative;
};

/// phi(t) = exp(t), the conjugate of the Boltzmann-Shannon entropy kernel.
ScalarLegendre exponential_scalar();

enum class LegendreKind { Energy, Shannon, PPower, SeparableCustom };

/// A member of the Legendre catalog: an essentially smooth, essentially
/// strictly convex, supercoercive separable function on R^J.
class LegendreSpec {
 public:
  static LegendreSpec energy(std::size_t dimension);
  static LegendreSpec shannon(std::size_t dimension);
  /// f(x) = sum |x_j|^p / p; rejects p <= 1.
  static LegendreSpec ppower(double p, std::size_t dimension);
  static LegendreSpec separable(ScalarLegendre phi, std::size_t dimension);

  LegendreKind kind() const { return kind_; }
  std::size_t dimension() const { return domain_.dimension(); }
  /// Exponent of PPower, 2 for Energy, NaN otherwise.
  double p() const { return p_; }
  /// Conjugate exponent q with 1/p + 1/q = 1.
  double q() const { return q_; }
  const DomainDescriptor& domain() const { return domain_; }
  const ScalarLegendre* custom() const { return custom_.get(); }
  std::string name() const;

  bool in_domain(const Vector& x) const { return domain_.contains(x); }

 private:
  LegendreSpec(LegendreKind kind, std::size_t dimension, Interval coordinate);

  LegendreKind kind_;
  DomainDescriptor domain_;
  double p_ = std::numeric_limits<double>::quiet_NaN();
  double q_ = std::numeric_limits<double>::quiet_NaN();
  std::shared_ptr<const ScalarLegendre> custom_;
};

/// Throws DimensionError unless x has the dimension of f.
void require_dimension(const LegendreSpec& f, const Vector& x);
/// Throws DomainError naming `argument` and the first offending coordinate.
void require_interior(const LegendreSpec& f, const Vector& x,
                      std::string_view argument = "x");

/// f(x); +inf outside dom f.
double value(const LegendreSpec& f, const Vector& x);
Vector gradient(const LegendreSpec& f, const Vector& x);
/// Diagonal Hessian for the separable catalog.
Matrix hessian(const LegendreSpec& f, const Vector& x);
double conjugate_value(const LegendreSpec& f, const Vector& s);
/// grad f*(s), the inverse of grad f; always lands in U.
Vector conjugate_gradient(const LegendreSpec& f, const Vector& s);

/// f* as a catalog member. Energy and PPower map into themselves; Shannon
/// maps to the separable exponential. Custom members need both conjugate
/// oracles, otherwise ConjugateUnavailableError.
LegendreSpec conjugate(const LegendreSpec& f);

/// Solves phi'(t) = s on int dom phi by bracket expansion from an interior
/// seed followed by bisection with Newton acceleration.
/// Stops when |phi'(t) - s| <= 1e-12 (1 + |s|); ConvergenceError after 200
/// iterations.
double invert_derivative(const ScalarLegendre& phi, double s);

}  // namespace bregman
