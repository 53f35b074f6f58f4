#include "bregman/legendre.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace bregman {

namespace {

constexpr int kInverseIterationCap = 200;

std::string format_bound(double b) {
  if (std::isinf(b)) return b > 0 ? "inf" : "-inf";
  std::ostringstream out;
  out << b;
  return out.str();
}

double sign(double t) { return (t > 0) - (t < 0); }

// Per-coordinate kernels phi, phi', phi'', phi*, (phi*)'.

double phi_value(const LegendreSpec& f, double t) {
  switch (f.kind()) {
    case LegendreKind::Energy:
      return 0.5 * t * t;
    case LegendreKind::Shannon:
      if (t > 0) return t * std::log(t) - t;
      if (t == 0) return 0.0;  // 0 ln 0 := 0
      return kInfinity;
    case LegendreKind::PPower:
      return std::pow(std::abs(t), f.p()) / f.p();
    case LegendreKind::SeparableCustom: {
      const auto& phi = *f.custom();
      if (!phi.domain.contains_closure(t)) return kInfinity;
      return phi.value(t);
    }
  }
  return kInfinity;
}

double phi_derivative(const LegendreSpec& f, double t) {
  switch (f.kind()) {
    case LegendreKind::Energy:
      return t;
    case LegendreKind::Shannon:
      return std::log(t);
    case LegendreKind::PPower:
      return sign(t) * std::pow(std::abs(t), f.p() - 1.0);
    case LegendreKind::SeparableCustom:
      return f.custom()->derivative(t);
  }
  return 0.0;
}

double phi_second_derivative(const LegendreSpec& f, double t) {
  switch (f.kind()) {
    case LegendreKind::Energy:
      return 1.0;
    case LegendreKind::Shannon:
      return 1.0 / t;
    case LegendreKind::PPower:
      if (t == 0) {
        if (f.p() < 2) {
          throw NotTwiceDifferentiableError(
              "|t|^p/p with p < 2 has no second derivative at 0");
        }
        return f.p() == 2 ? 1.0 : 0.0;
      }
      return (f.p() - 1.0) * std::pow(std::abs(t), f.p() - 2.0);
    case LegendreKind::SeparableCustom: {
      const auto& phi = *f.custom();
      if (!phi.second_derivative) {
        throw NotTwiceDifferentiableError("custom function '" + phi.name +
                                          "' has no second-derivative oracle");
      }
      return phi.second_derivative(t);
    }
  }
  return 0.0;
}

double phi_conjugate_value(const LegendreSpec& f, double s) {
  switch (f.kind()) {
    case LegendreKind::Energy:
      return 0.5 * s * s;
    case LegendreKind::Shannon:
      return std::exp(s);
    case LegendreKind::PPower:
      return std::pow(std::abs(s), f.q()) / f.q();
    case LegendreKind::SeparableCustom: {
      const auto& phi = *f.custom();
      if (phi.conjugate_value) return phi.conjugate_value(s);
      const double t = invert_derivative(phi, s);
      return s * t - phi.value(t);
    }
  }
  return kInfinity;
}

double phi_conjugate_derivative(const LegendreSpec& f, double s) {
  switch (f.kind()) {
    case LegendreKind::Energy:
      return s;
    case LegendreKind::Shannon:
      return std::exp(s);
    case LegendreKind::PPower:
      return sign(s) * std::pow(std::abs(s), f.q() - 1.0);
    case LegendreKind::SeparableCustom: {
      const auto& phi = *f.custom();
      if (phi.conjugate_derivative) return phi.conjugate_derivative(s);
      return invert_derivative(phi, s);
    }
  }
  return 0.0;
}

double entropy_kernel(double t) {
  if (t > 0) return t * std::log(t) - t;
  if (t == 0) return 0.0;
  return kInfinity;
}

}  // namespace

DimensionError::DimensionError(std::size_t expected, std::size_t actual)
    : Error("dimension mismatch: expected " + std::to_string(expected) +
            ", got " + std::to_string(actual)) {}

DomainError::DomainError(std::string argument, std::size_t coordinate,
                         double value, double lower, double upper)
    : Error([&] {
        std::ostringstream out;
        out << argument << "[" << coordinate << "] = " << value
            << " lies outside the open interval (" << format_bound(lower)
            << ", " << format_bound(upper) << ")";
        return out.str();
      }()),
      coordinate_(coordinate) {}

DomainDescriptor::DomainDescriptor(std::size_t dimension, Interval coordinate)
    : coordinates_(dimension, coordinate) {}

DomainDescriptor::DomainDescriptor(std::vector<Interval> coordinates)
    : coordinates_(std::move(coordinates)) {}

bool DomainDescriptor::contains(const Vector& x) const {
  return !first_violation(x).has_value();
}

std::optional<std::size_t> DomainDescriptor::first_violation(
    const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != coordinates_.size()) {
    throw DimensionError(coordinates_.size(), x.size());
  }
  for (std::size_t j = 0; j < coordinates_.size(); ++j) {
    if (!coordinates_[j].contains(x[j])) return j;
  }
  return std::nullopt;
}

ScalarLegendre exponential_scalar() {
  ScalarLegendre phi;
  phi.name = "exp";
  phi.domain = Interval{};
  phi.value = [](double t) { return std::exp(t); };
  phi.derivative = [](double t) { return std::exp(t); };
  phi.second_derivative = [](double t) { return std::exp(t); };
  phi.conjugate_value = entropy_kernel;
  phi.conjugate_derivative = [](double s) { return std::log(s); };
  return phi;
}

LegendreSpec::LegendreSpec(LegendreKind kind, std::size_t dimension,
                           Interval coordinate)
    : kind_(kind), domain_(dimension, coordinate) {
  if (dimension == 0) {
    throw PreconditionError("dimension must be a positive integer");
  }
}

LegendreSpec LegendreSpec::energy(std::size_t dimension) {
  LegendreSpec f(LegendreKind::Energy, dimension, Interval{});
  f.p_ = 2.0;
  f.q_ = 2.0;
  return f;
}

LegendreSpec LegendreSpec::shannon(std::size_t dimension) {
  return LegendreSpec(LegendreKind::Shannon, dimension,
                      Interval{0.0, kInfinity});
}

LegendreSpec LegendreSpec::ppower(double p, std::size_t dimension) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw PreconditionError("ppower requires a finite exponent p > 1");
  }
  LegendreSpec f(LegendreKind::PPower, dimension, Interval{});
  f.p_ = p;
  f.q_ = p / (p - 1.0);
  return f;
}

LegendreSpec LegendreSpec::separable(ScalarLegendre phi,
                                     std::size_t dimension) {
  if (!phi.value || !phi.derivative) {
    throw PreconditionError("custom function needs value and derivative");
  }
  if (!(phi.domain.lower < phi.domain.upper)) {
    throw PreconditionError("custom function has an empty domain");
  }
  LegendreSpec f(LegendreKind::SeparableCustom, dimension, phi.domain);
  f.custom_ = std::make_shared<const ScalarLegendre>(std::move(phi));
  return f;
}

std::string LegendreSpec::name() const {
  switch (kind_) {
    case LegendreKind::Energy:
      return "energy";
    case LegendreKind::Shannon:
      return "shannon";
    case LegendreKind::PPower: {
      std::ostringstream out;
      out << "ppower(" << p_ << ")";
      return out.str();
    }
    case LegendreKind::SeparableCustom:
      return custom_->name.empty() ? "custom" : custom_->name;
  }
  return "unknown";
}

void require_dimension(const LegendreSpec& f, const Vector& x) {
  if (static_cast<std::size_t>(x.size()) != f.dimension()) {
    throw DimensionError(f.dimension(), x.size());
  }
}

void require_interior(const LegendreSpec& f, const Vector& x,
                      std::string_view argument) {
  require_dimension(f, x);
  if (auto j = f.domain().first_violation(x)) {
    const auto& bounds = f.domain()[*j];
    throw DomainError(std::string(argument), *j, x[*j], bounds.lower,
                      bounds.upper);
  }
}

double value(const LegendreSpec& f, const Vector& x) {
  require_dimension(f, x);
  double sum = 0.0;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double v = phi_value(f, x[j]);
    if (v == kInfinity) return kInfinity;
    sum += v;
  }
  return sum;
}

Vector gradient(const LegendreSpec& f, const Vector& x) {
  require_interior(f, x);
  Vector g(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) g[j] = phi_derivative(f, x[j]);
  return g;
}

Matrix hessian(const LegendreSpec& f, const Vector& x) {
  require_interior(f, x);
  Matrix h = Matrix::Zero(x.size(), x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    h(j, j) = phi_second_derivative(f, x[j]);
  }
  return h;
}

double conjugate_value(const LegendreSpec& f, const Vector& s) {
  require_dimension(f, s);
  double sum = 0.0;
  for (Eigen::Index j = 0; j < s.size(); ++j) {
    sum += phi_conjugate_value(f, s[j]);
  }
  return sum;
}

Vector conjugate_gradient(const LegendreSpec& f, const Vector& s) {
  require_dimension(f, s);
  Vector x(s.size());
  for (Eigen::Index j = 0; j < s.size(); ++j) {
    x[j] = phi_conjugate_derivative(f, s[j]);
  }
  return x;
}

LegendreSpec conjugate(const LegendreSpec& f) {
  switch (f.kind()) {
    case LegendreKind::Energy:
      return LegendreSpec::energy(f.dimension());
    case LegendreKind::PPower:
      return LegendreSpec::ppower(f.q(), f.dimension());
    case LegendreKind::Shannon:
      return LegendreSpec::separable(exponential_scalar(), f.dimension());
    case LegendreKind::SeparableCustom: {
      const auto& phi = *f.custom();
      if (!phi.conjugate_value || !phi.conjugate_derivative) {
        throw ConjugateUnavailableError(
            "custom function '" + phi.name + "' has no conjugate oracle");
      }
      ScalarLegendre dual;
      dual.name = phi.name + "*";
      dual.domain = Interval{};  // supercoercive phi: dom phi* = R
      dual.value = phi.conjugate_value;
      dual.derivative = phi.conjugate_derivative;
      if (phi.second_derivative) {
        // (phi*)''(s) = 1 / phi''((phi*)'(s))
        dual.second_derivative = [phi](double s) {
          return 1.0 / phi.second_derivative(phi.conjugate_derivative(s));
        };
      }
      dual.conjugate_value = [phi](double t) {
        if (!phi.domain.contains_closure(t)) return kInfinity;
        return phi.value(t);
      };
      dual.conjugate_derivative = phi.derivative;
      return LegendreSpec::separable(std::move(dual), f.dimension());
    }
  }
  throw ConjugateUnavailableError("unknown Legendre kind");
}

double invert_derivative(const ScalarLegendre& phi, double s) {
  const Interval& dom = phi.domain;
  const double tolerance = 1e-12 * (1.0 + std::abs(s));
  const bool lower_finite = std::isfinite(dom.lower);
  const bool upper_finite = std::isfinite(dom.upper);

  double t = 0.0;
  if (lower_finite && upper_finite) {
    t = 0.5 * (dom.lower + dom.upper);
  } else if (lower_finite) {
    t = dom.lower + 1.0;
  } else if (upper_finite) {
    t = dom.upper - 1.0;
  }

  int iterations = 0;
  double residual = phi.derivative(t) - s;
  if (std::abs(residual) <= tolerance) return t;

  // Roots may sit many orders of magnitude from a finite bound (exp(-700)
  // for the entropy kernel), so the approach toward a bound is geometric:
  // the gap shrinks by 2^-step with step doubling, and the bisection below
  // splits wide brackets at the geometric mean of the gaps.
  auto midpoint = [&](double lo, double hi) {
    if (lower_finite) {
      const double near = lo - dom.lower;
      const double far = hi - dom.lower;
      if (near > 0 && far > 4.0 * near) return dom.lower + std::sqrt(near) * std::sqrt(far);
    }
    if (upper_finite) {
      const double near = dom.upper - hi;
      const double far = dom.upper - lo;
      if (near > 0 && far > 4.0 * near) return dom.upper - std::sqrt(near) * std::sqrt(far);
    }
    return 0.5 * (lo + hi);
  };

  // Bracket [a, b] with phi'(a) < s < phi'(b).
  double a = dom.lower;
  double b = dom.upper;
  double step = 1.0;
  double probe = t;
  double probe_residual = residual;
  while (true) {
    if (++iterations > kInverseIterationCap) {
      throw ConvergenceError("bracket expansion for the inverse of phi' of '" +
                             phi.name + "' did not converge");
    }
    if (probe_residual < 0) {
      a = probe;
      if (b < dom.upper) break;
      probe = upper_finite ? dom.upper - (dom.upper - probe) * std::ldexp(1.0, -static_cast<int>(step))
                           : probe + step;
    } else {
      b = probe;
      if (a > dom.lower) break;
      probe = lower_finite ? dom.lower + (probe - dom.lower) * std::ldexp(1.0, -static_cast<int>(step))
                           : probe - step;
    }
    step *= 2.0;
    probe_residual = phi.derivative(probe) - s;
    if (std::abs(probe_residual) <= tolerance) return probe;
  }

  t = midpoint(a, b);
  while (iterations++ < kInverseIterationCap) {
    residual = phi.derivative(t) - s;
    if (std::abs(residual) <= tolerance) return t;
    if (residual < 0) {
      a = t;
    } else {
      b = t;
    }
    const double mid = midpoint(a, b);
    if (mid <= a || mid >= b) return t;  // bracket is a single ulp
    double next = mid;
    if (phi.second_derivative) {
      const double slope = phi.second_derivative(t);
      const double newton = t - residual / slope;
      if (std::isfinite(newton) && newton > a && newton < b) next = newton;
    }
    t = next;
  }
  throw ConvergenceError("inverse of phi' of '" + phi.name +
                         "' did not converge within 200 iterations");
}

}  // namespace bregman
