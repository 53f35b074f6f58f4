#include "bregman/point_set.hpp"

#include <sstream>
#include <utility>

namespace bregman {

PointSet::PointSet(std::vector<Vector> points) : points_(std::move(points)) {
  if (points_.empty()) {
    throw PointSetError(
        "point set is empty; C must be a nonempty bounded closed subset of "
        "int dom f");
  }
  dimension_ = static_cast<std::size_t>(points_.front().size());
  if (dimension_ == 0) throw PointSetError("points must have dimension >= 1");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (static_cast<std::size_t>(points_[i].size()) != dimension_) {
      throw PointSetError("point " + std::to_string(i) + " has dimension " +
                          std::to_string(points_[i].size()) + ", expected " +
                          std::to_string(dimension_));
    }
    if (!points_[i].allFinite()) {
      throw PointSetError("point " + std::to_string(i) +
                          " has a non-finite coordinate");
    }
  }
  for (std::size_t i = 1; i < points_.size(); ++i) {
    for (std::size_t k = 0; k < i; ++k) {
      if (points_[i] == points_[k]) {
        warnings_.push_back("point " + std::to_string(i) +
                            " duplicates point " + std::to_string(k));
        break;
      }
    }
  }
}

PointSet::PointSet(std::vector<Vector> points, const LegendreSpec& f)
    : PointSet(std::move(points)) {
  validate(f);
}

std::optional<std::size_t> PointSet::index_of(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != dimension_) return std::nullopt;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i] == x) return i;
  }
  return std::nullopt;
}

void PointSet::validate(const LegendreSpec& f) const {
  if (f.dimension() != dimension_) {
    throw DimensionError(f.dimension(), dimension_);
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (auto j = f.domain().first_violation(points_[i])) {
      std::ostringstream out;
      out << "point " << i << " coordinate " << *j << " = "
          << points_[i][*j] << " is outside int dom f of " << f.name()
          << "; C must be a nonempty bounded closed subset of int dom f";
      throw PointSetError(out.str());
    }
  }
}

}  // namespace bregman
