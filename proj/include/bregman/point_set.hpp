#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bregman/legendre.hpp"

namespace bregman {

/// Finite compact set C, stored as an ordered list of J-vectors.
///
/// Order only matters for tie-breaking: the witness of a farthest query is
/// the least index. Duplicates are allowed and reported in warnings().
class PointSet {
 public:
  /// Throws PointSetError when empty or ragged.
  explicit PointSet(std::vector<Vector> points);
  /// Additionally checks C subset of U for the given function.
  PointSet(std::vector<Vector> points, const LegendreSpec& f);

  std::size_t size() const { return points_.size(); }
  std::size_t dimension() const { return dimension_; }
  const Vector& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<Vector>& points() const { return points_; }
  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

  const std::vector<std::string>& warnings() const { return warnings_; }

  /// Index of the first point exactly equal to x.
  std::optional<std::size_t> index_of(const Vector& x) const;
  /// Throws PointSetError naming the first point outside U.
  void validate(const LegendreSpec& f) const;

 private:
  std::vector<Vector> points_;
  std::size_t dimension_ = 0;
  std::vector<std::string> warnings_;
};

}  // namespace bregman
