#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "bregman/farthest.hpp"

namespace bregman::harness {

/// Rectangular grid. The box is shrunk toward its center by `margin` times
/// its width on each side before nodes are placed; node index runs with
/// axis 0 fastest.
struct GridSpec {
  Vector lower;
  Vector upper;
  std::vector<std::size_t> resolution;
  double margin = 1e-3;

  std::size_t dimension() const { return resolution.size(); }
  std::size_t node_count() const;
  Vector node(std::size_t index) const;
  /// Throws PreconditionError for malformed boxes and DomainError when a
  /// shrunk corner is outside U (the box is a product of intervals and U is
  /// convex, so the corners decide).
  void validate(const LegendreSpec& f) const;
};

struct FieldNode {
  std::size_t index = 0;
  Vector point;
  double value = 0.0;
  std::size_t witness = 0;
  std::size_t argmax_count = 0;

  bool tie() const { return argmax_count >= 2; }
};

std::vector<FieldNode> rasterize_field(const LegendreSpec& f,
                                       const PointSet& C, const GridSpec& grid,
                                       double tie_tolerance);

/// Columns: node, x0..x{J-1}, value, witness, tie, argmax_count.
void write_field_csv(std::ostream& out, const std::vector<FieldNode>& nodes,
                     std::size_t dimension);

/// Gray level of each witness spread over 0..255; top row is the largest
/// x1. Only defined for J = 2.
std::vector<std::uint8_t> label_image(const GridSpec& grid,
                                      const std::vector<FieldNode>& nodes,
                                      std::size_t label_count);

}  // namespace bregman::harness
