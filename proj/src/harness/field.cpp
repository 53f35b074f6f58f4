#include "bregman/harness/field.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "bregman/harness/io.hpp"

namespace bregman::harness {

std::size_t GridSpec::node_count() const {
  std::size_t count = 1;
  for (std::size_t n : resolution) count *= n;
  return count;
}

Vector GridSpec::node(std::size_t index) const {
  Vector x(static_cast<Eigen::Index>(dimension()));
  for (std::size_t j = 0; j < dimension(); ++j) {
    const std::size_t n = resolution[j];
    const std::size_t k = index % n;
    index /= n;
    const double width = upper[j] - lower[j];
    const double lo = lower[j] + margin * width;
    const double hi = upper[j] - margin * width;
    x[j] = n == 1 ? 0.5 * (lo + hi)
                  : lo + (hi - lo) * static_cast<double>(k) /
                             static_cast<double>(n - 1);
  }
  return x;
}

void GridSpec::validate(const LegendreSpec& f) const {
  const std::size_t dim = dimension();
  if (dim != f.dimension() || static_cast<std::size_t>(lower.size()) != dim ||
      static_cast<std::size_t>(upper.size()) != dim) {
    throw DimensionError(f.dimension(), dim);
  }
  if (!(margin >= 0.0 && margin < 0.5)) {
    throw PreconditionError("grid margin must lie in [0, 0.5)");
  }
  for (std::size_t j = 0; j < dim; ++j) {
    if (!(lower[j] < upper[j])) {
      throw PreconditionError("grid needs lower < upper on axis " +
                              std::to_string(j));
    }
    if (resolution[j] == 0) {
      throw PreconditionError("grid resolution must be positive");
    }
  }
  Vector lo(static_cast<Eigen::Index>(dim));
  Vector hi(static_cast<Eigen::Index>(dim));
  for (std::size_t j = 0; j < dim; ++j) {
    const double width = upper[j] - lower[j];
    lo[j] = lower[j] + margin * width;
    hi[j] = upper[j] - margin * width;
  }
  require_interior(f, lo, "grid lower corner");
  require_interior(f, hi, "grid upper corner");
}

std::vector<FieldNode> rasterize_field(const LegendreSpec& f,
                                       const PointSet& C, const GridSpec& grid,
                                       double tie_tolerance) {
  grid.validate(f);
  std::vector<FieldNode> nodes(grid.node_count());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    FieldNode& node = nodes[i];
    node.index = i;
    node.point = grid.node(i);
    const FarthestResult far = left_farthest(f, C, node.point, tie_tolerance);
    node.value = far.value;
    node.witness = far.witness;
    node.argmax_count = far.argmax_indices.size();
  }
  return nodes;
}

void write_field_csv(std::ostream& out, const std::vector<FieldNode>& nodes,
                     std::size_t dimension) {
  CsvWriter csv(out);
  std::vector<std::string> header{"node"};
  for (std::size_t j = 0; j < dimension; ++j) {
    header.push_back("x" + std::to_string(j));
  }
  header.insert(header.end(), {"value", "witness", "tie", "argmax_count"});
  csv.row(header);
  for (const auto& node : nodes) {
    std::vector<std::string> row{std::to_string(node.index)};
    for (std::size_t j = 0; j < dimension; ++j) {
      row.push_back(format_real(node.point[j]));
    }
    row.push_back(format_real(node.value));
    row.push_back(std::to_string(node.witness));
    row.push_back(node.tie() ? "1" : "0");
    row.push_back(std::to_string(node.argmax_count));
    csv.row(row);
  }
}

std::vector<std::uint8_t> label_image(const GridSpec& grid,
                                      const std::vector<FieldNode>& nodes,
                                      std::size_t label_count) {
  if (grid.dimension() != 2) {
    throw PreconditionError("label images are only produced for J = 2");
  }
  const std::size_t width = grid.resolution[0];
  const std::size_t height = grid.resolution[1];
  std::vector<std::uint8_t> pixels(width * height, 0);
  for (const auto& node : nodes) {
    const std::size_t col = node.index % width;
    const std::size_t row = height - 1 - node.index / width;
    const double level =
        label_count > 1 ? 255.0 * static_cast<double>(node.witness) /
                              static_cast<double>(label_count - 1)
                        : 0.0;
    pixels[row * width + col] = static_cast<std::uint8_t>(std::lround(level));
  }
  return pixels;
}

}  // namespace bregman::harness
