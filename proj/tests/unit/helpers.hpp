#pragma once

#include <initializer_list>
#include <vector>

#include "bregman/point_set.hpp"

namespace testing_support {

inline bregman::Vector vec(std::initializer_list<double> values) {
  bregman::Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index j = 0;
  for (double x : values) v[j++] = x;
  return v;
}

inline std::vector<bregman::Vector> points(
    std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<bregman::Vector> out;
  for (auto row : rows) out.push_back(vec(row));
  return out;
}

}  // namespace testing_support
