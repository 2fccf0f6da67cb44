#include "crrr/grid.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace crrr {

namespace {

std::vector<double> sorted_values(const VectorRef& values) {
  std::vector<double> v(values.data(), values.data() + values.size());
  std::sort(v.begin(), v.end());
  return v;
}

Index count_distinct(const std::vector<double>& sorted) {
  Index distinct = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i == 0 || sorted[i] != sorted[i - 1]) ++distinct;
  }
  return distinct;
}

}  // namespace

ThresholdGrid build_grid(const VectorRef& values, Index n_points, double lo_order,
                         double hi_order) {
  if (n_points < 2) throw ConfigError("grid needs at least 2 points");
  if (!(lo_order > 0.0 && hi_order < 1.0 && lo_order < hi_order)) {
    throw ConfigError("grid orders must satisfy 0 < lo < hi < 1");
  }
  const Index n = values.size();
  const auto sorted = sorted_values(values);
  if (count_distinct(sorted) < n_points) {
    throw DegenerateData("too few distinct values to build a " + std::to_string(n_points) +
                         "-point grid");
  }

  std::vector<double> pts, ords;
  pts.reserve(n_points);
  ords.reserve(n_points);
  for (Index j = 0; j < n_points; ++j) {
    const double order =
        lo_order + (hi_order - lo_order) * static_cast<double>(j) / static_cast<double>(n_points - 1);
    Index idx = static_cast<Index>(std::ceil(order * static_cast<double>(n)));
    idx = std::max<Index>(1, std::min(idx, n));
    const double point = sorted[static_cast<std::size_t>(idx - 1)];
    if (pts.empty() || point > pts.back()) {
      pts.push_back(point);
      ords.push_back(order);
    }
  }
  if (pts.size() < 2) throw DegenerateData("grid collapsed to fewer than 2 distinct points");

  ThresholdGrid grid;
  grid.points = Eigen::Map<const Vector>(pts.data(), static_cast<Index>(pts.size()));
  grid.orders = Eigen::Map<const Vector>(ords.data(), static_cast<Index>(ords.size()));
  return grid;
}

ThresholdGrid full_grid(const VectorRef& values) {
  const Index n = values.size();
  const auto sorted = sorted_values(values);
  std::vector<double> pts, ords;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i == 0 || sorted[i] != sorted[i - 1]) {
      pts.push_back(sorted[i]);
      ords.push_back((static_cast<double>(i) + 0.5) / static_cast<double>(n));
    }
  }
  if (pts.size() < 2) throw DegenerateData("need at least 2 distinct values for a full grid");

  ThresholdGrid grid;
  grid.points = Eigen::Map<const Vector>(pts.data(), static_cast<Index>(pts.size()));
  grid.orders = Eigen::Map<const Vector>(ords.data(), static_cast<Index>(ords.size()));
  return grid;
}

}  // namespace crrr
