#pragma once

#include "crrr/types.hpp"

namespace crrr {

/// Ordered quantile mesh at which the distribution regression is fit.
struct ThresholdGrid {
  Vector points;  // strictly increasing cut points
  Vector orders;  // matching quantile orders in (0,1)

  Index size() const { return points.size(); }
  double lo() const { return points[0]; }
  double hi() const { return points[points.size() - 1]; }
};

/// Empirical quantiles of `values` at `n_points` equally spaced orders from
/// lo_order to hi_order, deduplicated. The quantile of order p is the order
/// statistic at index ceil(p*n).
ThresholdGrid build_grid(const VectorRef& values, Index n_points, double lo_order,
                         double hi_order);

/// Grid on every distinct observed value, with mid-point orders (k-0.5)/n.
ThresholdGrid full_grid(const VectorRef& values);

}  // namespace crrr
