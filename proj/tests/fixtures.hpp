#pragma once

#include <array>

#include "crrr/types.hpp"

namespace fixtures {

// 20-observation two-group example. Within each group (y, w) come from a
// bivariate normal with correlation 0.6 and the group-1 w distribution
// shifted down by 12. Values carry small deterministic offsets so they are
// tie-free; the expected rank columns are exact.
inline constexpr std::array<double, 20> kX = {0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
                                              1, 1, 1, 1, 1, 1, 1, 1, 1, 1};

inline constexpr std::array<double, 20> kY = {
    162.04, 162.05, 164.06, 164.07, 164.09, 165.12, 165.14, 165.15, 168.17, 171.20,
    156.01, 157.02, 162.03, 164.08, 164.10, 165.11, 165.13, 167.16, 168.18, 170.19};

inline constexpr std::array<double, 20> kW = {
    173.11, 176.14, 182.20, 174.12, 177.16, 177.15, 175.13, 179.18, 181.19, 178.17,
    160.01, 169.07, 163.02, 165.05, 164.04, 164.03, 171.10, 170.08, 167.06, 170.09};

// Conditional (within-group) ranks, percent / 100.
inline constexpr std::array<double, 20> kU = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0,
                                              0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
inline constexpr std::array<double, 20> kV = {0.1, 0.4, 1.0, 0.2, 0.6, 0.5, 0.3, 0.8, 0.9, 0.7,
                                              0.1, 0.7, 0.2, 0.5, 0.4, 0.3, 1.0, 0.8, 0.6, 0.9};

// Marginal (pooled) ranks.
inline constexpr std::array<double, 20> kUMarg = {0.20, 0.25, 0.30, 0.35, 0.45, 0.60, 0.70,
                                                  0.75, 0.85, 1.00, 0.05, 0.10, 0.15, 0.40,
                                                  0.50, 0.55, 0.65, 0.80, 0.90, 0.95};
inline constexpr std::array<double, 20> kVMarg = {0.55, 0.70, 1.00, 0.60, 0.80, 0.75, 0.65,
                                                  0.90, 0.95, 0.85, 0.05, 0.35, 0.10, 0.25,
                                                  0.20, 0.15, 0.50, 0.40, 0.30, 0.45};

// The same observations rounded to whole units, which introduces ties.
inline constexpr std::array<double, 20> kYRounded = {162, 162, 164, 164, 164, 165, 165,
                                                     165, 168, 171, 156, 157, 162, 164,
                                                     164, 165, 165, 167, 168, 170};

inline crrr::Dataset table3_dataset() {
  crrr::Dataset data;
  const crrr::Index n = 20;
  data.y.resize(n);
  data.w.resize(n);
  data.x.resize(n, 2);
  data.x.col(0).setOnes();
  data.covariate_names = {"(intercept)", "x"};
  data.group.resize(20);
  for (crrr::Index i = 0; i < n; ++i) {
    data.y[i] = kY[static_cast<std::size_t>(i)];
    data.w[i] = kW[static_cast<std::size_t>(i)];
    data.x(i, 1) = kX[static_cast<std::size_t>(i)];
    data.group[static_cast<std::size_t>(i)] = kX[static_cast<std::size_t>(i)] == 0 ? "0" : "1";
  }
  return data;
}

}  // namespace fixtures
