#pragma once

#include <string>

#include "crrr/ranks.hpp"
#include "crrr/types.hpp"

namespace crrr {

/// K x K discretization of the joint rank distribution. Rows index the v
/// (father) bin, columns the u (child) bin. Deviations are percentage points
/// of the joint cell share relative to the perfect-mobility benchmark 1/K^2:
/// 100 * (count/n - 1/K^2).
struct TransitionMatrix {
  int k = 0;
  Matrix counts;      // nonnegative integers stored as doubles
  Matrix deviations;
  RankKind kind = RankKind::marginal;
  Index n = 0;
};

/// Bin j = ceil(k * rank), clamped to [1, k]; boundary ranks fall in the
/// lower bin.
TransitionMatrix transition_matrix(const RankVector& u, const RankVector& v, int k);

/// K rows x K comma-separated columns of deviations.
std::string transition_to_csv(const TransitionMatrix& tm);

}  // namespace crrr
