#pragma once

#include "crrr/dr.hpp"
#include "crrr/types.hpp"

namespace crrr {

/// Per-observation ranks in (0,1], in the row order of the source data.
struct RankVector {
  Vector values;
  RankKind kind = RankKind::marginal;
  Variable source = Variable::y;
  std::uint64_t covariate_sig = 0;  // 0 for marginal ranks

  Index n() const { return values.size(); }
};

/// Right-continuous empirical CDF evaluated at each observation:
/// entry i = #{j : values[j] <= values[i]} / n (max-rank under ties).
RankVector marginal_ranks(const VectorRef& values, Variable source = Variable::y);

/// Weighted empirical CDF: entry i = sum_j w_j 1(values[j] <= values[i]) / n.
/// Unit weights reproduce marginal_ranks bit for bit.
RankVector weighted_marginal_ranks(const VectorRef& values, const VectorRef& weights,
                                   Variable source = Variable::y);

/// Plug-in conditional ranks: entry i = predict_cdf(fit, x_i, r_i).
RankVector conditional_ranks(const DrFit& fit, const Dataset& data);

}  // namespace crrr
