#include "crrr/ranks.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace crrr {

RankVector marginal_ranks(const VectorRef& values, Variable source) {
  const Index n = values.size();
  if (n < 2) throw DegenerateData("marginal_ranks needs at least 2 observations");
  std::vector<double> sorted(values.data(), values.data() + n);
  std::sort(sorted.begin(), sorted.end());

  RankVector out;
  out.values.resize(n);
  out.kind = RankKind::marginal;
  out.source = source;
  for (Index i = 0; i < n; ++i) {
    const auto count = std::upper_bound(sorted.begin(), sorted.end(), values[i]) - sorted.begin();
    out.values[i] = static_cast<double>(count) / static_cast<double>(n);
  }
  return out;
}

RankVector weighted_marginal_ranks(const VectorRef& values, const VectorRef& weights,
                                   Variable source) {
  const Index n = values.size();
  if (n < 2) throw DegenerateData("weighted_marginal_ranks needs at least 2 observations");
  if (weights.size() != n) throw InputMismatch("weighted_marginal_ranks: weights length");

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) { return values[a] < values[b]; });

  std::vector<double> sorted_vals(static_cast<std::size_t>(n));
  std::vector<double> prefix(static_cast<std::size_t>(n) + 1, 0.0);
  for (Index k = 0; k < n; ++k) {
    sorted_vals[static_cast<std::size_t>(k)] = values[order[static_cast<std::size_t>(k)]];
    prefix[static_cast<std::size_t>(k) + 1] =
        prefix[static_cast<std::size_t>(k)] + weights[order[static_cast<std::size_t>(k)]];
  }

  RankVector out;
  out.values.resize(n);
  out.kind = RankKind::marginal;
  out.source = source;
  for (Index i = 0; i < n; ++i) {
    const auto count =
        std::upper_bound(sorted_vals.begin(), sorted_vals.end(), values[i]) - sorted_vals.begin();
    out.values[i] = prefix[static_cast<std::size_t>(count)] / static_cast<double>(n);
  }
  return out;
}

RankVector conditional_ranks(const DrFit& fit, const Dataset& data) {
  if (data.dim() != fit.dim()) {
    throw InputMismatch("conditional_ranks: dataset covariates do not match the fit");
  }
  const Vector& values = fit.variable == Variable::y ? data.y : data.w;
  RankVector out;
  out.values = predict_cdf_rows(fit, data.x, values);
  out.kind = RankKind::conditional;
  out.source = fit.variable;
  out.covariate_sig = fit.covariate_sig;
  return out;
}

}  // namespace crrr
