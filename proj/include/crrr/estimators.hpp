#pragma once

#include <vector>

#include "crrr/ranks.hpp"
#include "crrr/types.hpp"

namespace crrr {

// ---------------------------------------------------------------------------
// Weighted kernels. Weights are nonnegative; every formula is either invariant
// to the overall weight scale or normalizes by sum(w), so mean-1 bootstrap
// weights and plain unit weights are both valid inputs.
// ---------------------------------------------------------------------------

double weighted_mean(const VectorRef& x, const VectorRef& w);

/// Weighted Pearson correlation, clamped to [-1, 1].
double pearson_corr(const VectorRef& u, const VectorRef& v, const VectorRef& w);

/// Correlation with both vectors centered at 0.5 instead of their means.
double restricted_corr_value(const VectorRef& u, const VectorRef& v, const VectorRef& w);

/// 12 * sum w (u-.5)(v-.5) / sum w. May fall outside [-1, 1].
double fully_restricted_value(const VectorRef& u, const VectorRef& v, const VectorRef& w);

struct RegressionSlopeValues {
  double unrestricted;        // sum w u (v - vbar) / sum w (v - vbar)^2
  double restricted;          // sum w (u-.5)(v-.5) / sum w (v-.5)^2
  double reverse_restricted;  // sum w (u-.5)(v-.5) / sum w (u-.5)^2
};
RegressionSlopeValues regression_slope_values(const VectorRef& u, const VectorRef& v,
                                              const VectorRef& w);

/// Slope on v in the weighted least-squares fit of u on (1, v).
double ols_slope(const VectorRef& u, const VectorRef& v, const VectorRef& w);

/// Weighted least squares coefficients; throws DegenerateData on rank
/// deficiency.
Vector wls(const MatrixRef& design, const VectorRef& response, const VectorRef& w);

/// Weighted value of a rank-pair method (everything except the rrrx pair,
/// which needs covariates). For Method::rrr this is the Pearson correlation.
double method_value(Method method, const VectorRef& u, const VectorRef& v, const VectorRef& w);

/// Subsample estimator used in subgroup analysis: Method::rrr maps to the
/// regression slope of u on v (which can leave [-1,1]), everything else to
/// method_value on the subsample.
double subgroup_method_value(Method method, const VectorRef& u, const VectorRef& v,
                             const VectorRef& w);

// ---------------------------------------------------------------------------
// Estimator operations on rank vectors.
// ---------------------------------------------------------------------------

/// Sample correlation of two rank vectors; method tag is rrr when both inputs
/// are marginal ranks, crrr_corr otherwise.
SlopeEstimate pearson_slope_corr(const RankVector& u, const RankVector& v);

SlopeEstimate restricted_corr(const RankVector& u, const RankVector& v);

SlopeEstimate fully_restricted(const RankVector& u, const RankVector& v);

struct RegressionEstimates {
  SlopeEstimate unrestricted;
  SlopeEstimate restricted;
  SlopeEstimate reverse_restricted;
};
RegressionEstimates regression_slopes(const RankVector& u, const RankVector& v);

/// Slope on v in the regression of u on (1, v, covariates).
SlopeEstimate rrrx_additive(const RankVector& u_marg, const RankVector& v_marg,
                            const MatrixRef& covariates);

/// Slope on v with covariates centered at their (weighted) means and
/// interacted with v.
SlopeEstimate rrrx_interacted(const RankVector& u_marg, const RankVector& v_marg,
                              const MatrixRef& covariates);

inline constexpr Index kMinGroupSize = 30;

/// Chosen estimator applied to the subsample of each group label (labels in
/// sorted order). Groups smaller than min_group throw GroupTooSmall.
std::vector<SlopeEstimate> subgroup_crrr(const RankVector& u, const RankVector& v,
                                         const std::vector<std::string>& groups, Method method,
                                         Index min_group = kMinGroupSize);

/// Between-group persistence: marginal-rank slope minus conditional-rank slope.
double between_group(const SlopeEstimate& rrr_est, const SlopeEstimate& crrr_est);

// Weighted variants of the rrrx estimators used by the bootstrap.
double rrrx_additive_value(const VectorRef& u, const VectorRef& v, const MatrixRef& covariates,
                           const VectorRef& w);
double rrrx_interacted_value(const VectorRef& u, const VectorRef& v, const MatrixRef& covariates,
                             const VectorRef& w);

}  // namespace crrr
