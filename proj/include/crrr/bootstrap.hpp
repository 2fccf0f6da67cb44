#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crrr/dr.hpp"
#include "crrr/estimators.hpp"
#include "crrr/grid.hpp"
#include "crrr/rng.hpp"
#include "crrr/types.hpp"

namespace crrr {

enum class WeightKind { empirical, weighted_exponential, wild, m_of_n, subsampling };

std::string to_string(WeightKind k);
WeightKind weight_kind_from_string(const std::string& name);

struct WeightScheme {
  WeightKind kind = WeightKind::empirical;
  std::optional<Index> m;  // required for m_of_n and subsampling
};

/// One exchangeable weight vector, normalized to sum n (mean 1).
Vector gen_weights(const WeightScheme& scheme, Index n, rng::Stream& stream);

// z_{.75} - z_{.25} of the standard normal.
inline constexpr double kNormalIqr = 1.3489795003921634;

/// Empirical quantile at order p: sorted order statistic ceil(p*B).
double empirical_quantile(const VectorRef& draws, double p);

/// Standard error of the point estimate from centered sqrt(n)-scaled draws
/// Z*_b = sqrt(n) (rho*_b - rho_hat): IQR(Z*)/kNormalIqr/sqrt(n).
double bootstrap_se(const VectorRef& scaled_draws, Index n);

/// Symmetric t-interval: t_hat = (1-alpha) quantile of |Z*_b| / sigma_hat,
/// interval = point +/- t_hat * sigma_hat / sqrt(n).
std::pair<double, double> bootstrap_ci(double point, const VectorRef& scaled_draws, double alpha,
                                       Index n);

/// One estimand evaluated by the pipeline: a method, optionally restricted to
/// a single group label.
struct EstimandKey {
  Method method;
  std::optional<std::string> group;
};

/// Immutable inputs shared by the point estimate and every bootstrap
/// replicate: data with the covariate sets for U and V, the grids frozen from
/// the point-estimate run, and the estimands to evaluate.
struct EstimationProblem {
  Dataset data_u;
  Dataset data_v;
  ThresholdGrid grid_y;
  ThresholdGrid grid_w;
  LinkFunction link;
  bool tail = false;
  int tail_m = kDefaultTailM;
  Matrix rrrx_covariates;           // columns used by the rrrx methods
  std::vector<std::string> groups;  // empty when no subgroup analysis
  std::vector<EstimandKey> items;
  bool force_dr = false;  // fit DR even when no item needs conditional ranks
};

/// Point-estimate intermediates, filled on request by evaluate_weighted.
struct PipelineIntermediates {
  DrFit fit_y;
  DrFit fit_w;
  RankVector u_cond, v_cond;
  RankVector u_marg, v_marg;
  bool has_dr = false;
};

/// Full weighted pipeline: weighted DR refits (and weighted tail fits when
/// enabled), weighted ranks, then the weighted estimator for every item.
/// Unit weights reproduce the point estimates exactly.
Vector evaluate_weighted(const EstimationProblem& problem, const VectorRef& weights,
                         PipelineIntermediates* intermediates = nullptr);

/// Single bootstrap draw of the chosen method (full weighted pipeline).
double bootstrap_draw(const EstimationProblem& problem, const VectorRef& weights, Method method);

struct BootstrapConfig {
  WeightScheme scheme;
  int B = 500;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct BootstrapReport {
  Method method;
  std::optional<std::string> group;
  double estimate = 0.0;
  double se = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double alpha = 0.05;
  int B = 0;
  WeightScheme scheme;
  std::uint64_t seed = 0;
  int failed_replicates = 0;
  Index n = 0;
  Vector draws;  // centered sqrt(n)-scaled draws, successful replicates only
};

/// B weighted replicates (replicate b drawn from the counter stream
/// (seed, b+1), so results do not depend on the parallel schedule), one
/// report per item. Errors out when more than 2% of replicates fail.
std::vector<BootstrapReport> run_bootstrap(const EstimationProblem& problem,
                                           const VectorRef& point_values,
                                           const BootstrapConfig& config);

}  // namespace crrr
