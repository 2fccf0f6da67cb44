#pragma once

#include <string>
#include <vector>

#include "crrr/bootstrap.hpp"
#include "crrr/ranks.hpp"
#include "crrr/types.hpp"

namespace crrr {

enum class DgpKind { conceptual, bivariate_mc };

std::string to_string(DgpKind k);
DgpKind dgp_from_string(const std::string& name);

/// Synthetic design. `conceptual`: binary X with Pr(X=0)=Pr(X=1)=1/2 and
/// (Y,W)|X=x bivariate normal with means (165, 180-delta*x), common SD 4 and
/// correlation 0.6. `bivariate_mc`: X ~ N(0,1) and (Y,W)|X=x bivariate normal
/// with means (x,x), unit variances and correlation c.
struct DgpSpec {
  DgpKind kind = DgpKind::conceptual;
  double delta = 0.0;  // conceptual only
  double c = 0.0;      // bivariate_mc only, in (-1,1)
  Index n = 0;
  std::uint64_t seed = 0;
};

/// Seeded draw of n rows (y, w, x); deterministic for a fixed seed.
Dataset gen_data(const DgpSpec& spec);

struct OracleRanks {
  RankVector u, v;            // true conditional ranks
  RankVector u_marg, v_marg;  // true marginal ranks
};

/// Ranks through the true conditional and marginal CDFs of the design.
OracleRanks oracle_ranks(const DgpSpec& spec, const Dataset& data);

/// Spearman rank correlation of a bivariate normal with correlation c:
/// 6 arcsin(c/2) / pi.
double bvn_spearman(double c);

struct McCell {
  double c = 0.0;
  Index n = 0;
};

struct McCellResult {
  double c = 0.0;
  Index n = 0;
  double truth = 0.0;
  double rmse = 0.0;
  double bias = 0.0;
  double sd = 0.0;
  double coverage = 0.0;
  double mean_ci_length = 0.0;
  int reps = 0;
  int boot_reps = 0;
  int failed = 0;
};

struct McConfig {
  int reps = 500;
  int boot_reps = 100;
  LinkKind link = LinkKind::gaussian;
  Index grid_points = 200;
  double grid_lo = 0.01;
  double grid_hi = 0.99;
  bool tail = false;
  int tail_m = kDefaultTailM;
  Method method = Method::crrr_corr;
  WeightScheme scheme;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  int threads = 0;
};

struct McReport {
  std::vector<McCellResult> cells;
  McConfig config;
  std::string generator = rng::kGeneratorName;
};

/// Independent full pipelines (gen_data -> DR fit -> estimator -> bootstrap
/// CI) per replicate, compared against bvn_spearman(c). Replicates use
/// per-replicate counter streams, so the report is identical for any thread
/// count.
McReport run_monte_carlo(const std::vector<McCell>& cells, const McConfig& config);

/// CSV table with one row per cell: c,n,rmse,bias,sd,coverage.
std::string mc_to_csv(const McReport& report);

}  // namespace crrr
