#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crrr/bootstrap.hpp"
#include "crrr/csv.hpp"
#include "crrr/serialize.hpp"
#include "crrr/types.hpp"

namespace crrr {

std::vector<Method> default_methods();

/// Full configuration of an estimation run. Defaults: logistic link, 200-point
/// grid over orders 0.01..0.99, no tail restrictions, empirical bootstrap with
/// B=500 at alpha=0.05. A seed is mandatory whenever B > 0.
struct RunConfig {
  std::string input;
  std::string y_col = "y";
  std::string w_col = "w";
  std::vector<std::string> covariates;
  std::vector<std::string> u_covariates;  // empty = covariates
  std::vector<std::string> v_covariates;  // empty = covariates
  std::string group_col;

  LinkKind link = LinkKind::logistic;
  Index grid_points = 200;
  double grid_lo = 0.01;
  double grid_hi = 0.99;
  bool use_full_grid = false;  // thresholds at every distinct observed value
  bool tail = false;
  int tail_m = kDefaultTailM;

  std::vector<Method> methods = default_methods();

  WeightScheme scheme;
  int B = 500;
  double alpha = 0.05;
  std::optional<std::uint64_t> seed;

  bool subgroup = false;
  bool transition = false;
  int transition_k = 10;

  /// Estimator-only mode: y/w columns already hold ranks in (0,1]; no DR and
  /// no bootstrap are run.
  bool ranks_mode = false;

  std::string export_ranks_path;  // append rank columns and write a CSV here
  int threads = 0;                // 0 = all hardware threads
};

/// Ingest config.input and run the estimation workflow.
OrderedJson run_estimate(const RunConfig& config);

/// Same workflow on an in-memory dataset (used by tests and `simulate`).
OrderedJson run_estimate_on(const Dataset& data, const RunConfig& config,
                            const std::vector<long>& dropped_rows = {});

}  // namespace crrr
