#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crrr/grid.hpp"
#include "crrr/link.hpp"
#include "crrr/types.hpp"

namespace crrr {

enum class MleStatus { ok, saturated_zero, saturated_one };

struct MleFit {
  Vector beta;
  MleStatus status = MleStatus::ok;
  int iterations = 0;
  double grad_norm = 0.0;
  bool separated = false;
};

inline constexpr double kGradTol = 1e-8;
inline constexpr int kMaxNewtonIter = 100;
inline constexpr double kProbClamp = 1e-10;
inline constexpr double kSeparationCoef = 30.0;
// Intercept magnitude whose fitted probability rounds to exactly 0 or 1.
inline constexpr double kSaturatedIntercept = 1000.0;
inline constexpr int kDefaultTailM = 30;

/// Maximizer of the weighted binary log-likelihood
///   sum_i w_i [ y_i log L(x_i'b) + (1-y_i) log L(-x_i'b) ]
/// by Newton-Raphson with step halving. Probabilities are clamped to
/// [kProbClamp, 1-kProbClamp] during iteration; a coefficient exceeding
/// kSeparationCoef in absolute value flags the fit as separated (finite
/// coefficients are still returned). An all-0 or all-1 indicator among
/// positive-weight rows short-circuits to a saturated status whose sentinel
/// coefficients map to CDF 0 or 1 for every x.
MleFit binary_mle(const MatrixRef& design, const VectorRef& indicator, const LinkFunction& link,
                  const VectorRef& weights, const Vector* warm_start = nullptr);

enum class TailSide { lower, upper };

inline std::string to_string(TailSide s) { return s == TailSide::lower ? "lower" : "upper"; }

/// One-parameter tail extension: beyond the grid the intercept moves linearly
/// with slope `scale` while the covariate coefficients stay frozen.
struct TailFit {
  double anchor = 0.0;  // nearest grid endpoint
  double pivot = 0.0;
  double scale = 0.0;   // > 0
  TailSide side = TailSide::upper;
};

struct ThresholdDiagnostics {
  int iterations = 0;
  bool separated = false;
  bool saturated = false;
};

/// Fitted conditional CDF model for one variable over a threshold grid.
struct DrFit {
  ThresholdGrid grid;
  Matrix coefs;  // dim x J, column j = beta(grid.points[j])
  LinkFunction link;
  std::optional<TailFit> lower_tail;
  std::optional<TailFit> upper_tail;
  Variable variable = Variable::y;
  std::string variable_label;
  std::uint64_t covariate_sig = 0;
  std::vector<ThresholdDiagnostics> diagnostics;

  Index dim() const { return coefs.rows(); }
};

/// Per-threshold binary MLE over the grid; saturated thresholds get sentinel
/// coefficients. Thresholds are fit in grid order with warm starts, so the
/// assembled fit is deterministic.
DrFit fit_dr(const Dataset& data, Variable variable, const ThresholdGrid& grid,
             const LinkFunction& link, const VectorRef& weights);

/// One-parameter tail MLE holding beta at the grid endpoint fixed. The pivot
/// is the observed value with m_min observations strictly between it and the
/// endpoint; at least m_min observations must sit at or beyond the pivot.
/// Requires 2*m_min observations beyond the endpoint. If the scale estimate
/// is not positive the pivot advances outward, up to 5 attempts.
TailFit fit_tail(const DrFit& fit, const Dataset& data, TailSide side, int m_min,
                 const VectorRef& weights);

/// Fitted conditional CDF at (r, x): linear interpolation in r of the
/// per-x monotone rearrangement of the grid CDF values, tail model or
/// endpoint clamping beyond the grid. Nondecreasing in r, range in [0, 1].
double predict_cdf(const DrFit& fit, const VectorRef& x, double r);

/// predict_cdf for each row of `design` at the matching entry of `values`.
Vector predict_cdf_rows(const DrFit& fit, const MatrixRef& design, const VectorRef& values);

}  // namespace crrr
