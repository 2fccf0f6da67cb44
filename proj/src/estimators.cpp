#include "crrr/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace crrr {

namespace {

// Variance threshold below which a (sum of squared deviations) counts as zero.
double degenerate_floor(Index n) { return static_cast<double>(n) * 1e-28; }

void check_pair(const VectorRef& u, const VectorRef& v, const VectorRef& w) {
  if (u.size() != v.size() || u.size() != w.size()) {
    throw InputMismatch("rank vectors and weights must have equal length");
  }
}

}  // namespace

double weighted_mean(const VectorRef& x, const VectorRef& w) {
  const double mass = w.sum();
  if (mass <= 0.0) throw DegenerateData("weights sum to zero");
  return (w.array() * x.array()).sum() / mass;
}

double pearson_corr(const VectorRef& u, const VectorRef& v, const VectorRef& w) {
  check_pair(u, v, w);
  if (u.size() < 3) throw DegenerateData("correlation needs at least 3 observations");
  const double ubar = weighted_mean(u, w);
  const double vbar = weighted_mean(v, w);
  const auto du = (u.array() - ubar);
  const auto dv = (v.array() - vbar);
  const double suu = (w.array() * du * du).sum();
  const double svv = (w.array() * dv * dv).sum();
  if (suu <= degenerate_floor(u.size()) || svv <= degenerate_floor(u.size())) {
    throw DegenerateData("zero variance in a rank vector");
  }
  const double suv = (w.array() * du * dv).sum();
  return std::clamp(suv / std::sqrt(suu * svv), -1.0, 1.0);
}

double restricted_corr_value(const VectorRef& u, const VectorRef& v, const VectorRef& w) {
  check_pair(u, v, w);
  const auto du = (u.array() - 0.5);
  const auto dv = (v.array() - 0.5);
  const double suu = (w.array() * du * du).sum();
  const double svv = (w.array() * dv * dv).sum();
  if (suu <= degenerate_floor(u.size()) || svv <= degenerate_floor(u.size())) {
    throw DegenerateData("rank vector is identically 0.5");
  }
  const double suv = (w.array() * du * dv).sum();
  return suv / std::sqrt(suu * svv);
}

double fully_restricted_value(const VectorRef& u, const VectorRef& v, const VectorRef& w) {
  check_pair(u, v, w);
  const double mass = w.sum();
  if (mass <= 0.0) throw DegenerateData("weights sum to zero");
  return 12.0 * (w.array() * (u.array() - 0.5) * (v.array() - 0.5)).sum() / mass;
}

RegressionSlopeValues regression_slope_values(const VectorRef& u, const VectorRef& v,
                                              const VectorRef& w) {
  check_pair(u, v, w);
  const double vbar = weighted_mean(v, w);
  const auto dv = (v.array() - vbar);
  const auto du5 = (u.array() - 0.5);
  const auto dv5 = (v.array() - 0.5);
  const double svv = (w.array() * dv * dv).sum();
  const double svv5 = (w.array() * dv5 * dv5).sum();
  const double suu5 = (w.array() * du5 * du5).sum();
  const double floor = degenerate_floor(u.size());
  if (svv <= floor || svv5 <= floor || suu5 <= floor) {
    throw DegenerateData("zero denominator in regression slope");
  }
  RegressionSlopeValues out;
  out.unrestricted = (w.array() * u.array() * dv).sum() / svv;
  const double cross = (w.array() * du5 * dv5).sum();
  out.restricted = cross / svv5;
  out.reverse_restricted = cross / suu5;
  return out;
}

double ols_slope(const VectorRef& u, const VectorRef& v, const VectorRef& w) {
  check_pair(u, v, w);
  const double vbar = weighted_mean(v, w);
  const auto dv = (v.array() - vbar);
  const double svv = (w.array() * dv * dv).sum();
  if (svv <= degenerate_floor(u.size())) throw DegenerateData("regressor has zero variance");
  return (w.array() * u.array() * dv).sum() / svv;
}

Vector wls(const MatrixRef& design, const VectorRef& response, const VectorRef& w) {
  if (design.rows() != response.size() || design.rows() != w.size()) {
    throw InputMismatch("wls: dimension mismatch");
  }
  const Vector sqrt_w = w.cwiseSqrt();
  Matrix scaled = sqrt_w.asDiagonal() * design;
  Eigen::ColPivHouseholderQR<Matrix> qr(scaled);
  qr.setThreshold(1e-10);
  if (qr.rank() < design.cols()) throw DegenerateData("design matrix is rank deficient");
  return qr.solve((sqrt_w.array() * response.array()).matrix());
}

double method_value(Method method, const VectorRef& u, const VectorRef& v, const VectorRef& w) {
  switch (method) {
    case Method::rrr:
    case Method::crrr_corr:
      return pearson_corr(u, v, w);
    case Method::crrr_restricted_corr:
      return restricted_corr_value(u, v, w);
    case Method::crrr_fully_restricted:
      return fully_restricted_value(u, v, w);
    case Method::crrr_regression:
      return regression_slope_values(u, v, w).unrestricted;
    case Method::crrr_regression_restricted:
      return regression_slope_values(u, v, w).restricted;
    case Method::crrr_reverse_restricted:
      return regression_slope_values(u, v, w).reverse_restricted;
    case Method::rrrx_additive:
    case Method::rrrx_interacted:
      throw ConfigError("rrrx methods need covariates; use rrrx_additive/rrrx_interacted");
  }
  throw ConfigError("unhandled method");
}

double subgroup_method_value(Method method, const VectorRef& u, const VectorRef& v,
                             const VectorRef& w) {
  if (method == Method::rrr) return ols_slope(u, v, w);
  return method_value(method, u, v, w);
}

namespace {

SlopeEstimate make_estimate(Method m, double value, Index n) {
  SlopeEstimate e;
  e.method = m;
  e.value = value;
  e.n = n;
  return e;
}

Vector unit_weights(Index n) { return Vector::Ones(n); }

}  // namespace

SlopeEstimate pearson_slope_corr(const RankVector& u, const RankVector& v) {
  const bool marginal = u.kind == RankKind::marginal && v.kind == RankKind::marginal;
  const double value = pearson_corr(u.values, v.values, unit_weights(u.n()));
  return make_estimate(marginal ? Method::rrr : Method::crrr_corr, value, u.n());
}

SlopeEstimate restricted_corr(const RankVector& u, const RankVector& v) {
  const double value = restricted_corr_value(u.values, v.values, unit_weights(u.n()));
  return make_estimate(Method::crrr_restricted_corr, value, u.n());
}

SlopeEstimate fully_restricted(const RankVector& u, const RankVector& v) {
  const double value = fully_restricted_value(u.values, v.values, unit_weights(u.n()));
  return make_estimate(Method::crrr_fully_restricted, value, u.n());
}

RegressionEstimates regression_slopes(const RankVector& u, const RankVector& v) {
  const auto values = regression_slope_values(u.values, v.values, unit_weights(u.n()));
  RegressionEstimates out;
  out.unrestricted = make_estimate(Method::crrr_regression, values.unrestricted, u.n());
  out.restricted = make_estimate(Method::crrr_regression_restricted, values.restricted, u.n());
  out.reverse_restricted =
      make_estimate(Method::crrr_reverse_restricted, values.reverse_restricted, u.n());
  return out;
}

double rrrx_additive_value(const VectorRef& u, const VectorRef& v, const MatrixRef& covariates,
                           const VectorRef& w) {
  const Index n = u.size();
  Matrix design(n, 2 + covariates.cols());
  design.col(0).setOnes();
  design.col(1) = v;
  design.rightCols(covariates.cols()) = covariates;
  return wls(design, u, w)[1];
}

double rrrx_interacted_value(const VectorRef& u, const VectorRef& v, const MatrixRef& covariates,
                             const VectorRef& w) {
  const Index n = u.size();
  const Index k = covariates.cols();
  Matrix design(n, 2 + 2 * k);
  design.col(0).setOnes();
  design.col(1) = v;
  for (Index j = 0; j < k; ++j) {
    const double center = weighted_mean(covariates.col(j), w);
    design.col(2 + j) = covariates.col(j).array() - center;
    design.col(2 + k + j) = design.col(2 + j).array() * v.array();
  }
  return wls(design, u, w)[1];
}

SlopeEstimate rrrx_additive(const RankVector& u_marg, const RankVector& v_marg,
                            const MatrixRef& covariates) {
  const double value = rrrx_additive_value(u_marg.values, v_marg.values, covariates,
                                           unit_weights(u_marg.n()));
  return make_estimate(Method::rrrx_additive, value, u_marg.n());
}

SlopeEstimate rrrx_interacted(const RankVector& u_marg, const RankVector& v_marg,
                              const MatrixRef& covariates) {
  const double value = rrrx_interacted_value(u_marg.values, v_marg.values, covariates,
                                             unit_weights(u_marg.n()));
  return make_estimate(Method::rrrx_interacted, value, u_marg.n());
}

std::vector<SlopeEstimate> subgroup_crrr(const RankVector& u, const RankVector& v,
                                         const std::vector<std::string>& groups, Method method,
                                         Index min_group) {
  if (static_cast<Index>(groups.size()) != u.n() || u.n() != v.n()) {
    throw InputMismatch("subgroup_crrr: group labels must match rank vectors");
  }
  std::map<std::string, std::vector<Index>> members;
  for (Index i = 0; i < u.n(); ++i) members[groups[static_cast<std::size_t>(i)]].push_back(i);

  std::vector<SlopeEstimate> out;
  for (const auto& [label, idx] : members) {
    const Index m = static_cast<Index>(idx.size());
    if (m < min_group) {
      throw GroupTooSmall("group '" + label + "' has " + std::to_string(m) +
                          " observations (need " + std::to_string(min_group) + ")");
    }
    Vector gu(m), gv(m);
    for (Index i = 0; i < m; ++i) {
      gu[i] = u.values[idx[static_cast<std::size_t>(i)]];
      gv[i] = v.values[idx[static_cast<std::size_t>(i)]];
    }
    SlopeEstimate e =
        make_estimate(method, subgroup_method_value(method, gu, gv, unit_weights(m)), m);
    e.group = label;
    out.push_back(std::move(e));
  }
  return out;
}

double between_group(const SlopeEstimate& rrr_est, const SlopeEstimate& crrr_est) {
  if (rrr_est.n != crrr_est.n) {
    throw InputMismatch("between_group: estimates come from different sample sizes");
  }
  return rrr_est.value - crrr_est.value;
}

}  // namespace crrr
