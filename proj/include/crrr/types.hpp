#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crrr/errors.hpp"

namespace crrr {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using VectorRef = Eigen::Ref<const Vector>;
using MatrixRef = Eigen::Ref<const Matrix>;

enum class Variable { y, w };

inline std::string to_string(Variable v) { return v == Variable::y ? "y" : "w"; }

enum class RankKind { marginal, conditional };

inline std::string to_string(RankKind k) {
  return k == RankKind::marginal ? "marginal" : "conditional";
}

enum class Method {
  rrr,
  rrrx_additive,
  rrrx_interacted,
  crrr_corr,
  crrr_restricted_corr,
  crrr_fully_restricted,
  crrr_regression,
  crrr_regression_restricted,
  crrr_reverse_restricted,
};

std::string to_string(Method m);
Method method_from_string(const std::string& name);

/// Columnar numeric table: outcome y, conditioning variable w, design matrix x
/// whose first column is the intercept, plus optional group labels.
struct Dataset {
  Vector y;
  Vector w;
  Matrix x;
  std::vector<std::string> covariate_names;  // one per x column, [0] == "(intercept)"
  std::vector<std::string> group;            // size n or empty

  Index n() const { return y.size(); }
  Index dim() const { return x.cols(); }
};

/// Copy of `data` keeping only the named covariate columns (intercept always kept).
Dataset with_covariates(const Dataset& data, const std::vector<std::string>& names);

/// Order-insensitive hash of a covariate column set; 0 for the empty set.
/// The intercept column does not contribute.
std::uint64_t covariate_signature(const std::vector<std::string>& names);

struct SlopeEstimate {
  Method method;
  double value = 0.0;
  Index n = 0;
  std::optional<std::string> group;
};

}  // namespace crrr
