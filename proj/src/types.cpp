#include "crrr/types.hpp"

#include <algorithm>

namespace crrr {

std::string to_string(Method m) {
  switch (m) {
    case Method::rrr: return "rrr";
    case Method::rrrx_additive: return "rrrx_additive";
    case Method::rrrx_interacted: return "rrrx_interacted";
    case Method::crrr_corr: return "crrr_corr";
    case Method::crrr_restricted_corr: return "crrr_restricted_corr";
    case Method::crrr_fully_restricted: return "crrr_fully_restricted";
    case Method::crrr_regression: return "crrr_regression";
    case Method::crrr_regression_restricted: return "crrr_regression_restricted";
    case Method::crrr_reverse_restricted: return "crrr_reverse_restricted";
  }
  return "unknown";
}

Method method_from_string(const std::string& name) {
  static const std::pair<const char*, Method> table[] = {
      {"rrr", Method::rrr},
      {"rrrx_additive", Method::rrrx_additive},
      {"rrrx_interacted", Method::rrrx_interacted},
      {"crrr_corr", Method::crrr_corr},
      {"crrr_restricted_corr", Method::crrr_restricted_corr},
      {"crrr_fully_restricted", Method::crrr_fully_restricted},
      {"crrr_regression", Method::crrr_regression},
      {"crrr_regression_restricted", Method::crrr_regression_restricted},
      {"crrr_reverse_restricted", Method::crrr_reverse_restricted},
  };
  for (const auto& [key, value] : table) {
    if (name == key) return value;
  }
  throw ConfigError("unknown method '" + name + "'");
}

Dataset with_covariates(const Dataset& data, const std::vector<std::string>& names) {
  Dataset out;
  out.y = data.y;
  out.w = data.w;
  out.group = data.group;
  out.x.resize(data.n(), static_cast<Index>(names.size()) + 1);
  out.x.col(0) = data.x.col(0);
  out.covariate_names.push_back("(intercept)");
  for (const auto& name : names) {
    auto it = std::find(data.covariate_names.begin(), data.covariate_names.end(), name);
    if (it == data.covariate_names.end() || name == "(intercept)") {
      throw MissingColumn("covariate '" + name + "' not present in dataset");
    }
    const Index col = it - data.covariate_names.begin();
    out.x.col(static_cast<Index>(out.covariate_names.size())) = data.x.col(col);
    out.covariate_names.push_back(name);
  }
  return out;
}

std::uint64_t covariate_signature(const std::vector<std::string>& names) {
  std::vector<std::string> sorted;
  for (const auto& name : names) {
    if (name != "(intercept)") sorted.push_back(name);
  }
  if (sorted.empty()) return 0;
  std::sort(sorted.begin(), sorted.end());
  std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a
  for (const auto& name : sorted) {
    for (unsigned char c : name) {
      h ^= c;
      h *= 0x100000001B3ULL;
    }
    h ^= 0x1F;
    h *= 0x100000001B3ULL;
  }
  return h == 0 ? 1 : h;
}

}  // namespace crrr
