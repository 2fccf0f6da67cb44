#pragma once

#include <string>

#include "crrr/types.hpp"

namespace crrr {

enum class LinkKind { logistic, gaussian };

std::string to_string(LinkKind k);
LinkKind link_from_string(const std::string& name);

double logistic_cdf(double z);
double logistic_pdf(double z);
double norm_cdf(double z);
double norm_pdf(double z);

/// Inverse standard normal CDF (Wichura's PPND16 rational approximation).
/// Throws DomainError unless p lies strictly inside (0, 1).
double norm_quantile(double p);

/// Strictly increasing CDF with matching density, evaluated through a fixed
/// kind tag so the struct stays a cheap value type.
struct LinkFunction {
  LinkKind kind = LinkKind::logistic;

  double cdf(double z) const { return kind == LinkKind::logistic ? logistic_cdf(z) : norm_cdf(z); }
  double pdf(double z) const { return kind == LinkKind::logistic ? logistic_pdf(z) : norm_pdf(z); }

  static LinkFunction logistic() { return {LinkKind::logistic}; }
  static LinkFunction gaussian() { return {LinkKind::gaussian}; }
};

/// Element-wise cdf over a vector of linear indices.
Vector cdf_array(const LinkFunction& link, const VectorRef& eta);

}  // namespace crrr
