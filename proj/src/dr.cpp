#include "crrr/dr.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace crrr {

namespace {

struct Eval {
  double ll = 0.0;
  Vector eta;
  Vector p;  // clamped
};

Eval evaluate(const MatrixRef& design, const VectorRef& indicator, const LinkFunction& link,
              const VectorRef& weights, const Vector& beta) {
  Eval out;
  out.eta = design * beta;
  out.p = cdf_array(link, out.eta).cwiseMax(kProbClamp).cwiseMin(1.0 - kProbClamp);
  out.ll = (weights.array() *
            (indicator.array() * out.p.array().log() +
             (1.0 - indicator.array()) * (1.0 - out.p.array()).log()))
               .sum();
  return out;
}

// Score residuals s_i with gradient = X'(w .* s). For the logistic link the
// generic GLM form collapses to y - p.
Vector score_vector(const LinkFunction& link, const VectorRef& indicator, const Eval& e) {
  if (link.kind == LinkKind::logistic) return indicator - e.p;
  Vector s(e.p.size());
  for (Index i = 0; i < s.size(); ++i) {
    const double pd = norm_pdf(e.eta[i]);
    s[i] = pd * (indicator[i] - e.p[i]) / (e.p[i] * (1.0 - e.p[i]));
  }
  return s;
}

// Fisher information weights f_i with H = X' diag(w .* f) X.
Vector fisher_vector(const LinkFunction& link, const Eval& e) {
  if (link.kind == LinkKind::logistic) {
    return (e.p.array() * (1.0 - e.p.array())).matrix();
  }
  Vector f(e.p.size());
  for (Index i = 0; i < f.size(); ++i) {
    const double pd = norm_pdf(e.eta[i]);
    f[i] = pd * pd / (e.p[i] * (1.0 - e.p[i]));
  }
  return f;
}

Vector sentinel_beta(Index dim, MleStatus status) {
  Vector beta = Vector::Zero(dim);
  beta[0] = status == MleStatus::saturated_zero ? -kSaturatedIntercept : kSaturatedIntercept;
  return beta;
}

}  // namespace

MleFit binary_mle(const MatrixRef& design, const VectorRef& indicator, const LinkFunction& link,
                  const VectorRef& weights, const Vector* warm_start) {
  const Index n = design.rows();
  const Index d = design.cols();
  if (indicator.size() != n || weights.size() != n) {
    throw InputMismatch("binary_mle: design, indicator and weights must have matching rows");
  }

  MleFit fit;
  const double ones_mass = (weights.array() * indicator.array()).sum();
  const double zeros_mass = (weights.array() * (1.0 - indicator.array())).sum();
  if (ones_mass <= 0.0 || zeros_mass <= 0.0) {
    fit.status = ones_mass <= 0.0 ? MleStatus::saturated_zero : MleStatus::saturated_one;
    fit.beta = sentinel_beta(d, fit.status);
    return fit;
  }

  Vector beta = (warm_start != nullptr && warm_start->size() == d) ? *warm_start : Vector::Zero(d);
  Eval cur = evaluate(design, indicator, link, weights, beta);
  bool separated = beta.lpNorm<Eigen::Infinity>() > kSeparationCoef;
  int it = 0;
  for (; it < kMaxNewtonIter; ++it) {
    const Vector score = score_vector(link, indicator, cur);
    const Vector g = design.transpose() * weights.cwiseProduct(score);
    fit.grad_norm = g.lpNorm<Eigen::Infinity>();
    if (fit.grad_norm <= kGradTol) break;

    const Vector fw = weights.cwiseProduct(fisher_vector(link, cur));
    const Matrix hess = design.transpose() * fw.asDiagonal() * design;
    const Vector step = hess.ldlt().solve(g);
    if (!step.allFinite()) break;

    // Step halving; float-flat steps are accepted so the gradient can keep
    // contracting when the likelihood is already resolved to rounding.
    const double slack = 1e-12 * (1.0 + std::fabs(cur.ll));
    double t = 1.0;
    Eval next;
    bool accepted = false;
    for (int h = 0; h < 40; ++h) {
      next = evaluate(design, indicator, link, weights, beta + t * step);
      if (std::isfinite(next.ll) && next.ll >= cur.ll - slack) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;

    beta += t * step;
    if (beta.lpNorm<Eigen::Infinity>() > kSeparationCoef) separated = true;
    const double gain = next.ll - cur.ll;
    cur = std::move(next);
    // A flat clamped likelihood on a separated fit cannot improve further.
    if (separated && gain <= slack) break;
  }

  {
    const Vector score = score_vector(link, indicator, cur);
    const Vector g = design.transpose() * weights.cwiseProduct(score);
    fit.grad_norm = g.lpNorm<Eigen::Infinity>();
  }
  fit.beta = beta;
  fit.iterations = it;
  fit.separated = separated;
  if (fit.grad_norm > kGradTol && !separated) {
    throw NonConvergence("binary MLE did not converge after " + std::to_string(it) +
                             " iterations (gradient max-norm " + std::to_string(fit.grad_norm) +
                             ")",
                         it, fit.grad_norm);
  }
  return fit;
}

DrFit fit_dr(const Dataset& data, Variable variable, const ThresholdGrid& grid,
             const LinkFunction& link, const VectorRef& weights) {
  const Vector& values = variable == Variable::y ? data.y : data.w;
  if (weights.size() != data.n()) throw InputMismatch("fit_dr: weights length must equal n");

  const Index num_thresholds = grid.size();
  DrFit fit;
  fit.grid = grid;
  fit.link = link;
  fit.variable = variable;
  fit.variable_label = to_string(variable);
  fit.covariate_sig = covariate_signature(data.covariate_names);
  fit.coefs.resize(data.dim(), num_thresholds);
  fit.diagnostics.resize(static_cast<std::size_t>(num_thresholds));

  Vector warm;
  Vector indicator(data.n());
  for (Index j = 0; j < num_thresholds; ++j) {
    indicator = (values.array() <= grid.points[j]).cast<double>();
    try {
      const MleFit m =
          binary_mle(data.x, indicator, link, weights, warm.size() > 0 ? &warm : nullptr);
      fit.coefs.col(j) = m.beta;
      fit.diagnostics[static_cast<std::size_t>(j)] = {m.iterations, m.separated,
                                                      m.status != MleStatus::ok};
      if (m.status == MleStatus::ok) warm = m.beta;
    } catch (const NonConvergence& e) {
      throw NonConvergence("threshold " + std::to_string(grid.points[j]) + " (" +
                               fit.variable_label + "): " + e.what(),
                           e.iterations, e.grad_norm);
    }
  }
  return fit;
}

TailFit fit_tail(const DrFit& fit, const Dataset& data, TailSide side, int m_min,
                 const VectorRef& weights) {
  if (m_min < 1) throw ConfigError("fit_tail: m_min must be positive");
  if (data.dim() != fit.dim()) throw InputMismatch("fit_tail: dataset does not match the fit");
  const Vector& values = fit.variable == Variable::y ? data.y : data.w;
  const bool upper = side == TailSide::upper;
  const double anchor = upper ? fit.grid.hi() : fit.grid.lo();
  const Index endpoint = upper ? fit.grid.size() - 1 : 0;
  if (fit.diagnostics[static_cast<std::size_t>(endpoint)].saturated) {
    throw TailFitError("grid endpoint is saturated; no anchor coefficients to extend");
  }

  std::vector<double> beyond;
  for (Index i = 0; i < values.size(); ++i) {
    if (upper ? values[i] > anchor : values[i] < anchor) beyond.push_back(values[i]);
  }
  if (static_cast<int>(beyond.size()) < 2 * m_min) {
    throw TailDataError("fewer than " + std::to_string(2 * m_min) + " observations beyond the " +
                        to_string(side) + " grid endpoint");
  }
  std::sort(beyond.begin(), beyond.end());
  if (!upper) std::reverse(beyond.begin(), beyond.end());  // outward order

  const Vector offsets = data.x * fit.coefs.col(endpoint);
  Vector indicator(values.size());
  for (int attempt = 0; attempt < 5; ++attempt) {
    const std::size_t pos = static_cast<std::size_t>(m_min + attempt);
    if (pos >= beyond.size() ||
        static_cast<int>(beyond.size() - pos) < m_min) {
      throw TailFitError("ran out of admissible pivots on the " + to_string(side) + " tail");
    }
    const double pivot = beyond[pos];
    const double span = pivot - anchor;
    indicator = (values.array() <= pivot).cast<double>();

    // 1-D Newton for the tail scale, probabilities clamped as in binary_mle.
    double a = 1.0;
    auto ll_at = [&](double aa) {
      double ll = 0.0;
      for (Index i = 0; i < values.size(); ++i) {
        const double p = std::clamp(fit.link.cdf(span * aa + offsets[i]), kProbClamp,
                                    1.0 - kProbClamp);
        ll += weights[i] * (indicator[i] * std::log(p) + (1.0 - indicator[i]) * std::log(1.0 - p));
      }
      return ll;
    };
    double cur_ll = ll_at(a);
    bool converged = false;
    for (int it = 0; it < kMaxNewtonIter; ++it) {
      double g = 0.0;
      double h = 0.0;
      for (Index i = 0; i < values.size(); ++i) {
        const double eta = span * a + offsets[i];
        const double p =
            std::clamp(fit.link.cdf(eta), kProbClamp, 1.0 - kProbClamp);
        double score;
        double info;
        if (fit.link.kind == LinkKind::logistic) {
          score = indicator[i] - p;
          info = p * (1.0 - p);
        } else {
          const double pd = norm_pdf(eta);
          score = pd * (indicator[i] - p) / (p * (1.0 - p));
          info = pd * pd / (p * (1.0 - p));
        }
        g += weights[i] * score * span;
        h += weights[i] * info * span * span;
      }
      if (std::fabs(g) <= kGradTol) {
        converged = true;
        break;
      }
      if (!(h > 0.0)) break;
      const double slack = 1e-12 * (1.0 + std::fabs(cur_ll));
      double t = 1.0;
      bool accepted = false;
      double next_ll = 0.0;
      for (int hv = 0; hv < 40; ++hv) {
        next_ll = ll_at(a + t * g / h);
        if (std::isfinite(next_ll) && next_ll >= cur_ll - slack) {
          accepted = true;
          break;
        }
        t *= 0.5;
      }
      if (!accepted) break;
      a += t * g / h;
      cur_ll = next_ll;
    }
    if (converged && a > 0.0) return TailFit{anchor, pivot, a, side};
  }
  throw TailFitError("no admissible pivot produced a positive " + to_string(side) +
                     " tail scale");
}

namespace {

double interpolate_monotone(const DrFit& fit, const std::vector<double>& sorted_cdf,
                            double eta_lo, double eta_hi, double r) {
  const Vector& pts = fit.grid.points;
  const Index J = pts.size();
  if (r <= pts[0]) {
    if (r == pts[0]) return sorted_cdf[0];
    if (fit.lower_tail) {
      const double v =
          fit.link.cdf(eta_lo + (r - fit.lower_tail->anchor) * fit.lower_tail->scale);
      return std::min(v, sorted_cdf[0]);
    }
    return sorted_cdf[0];
  }
  if (r >= pts[J - 1]) {
    if (r == pts[J - 1]) return sorted_cdf[static_cast<std::size_t>(J - 1)];
    if (fit.upper_tail) {
      const double v =
          fit.link.cdf(eta_hi + (r - fit.upper_tail->anchor) * fit.upper_tail->scale);
      return std::max(v, sorted_cdf[static_cast<std::size_t>(J - 1)]);
    }
    return sorted_cdf[static_cast<std::size_t>(J - 1)];
  }
  const double* begin = pts.data();
  const double* it = std::upper_bound(begin, begin + J, r);
  const Index hi = it - begin;  // first point > r, in [1, J-1]
  const Index lo = hi - 1;
  if (pts[lo] == r) return sorted_cdf[static_cast<std::size_t>(lo)];
  const double frac = (r - pts[lo]) / (pts[hi] - pts[lo]);
  return sorted_cdf[static_cast<std::size_t>(lo)] +
         frac * (sorted_cdf[static_cast<std::size_t>(hi)] -
                 sorted_cdf[static_cast<std::size_t>(lo)]);
}

}  // namespace

double predict_cdf(const DrFit& fit, const VectorRef& x, double r) {
  if (x.size() != fit.dim()) throw InputMismatch("predict_cdf: covariate vector has wrong length");
  const Vector eta = fit.coefs.transpose() * x;
  const Vector probs = cdf_array(fit.link, eta);
  std::vector<double> sorted_cdf(probs.data(), probs.data() + probs.size());
  std::sort(sorted_cdf.begin(), sorted_cdf.end());
  return interpolate_monotone(fit, sorted_cdf, eta[0], eta[eta.size() - 1], r);
}

Vector predict_cdf_rows(const DrFit& fit, const MatrixRef& design, const VectorRef& values) {
  if (design.cols() != fit.dim()) throw InputMismatch("predict_cdf_rows: design has wrong width");
  if (design.rows() != values.size()) {
    throw InputMismatch("predict_cdf_rows: one value per design row required");
  }
  const Index n = design.rows();
  const Index J = fit.grid.size();
  Vector out(n);
  std::vector<double> sorted_cdf(static_cast<std::size_t>(J));

  constexpr Index kBlock = 8192;
  Matrix eta_block;
  for (Index start = 0; start < n; start += kBlock) {
    const Index rows = std::min(kBlock, n - start);
    eta_block.noalias() = design.middleRows(start, rows) * fit.coefs;  // rows x J
    for (Index i = 0; i < rows; ++i) {
      const Vector probs = cdf_array(fit.link, eta_block.row(i).transpose());
      std::copy(probs.data(), probs.data() + J, sorted_cdf.begin());
      std::sort(sorted_cdf.begin(), sorted_cdf.end());
      out[start + i] = interpolate_monotone(fit, sorted_cdf, eta_block(i, 0), eta_block(i, J - 1),
                                            values[start + i]);
    }
  }
  return out;
}

}  // namespace crrr
