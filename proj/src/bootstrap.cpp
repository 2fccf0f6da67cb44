#include "crrr/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "crrr/parallel.hpp"

namespace crrr {

std::string to_string(WeightKind k) {
  switch (k) {
    case WeightKind::empirical: return "empirical";
    case WeightKind::weighted_exponential: return "weighted_exponential";
    case WeightKind::wild: return "wild";
    case WeightKind::m_of_n: return "m_of_n";
    case WeightKind::subsampling: return "subsampling";
  }
  return "unknown";
}

WeightKind weight_kind_from_string(const std::string& name) {
  if (name == "empirical") return WeightKind::empirical;
  if (name == "weighted_exponential" || name == "exponential") {
    return WeightKind::weighted_exponential;
  }
  if (name == "wild") return WeightKind::wild;
  if (name == "m_of_n") return WeightKind::m_of_n;
  if (name == "subsampling") return WeightKind::subsampling;
  throw ConfigError("unknown bootstrap scheme '" + name + "'");
}

Vector gen_weights(const WeightScheme& scheme, Index n, rng::Stream& stream) {
  if (n < 1) throw ConfigError("gen_weights: n must be positive");
  Vector w = Vector::Zero(n);
  switch (scheme.kind) {
    case WeightKind::empirical: {
      for (Index i = 0; i < n; ++i) {
        w[static_cast<Index>(stream.next_below(static_cast<std::uint64_t>(n)))] += 1.0;
      }
      break;
    }
    case WeightKind::weighted_exponential: {
      for (Index i = 0; i < n; ++i) w[i] = -std::log(stream.next_uniform());
      break;
    }
    case WeightKind::wild: {
      // 1 + (chi^2_1 - 1)/sqrt(2): nonnegative with mean and variance 1.
      for (Index i = 0; i < n; ++i) {
        const double z = stream.next_normal();
        w[i] = std::max(0.0, 1.0 + (z * z - 1.0) * M_SQRT1_2);
      }
      break;
    }
    case WeightKind::m_of_n: {
      if (!scheme.m || *scheme.m < 1 || *scheme.m > n) {
        throw ConfigError("m_of_n scheme needs 1 <= m <= n");
      }
      for (Index i = 0; i < *scheme.m; ++i) {
        w[static_cast<Index>(stream.next_below(static_cast<std::uint64_t>(n)))] += 1.0;
      }
      w *= std::sqrt(static_cast<double>(n) / static_cast<double>(*scheme.m));
      break;
    }
    case WeightKind::subsampling: {
      if (!scheme.m || *scheme.m < 1 || *scheme.m >= n) {
        throw ConfigError("subsampling scheme needs 1 <= m < n");
      }
      const Index m = *scheme.m;
      // Partial Fisher-Yates over the index vector picks m positions.
      std::vector<Index> idx(static_cast<std::size_t>(n));
      std::iota(idx.begin(), idx.end(), Index{0});
      const double value = static_cast<double>(n) /
                           std::sqrt(static_cast<double>(n - m) * static_cast<double>(m));
      for (Index i = 0; i < m; ++i) {
        const Index j =
            i + static_cast<Index>(stream.next_below(static_cast<std::uint64_t>(n - i)));
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
        w[idx[static_cast<std::size_t>(i)]] = value;
      }
      break;
    }
  }
  const double total = w.sum();
  if (!(total > 0.0)) throw DegenerateDraws("bootstrap weights sum to zero");
  w *= static_cast<double>(n) / total;
  return w;
}

double empirical_quantile(const VectorRef& draws, double p) {
  const Index B = draws.size();
  if (B < 1) throw DegenerateDraws("no draws");
  std::vector<double> sorted(draws.data(), draws.data() + B);
  std::sort(sorted.begin(), sorted.end());
  Index idx = static_cast<Index>(std::ceil(p * static_cast<double>(B)));
  idx = std::max<Index>(1, std::min(idx, B));
  return sorted[static_cast<std::size_t>(idx - 1)];
}

double bootstrap_se(const VectorRef& scaled_draws, Index n) {
  if (scaled_draws.size() < 20) throw ConfigError("bootstrap_se needs at least 20 draws");
  const double iqr =
      empirical_quantile(scaled_draws, 0.75) - empirical_quantile(scaled_draws, 0.25);
  if (!(iqr > 0.0)) throw DegenerateDraws("bootstrap draws have zero interquartile range");
  return iqr / kNormalIqr / std::sqrt(static_cast<double>(n));
}

std::pair<double, double> bootstrap_ci(double point, const VectorRef& scaled_draws, double alpha,
                                       Index n) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0,1)");
  const double sigma_scaled =
      (empirical_quantile(scaled_draws, 0.75) - empirical_quantile(scaled_draws, 0.25)) /
      kNormalIqr;
  if (!(sigma_scaled > 0.0)) throw DegenerateDraws("bootstrap draws have zero interquartile range");
  const Vector t_stats = scaled_draws.cwiseAbs() / sigma_scaled;
  const double t_hat = empirical_quantile(t_stats, 1.0 - alpha);
  const double half = t_hat * sigma_scaled / std::sqrt(static_cast<double>(n));
  return {point - half, point + half};
}

namespace {

bool needs_dr(const std::vector<EstimandKey>& items) {
  for (const auto& item : items) {
    switch (item.method) {
      case Method::rrr:
      case Method::rrrx_additive:
      case Method::rrrx_interacted:
        break;
      default:
        return true;
    }
  }
  return false;
}

bool needs_marginal(const std::vector<EstimandKey>& items) {
  for (const auto& item : items) {
    switch (item.method) {
      case Method::rrr:
      case Method::rrrx_additive:
      case Method::rrrx_interacted:
        return true;
      default:
        break;
    }
  }
  return false;
}

double group_value(Method method, const RankVector& u, const RankVector& v,
                   const std::vector<std::string>& groups, const std::string& label,
                   const VectorRef& weights) {
  std::vector<Index> idx;
  for (Index i = 0; i < u.n(); ++i) {
    if (groups[static_cast<std::size_t>(i)] == label) idx.push_back(i);
  }
  if (idx.empty()) throw InputMismatch("group label '" + label + "' has no observations");
  const Index m = static_cast<Index>(idx.size());
  Vector gu(m), gv(m), gw(m);
  for (Index i = 0; i < m; ++i) {
    gu[i] = u.values[idx[static_cast<std::size_t>(i)]];
    gv[i] = v.values[idx[static_cast<std::size_t>(i)]];
    gw[i] = weights[idx[static_cast<std::size_t>(i)]];
  }
  return subgroup_method_value(method, gu, gv, gw);
}

}  // namespace

Vector evaluate_weighted(const EstimationProblem& problem, const VectorRef& weights,
                         PipelineIntermediates* intermediates) {
  const Index n = problem.data_u.n();
  if (weights.size() != n) throw InputMismatch("evaluate_weighted: weights length");

  RankVector u_cond, v_cond, u_marg, v_marg;
  DrFit fit_y, fit_w;
  const bool with_dr = needs_dr(problem.items) || problem.force_dr;
  if (with_dr) {
    fit_y = fit_dr(problem.data_u, Variable::y, problem.grid_y, problem.link, weights);
    fit_w = fit_dr(problem.data_v, Variable::w, problem.grid_w, problem.link, weights);
    if (problem.tail) {
      fit_y.lower_tail = fit_tail(fit_y, problem.data_u, TailSide::lower, problem.tail_m, weights);
      fit_y.upper_tail = fit_tail(fit_y, problem.data_u, TailSide::upper, problem.tail_m, weights);
      fit_w.lower_tail = fit_tail(fit_w, problem.data_v, TailSide::lower, problem.tail_m, weights);
      fit_w.upper_tail = fit_tail(fit_w, problem.data_v, TailSide::upper, problem.tail_m, weights);
    }
    u_cond = conditional_ranks(fit_y, problem.data_u);
    v_cond = conditional_ranks(fit_w, problem.data_v);
  }
  if (needs_marginal(problem.items) || intermediates != nullptr) {
    u_marg = weighted_marginal_ranks(problem.data_u.y, weights, Variable::y);
    v_marg = weighted_marginal_ranks(problem.data_v.w, weights, Variable::w);
  }

  Vector out(static_cast<Index>(problem.items.size()));
  for (std::size_t k = 0; k < problem.items.size(); ++k) {
    const auto& item = problem.items[k];
    double value = 0.0;
    switch (item.method) {
      case Method::rrr:
        value = item.group ? group_value(Method::rrr, u_marg, v_marg, problem.groups, *item.group,
                                         weights)
                           : pearson_corr(u_marg.values, v_marg.values, weights);
        break;
      case Method::rrrx_additive:
        if (item.group) throw ConfigError("rrrx methods do not support subgroup analysis");
        value = rrrx_additive_value(u_marg.values, v_marg.values, problem.rrrx_covariates, weights);
        break;
      case Method::rrrx_interacted:
        if (item.group) throw ConfigError("rrrx methods do not support subgroup analysis");
        value =
            rrrx_interacted_value(u_marg.values, v_marg.values, problem.rrrx_covariates, weights);
        break;
      default:
        value = item.group ? group_value(item.method, u_cond, v_cond, problem.groups, *item.group,
                                         weights)
                           : method_value(item.method, u_cond.values, v_cond.values, weights);
        break;
    }
    out[static_cast<Index>(k)] = value;
  }

  if (intermediates != nullptr) {
    intermediates->fit_y = std::move(fit_y);
    intermediates->fit_w = std::move(fit_w);
    intermediates->u_cond = std::move(u_cond);
    intermediates->v_cond = std::move(v_cond);
    intermediates->u_marg = std::move(u_marg);
    intermediates->v_marg = std::move(v_marg);
    intermediates->has_dr = with_dr;
  }
  return out;
}

double bootstrap_draw(const EstimationProblem& problem, const VectorRef& weights, Method method) {
  EstimationProblem single = problem;
  single.items = {EstimandKey{method, std::nullopt}};
  return evaluate_weighted(single, weights)[0];
}

std::vector<BootstrapReport> run_bootstrap(const EstimationProblem& problem,
                                           const VectorRef& point_values,
                                           const BootstrapConfig& config) {
  const Index n = problem.data_u.n();
  const Index items = static_cast<Index>(problem.items.size());
  if (point_values.size() != items) throw InputMismatch("run_bootstrap: point values mismatch");
  if (config.B < 1) throw ConfigError("bootstrap needs B >= 1");

  Matrix draws(config.B, items);
  std::vector<char> ok(static_cast<std::size_t>(config.B), 0);
  parallel_for(config.B, config.threads, [&](Index b) {
    rng::Stream stream(config.seed, static_cast<std::uint64_t>(b) + 1);
    const Vector weights = gen_weights(config.scheme, n, stream);
    try {
      draws.row(b) = evaluate_weighted(problem, weights).transpose();
      ok[static_cast<std::size_t>(b)] = 1;
    } catch (const Error&) {
      ok[static_cast<std::size_t>(b)] = 0;  // replicate dropped, counted below
    }
  });

  int failed = 0;
  for (char flag : ok) {
    if (!flag) ++failed;
  }
  if (failed > 0.02 * config.B) {
    throw BootstrapFailure(std::to_string(failed) + " of " + std::to_string(config.B) +
                           " bootstrap replicates failed (>2%)");
  }

  const double sqrt_n = std::sqrt(static_cast<double>(n));
  std::vector<BootstrapReport> reports;
  reports.reserve(static_cast<std::size_t>(items));
  for (Index k = 0; k < items; ++k) {
    BootstrapReport rep;
    rep.method = problem.items[static_cast<std::size_t>(k)].method;
    rep.group = problem.items[static_cast<std::size_t>(k)].group;
    rep.estimate = point_values[k];
    rep.alpha = config.alpha;
    rep.B = config.B;
    rep.scheme = config.scheme;
    rep.seed = config.seed;
    rep.failed_replicates = failed;
    rep.n = n;
    rep.draws.resize(config.B - failed);
    Index pos = 0;
    for (Index b = 0; b < config.B; ++b) {
      if (ok[static_cast<std::size_t>(b)]) {
        rep.draws[pos++] = sqrt_n * (draws(b, k) - point_values[k]);
      }
    }
    rep.se = bootstrap_se(rep.draws, n);
    std::tie(rep.ci_lo, rep.ci_hi) = bootstrap_ci(point_values[k], rep.draws, config.alpha, n);
    reports.push_back(std::move(rep));
  }
  return reports;
}

}  // namespace crrr
