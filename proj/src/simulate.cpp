#include "crrr/simulate.hpp"

#include <cmath>
#include <sstream>

#include "crrr/parallel.hpp"

namespace crrr {

std::string to_string(DgpKind k) {
  return k == DgpKind::conceptual ? "conceptual" : "bivariate_mc";
}

DgpKind dgp_from_string(const std::string& name) {
  if (name == "conceptual") return DgpKind::conceptual;
  if (name == "bivariate_mc" || name == "bivariate") return DgpKind::bivariate_mc;
  throw ConfigError("unknown design '" + name + "'");
}

Dataset gen_data(const DgpSpec& spec) {
  if (spec.n < 1) throw ConfigError("gen_data: n must be positive");
  if (spec.kind == DgpKind::bivariate_mc && !(spec.c > -1.0 && spec.c < 1.0)) {
    throw ConfigError("gen_data: c must lie in (-1,1)");
  }
  rng::Stream stream(spec.seed, 0);
  Dataset data;
  data.y.resize(spec.n);
  data.w.resize(spec.n);
  data.x.resize(spec.n, 2);
  data.x.col(0).setOnes();
  data.covariate_names = {"(intercept)", "x"};

  if (spec.kind == DgpKind::conceptual) {
    data.group.resize(static_cast<std::size_t>(spec.n));
    const double rho = 0.6;
    const double comp = std::sqrt(1.0 - rho * rho);
    for (Index i = 0; i < spec.n; ++i) {
      const double x = stream.next_uniform() < 0.5 ? 0.0 : 1.0;
      const double z1 = stream.next_normal();
      const double z2 = stream.next_normal();
      data.y[i] = 165.0 + 4.0 * z1;
      data.w[i] = 180.0 - spec.delta * x + 4.0 * (rho * z1 + comp * z2);
      data.x(i, 1) = x;
      data.group[static_cast<std::size_t>(i)] = x == 0.0 ? "0" : "1";
    }
  } else {
    const double comp = std::sqrt(1.0 - spec.c * spec.c);
    for (Index i = 0; i < spec.n; ++i) {
      const double x = stream.next_normal();
      const double z1 = stream.next_normal();
      const double z2 = stream.next_normal();
      data.y[i] = x + z1;
      data.w[i] = x + spec.c * z1 + comp * z2;
      data.x(i, 1) = x;
    }
  }
  return data;
}

OracleRanks oracle_ranks(const DgpSpec& spec, const Dataset& data) {
  if (data.n() != spec.n) throw InputMismatch("oracle_ranks: dataset size does not match spec");
  if (data.dim() < 2) throw InputMismatch("oracle_ranks: dataset lacks the x column");

  const Index n = data.n();
  OracleRanks out;
  out.u.values.resize(n);
  out.v.values.resize(n);
  out.u_marg.values.resize(n);
  out.v_marg.values.resize(n);

  if (spec.kind == DgpKind::conceptual) {
    for (Index i = 0; i < n; ++i) {
      const double x = data.x(i, 1);
      if (x != 0.0 && x != 1.0) {
        throw InputMismatch("oracle_ranks: conceptual design requires binary x");
      }
      out.u.values[i] = norm_cdf((data.y[i] - 165.0) / 4.0);
      out.v.values[i] = norm_cdf((data.w[i] - (180.0 - spec.delta * x)) / 4.0);
      out.u_marg.values[i] = norm_cdf((data.y[i] - 165.0) / 4.0);
      out.v_marg.values[i] = 0.5 * norm_cdf((data.w[i] - 180.0) / 4.0) +
                             0.5 * norm_cdf((data.w[i] - 180.0 + spec.delta) / 4.0);
    }
  } else {
    const double root2 = std::sqrt(2.0);
    for (Index i = 0; i < n; ++i) {
      const double x = data.x(i, 1);
      out.u.values[i] = norm_cdf(data.y[i] - x);
      out.v.values[i] = norm_cdf(data.w[i] - x);
      out.u_marg.values[i] = norm_cdf(data.y[i] / root2);
      out.v_marg.values[i] = norm_cdf(data.w[i] / root2);
    }
  }

  const std::uint64_t sig = covariate_signature(data.covariate_names);
  out.u.kind = out.v.kind = RankKind::conditional;
  out.u_marg.kind = out.v_marg.kind = RankKind::marginal;
  out.u.source = out.u_marg.source = Variable::y;
  out.v.source = out.v_marg.source = Variable::w;
  out.u.covariate_sig = out.v.covariate_sig = sig;
  return out;
}

double bvn_spearman(double c) {
  if (!(std::fabs(c) <= 1.0)) throw DomainError("bvn_spearman requires |c| <= 1");
  return 6.0 * std::asin(0.5 * c) / M_PI;
}

McReport run_monte_carlo(const std::vector<McCell>& cells, const McConfig& config) {
  if (config.reps < 50) throw ConfigError("run_monte_carlo needs reps >= 50");
  if (config.boot_reps < 50) throw ConfigError("run_monte_carlo needs boot_reps >= 50");

  McReport report;
  report.config = config;
  const LinkFunction link{config.link};

  for (std::size_t cell_idx = 0; cell_idx < cells.size(); ++cell_idx) {
    const McCell& cell = cells[cell_idx];
    const double truth = bvn_spearman(cell.c);

    Vector estimates = Vector::Constant(config.reps, std::nan(""));
    Vector ci_lo(config.reps), ci_hi(config.reps);
    std::vector<char> ok(static_cast<std::size_t>(config.reps), 0);

    parallel_for(config.reps, config.threads, [&](Index rep) {
      const std::uint64_t rep_seed =
          rng::derive_seed(config.seed, static_cast<std::uint64_t>(cell_idx),
                           static_cast<std::uint64_t>(rep));
      try {
        DgpSpec spec{DgpKind::bivariate_mc, 0.0, cell.c, cell.n, rep_seed};
        const Dataset data = gen_data(spec);

        EstimationProblem problem;
        problem.data_u = data;
        problem.data_v = data;
        problem.grid_y = build_grid(data.y, config.grid_points, config.grid_lo, config.grid_hi);
        problem.grid_w = build_grid(data.w, config.grid_points, config.grid_lo, config.grid_hi);
        problem.link = link;
        problem.tail = config.tail;
        problem.tail_m = config.tail_m;
        problem.items = {EstimandKey{config.method, std::nullopt}};

        const Vector point = evaluate_weighted(problem, Vector::Ones(data.n()));

        BootstrapConfig boot;
        boot.scheme = config.scheme;
        boot.B = config.boot_reps;
        boot.alpha = config.alpha;
        boot.seed = rep_seed;
        boot.threads = 1;  // replicates already run in parallel
        const auto reports = run_bootstrap(problem, point, boot);

        estimates[rep] = point[0];
        ci_lo[rep] = reports[0].ci_lo;
        ci_hi[rep] = reports[0].ci_hi;
        ok[static_cast<std::size_t>(rep)] = 1;
      } catch (const Error&) {
        ok[static_cast<std::size_t>(rep)] = 0;
      }
    });

    McCellResult result;
    result.c = cell.c;
    result.n = cell.n;
    result.truth = truth;
    result.reps = config.reps;
    result.boot_reps = config.boot_reps;

    int good = 0;
    double sum = 0.0, sum_sq_err = 0.0, covered = 0.0, length = 0.0;
    for (Index rep = 0; rep < config.reps; ++rep) {
      if (!ok[static_cast<std::size_t>(rep)]) continue;
      ++good;
      sum += estimates[rep];
      sum_sq_err += (estimates[rep] - truth) * (estimates[rep] - truth);
      covered += (ci_lo[rep] <= truth && truth <= ci_hi[rep]) ? 1.0 : 0.0;
      length += ci_hi[rep] - ci_lo[rep];
    }
    result.failed = config.reps - good;
    if (result.failed > 0.02 * config.reps) {
      throw BootstrapFailure("monte carlo cell (c=" + std::to_string(cell.c) + ", n=" +
                             std::to_string(cell.n) + "): " + std::to_string(result.failed) +
                             " of " + std::to_string(config.reps) + " replicates failed (>2%)");
    }
    const double mean = sum / good;
    result.bias = mean - truth;
    result.rmse = std::sqrt(sum_sq_err / good);
    result.sd = std::sqrt(std::max(0.0, result.rmse * result.rmse - result.bias * result.bias));
    result.coverage = covered / good;
    result.mean_ci_length = length / good;
    report.cells.push_back(result);
  }
  return report;
}

std::string mc_to_csv(const McReport& report) {
  std::ostringstream out;
  out.precision(10);
  out << "c,n,rmse,bias,sd,coverage\n";
  for (const auto& cell : report.cells) {
    out << cell.c << ',' << cell.n << ',' << cell.rmse << ',' << cell.bias << ',' << cell.sd << ','
        << cell.coverage << '\n';
  }
  return out.str();
}

}  // namespace crrr
