#include "crrr/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "crrr/grid.hpp"
#include "crrr/rng.hpp"
#include "crrr/transition.hpp"

namespace crrr {

std::vector<Method> default_methods() {
  return {Method::crrr_corr,       Method::crrr_fully_restricted,
          Method::crrr_regression, Method::crrr_regression_restricted,
          Method::rrr,             Method::rrrx_additive};
}

namespace {

bool is_rrrx(Method m) { return m == Method::rrrx_additive || m == Method::rrrx_interacted; }

bool has_ties(const Vector& values) {
  std::vector<double> sorted(values.data(), values.data() + values.size());
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

std::string hex_signature(std::uint64_t sig) {
  if (sig == 0) return "";
  std::ostringstream out;
  out << std::hex << sig;
  return out.str();
}

OrderedJson config_echo(const RunConfig& config, const std::vector<std::string>& u_cov,
                        const std::vector<std::string>& v_cov) {
  OrderedJson j;
  j["input"] = config.input;
  j["y"] = config.y_col;
  j["w"] = config.w_col;
  j["u_covariates"] = u_cov;
  j["v_covariates"] = v_cov;
  j["group"] = config.group_col;
  j["link"] = to_string(config.link);
  j["grid_points"] = config.grid_points;
  j["grid_lo"] = config.grid_lo;
  j["grid_hi"] = config.grid_hi;
  j["full_grid"] = config.use_full_grid;
  j["tail"] = config.tail;
  j["tail_m"] = config.tail_m;
  OrderedJson methods = OrderedJson::array();
  for (Method m : config.methods) methods.push_back(to_string(m));
  j["methods"] = std::move(methods);
  OrderedJson boot;
  boot["scheme"] = to_string(config.scheme.kind);
  if (config.scheme.m) boot["m"] = *config.scheme.m;
  boot["B"] = config.B;
  boot["alpha"] = config.alpha;
  boot["seed"] = config.seed ? OrderedJson(*config.seed) : OrderedJson(nullptr);
  boot["generator"] = rng::kGeneratorName;
  j["bootstrap"] = std::move(boot);
  j["subgroup"] = config.subgroup;
  j["transition"] = config.transition;
  j["transition_k"] = config.transition_k;
  j["ranks_mode"] = config.ranks_mode;
  j["threads"] = config.threads;
  return j;
}

void validate(const RunConfig& config, const Dataset& data) {
  if (config.methods.empty()) throw ConfigError("no methods requested");
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) throw ConfigError("alpha must lie in (0,1)");
  if (config.transition && config.transition_k < 2) throw ConfigError("transition needs k >= 2");
  if (config.B > 0 && !config.ranks_mode && !config.seed) {
    throw ConfigError("a seed is required when bootstrapping (B > 0)");
  }
  if (config.subgroup && data.group.empty()) {
    throw ConfigError("subgroup analysis needs a group column");
  }
  if (config.ranks_mode) {
    for (Method m : config.methods) {
      if (is_rrrx(m)) throw ConfigError("rrrx methods are unavailable in ranks mode");
    }
  }
}

OrderedJson estimate_entry(const EstimandKey& key, double value, Index n,
                           const BootstrapReport* boot) {
  OrderedJson j;
  j["method"] = to_string(key.method);
  j["group"] = key.group ? OrderedJson(*key.group) : OrderedJson(nullptr);
  j["value"] = value;
  j["n"] = n;
  if (boot != nullptr) {
    j["se"] = boot->se;
    j["ci"] = {boot->ci_lo, boot->ci_hi};
    j["alpha"] = boot->alpha;
    j["B"] = boot->B;
    j["failed_replicates"] = boot->failed_replicates;
  } else {
    j["se"] = nullptr;
    j["ci"] = nullptr;
  }
  return j;
}

void export_ranks_csv(const std::string& path, const Dataset& data,
                      const PipelineIntermediates& inter) {
  CsvTable table;
  table.columns = {"y", "w"};
  for (std::size_t c = 1; c < data.covariate_names.size(); ++c) {
    table.columns.push_back(data.covariate_names[c]);
  }
  if (!data.group.empty()) table.columns.push_back("group");
  const bool with_cond = inter.has_dr;
  if (with_cond) {
    table.columns.push_back("u_cond");
    table.columns.push_back("v_cond");
  }
  table.columns.push_back("u_marg");
  table.columns.push_back("v_marg");

  auto fmt = [](double x) {
    std::ostringstream out;
    out.precision(17);
    out << x;
    return out.str();
  };
  for (Index i = 0; i < data.n(); ++i) {
    std::vector<std::string> row;
    row.push_back(fmt(data.y[i]));
    row.push_back(fmt(data.w[i]));
    for (Index c = 1; c < data.dim(); ++c) row.push_back(fmt(data.x(i, c)));
    if (!data.group.empty()) row.push_back(data.group[static_cast<std::size_t>(i)]);
    if (with_cond) {
      row.push_back(fmt(inter.u_cond.values[i]));
      row.push_back(fmt(inter.v_cond.values[i]));
    }
    row.push_back(fmt(inter.u_marg.values[i]));
    row.push_back(fmt(inter.v_marg.values[i]));
    table.rows.push_back(std::move(row));
  }
  write_csv(path, table);
}

OrderedJson run_ranks_mode(const Dataset& data, const RunConfig& config,
                           const std::vector<long>& dropped_rows) {
  for (Index i = 0; i < data.n(); ++i) {
    if (!(data.y[i] > 0.0 && data.y[i] <= 1.0) || !(data.w[i] > 0.0 && data.w[i] <= 1.0)) {
      throw DegenerateData("ranks mode requires rank columns inside (0,1]");
    }
  }
  RankVector u, v;
  u.values = data.y;
  v.values = data.w;
  u.kind = v.kind = RankKind::conditional;
  u.source = Variable::y;
  v.source = Variable::w;
  const Vector ones = Vector::Ones(data.n());

  OrderedJson report;
  report["tool"] = "crrr";
  report["config"] = config_echo(config, {}, {});
  report["n"] = data.n();
  report["dropped_rows"] = dropped_rows;
  report["warnings"] = OrderedJson::array();
  OrderedJson estimates = OrderedJson::array();
  for (Method m : config.methods) {
    const double value = method_value(m, u.values, v.values, ones);
    estimates.push_back(estimate_entry(EstimandKey{m, std::nullopt}, value, data.n(), nullptr));
  }
  report["estimates"] = std::move(estimates);
  return report;
}

}  // namespace

OrderedJson run_estimate_on(const Dataset& data, const RunConfig& config,
                            const std::vector<long>& dropped_rows) {
  validate(config, data);
  if (config.ranks_mode) return run_ranks_mode(data, config, dropped_rows);

  const std::vector<std::string> u_cov =
      config.u_covariates.empty() ? config.covariates : config.u_covariates;
  const std::vector<std::string> v_cov =
      config.v_covariates.empty() ? config.covariates : config.v_covariates;

  std::vector<std::string> warnings;
  if (has_ties(data.y)) {
    warnings.push_back("ties detected in '" + config.y_col +
                       "'; ranks follow the right-continuous (max-rank) convention");
  }
  if (has_ties(data.w)) {
    warnings.push_back("ties detected in '" + config.w_col +
                       "'; ranks follow the right-continuous (max-rank) convention");
  }
  if (config.subgroup && !config.group_col.empty()) {
    const bool in_u = std::find(u_cov.begin(), u_cov.end(), config.group_col) != u_cov.end();
    const bool in_v = std::find(v_cov.begin(), v_cov.end(), config.group_col) != v_cov.end();
    if (!in_u || !in_v) {
      warnings.push_back("group column '" + config.group_col +
                         "' is not part of the rank covariate set; subgroup slopes lose their "
                         "average conditional rank correlation interpretation");
    }
  }

  EstimationProblem problem;
  problem.data_u = with_covariates(data, u_cov);
  problem.data_v = with_covariates(data, v_cov);
  problem.grid_y = config.use_full_grid
                       ? full_grid(data.y)
                       : build_grid(data.y, config.grid_points, config.grid_lo, config.grid_hi);
  problem.grid_w = config.use_full_grid
                       ? full_grid(data.w)
                       : build_grid(data.w, config.grid_points, config.grid_lo, config.grid_hi);
  problem.link = LinkFunction{config.link};
  problem.tail = config.tail;
  problem.tail_m = config.tail_m;
  problem.groups = data.group;
  problem.force_dr = config.transition || !config.export_ranks_path.empty();

  const bool any_rrrx =
      std::any_of(config.methods.begin(), config.methods.end(), [](Method m) { return is_rrrx(m); });
  if (any_rrrx) {
    if (data.dim() < 2) throw ConfigError("rrrx methods need at least one covariate");
    problem.rrrx_covariates = data.x.rightCols(data.dim() - 1);
  }

  for (Method m : config.methods) problem.items.push_back(EstimandKey{m, std::nullopt});

  std::vector<std::string> labels;
  if (config.subgroup) {
    std::set<std::string> unique(data.group.begin(), data.group.end());
    labels.assign(unique.begin(), unique.end());
    std::map<std::string, Index> sizes;
    for (const auto& g : data.group) ++sizes[g];
    for (const auto& [label, count] : sizes) {
      if (count < kMinGroupSize) {
        throw GroupTooSmall("group '" + label + "' has " + std::to_string(count) +
                            " observations (need " + std::to_string(kMinGroupSize) + ")");
      }
    }
    for (Method m : config.methods) {
      if (is_rrrx(m)) continue;
      for (const auto& label : labels) problem.items.push_back(EstimandKey{m, label});
    }
  }

  PipelineIntermediates inter;
  const Vector point = evaluate_weighted(problem, Vector::Ones(data.n()), &inter);

  std::vector<BootstrapReport> boots;
  if (config.B > 0) {
    BootstrapConfig boot;
    boot.scheme = config.scheme;
    boot.B = config.B;
    boot.alpha = config.alpha;
    boot.seed = *config.seed;
    boot.threads = config.threads;
    boots = run_bootstrap(problem, point, boot);
  }

  OrderedJson report;
  report["tool"] = "crrr";
  report["config"] = config_echo(config, u_cov, v_cov);
  report["n"] = data.n();
  report["dropped_rows"] = dropped_rows;
  report["warnings"] = warnings;
  report["covariate_signatures"] = {
      {"u", hex_signature(covariate_signature(problem.data_u.covariate_names))},
      {"v", hex_signature(covariate_signature(problem.data_v.covariate_names))}};

  OrderedJson estimates = OrderedJson::array();
  OrderedJson subgroup_estimates = OrderedJson::array();
  std::optional<double> rrr_value, crrr_value;
  for (std::size_t k = 0; k < problem.items.size(); ++k) {
    const auto& key = problem.items[k];
    const Index group_n =
        key.group ? static_cast<Index>(std::count(data.group.begin(), data.group.end(), *key.group))
                  : data.n();
    const BootstrapReport* boot = boots.empty() ? nullptr : &boots[k];
    OrderedJson entry = estimate_entry(key, point[static_cast<Index>(k)], group_n, boot);
    if (key.group) {
      subgroup_estimates.push_back(std::move(entry));
    } else {
      if (key.method == Method::rrr) rrr_value = point[static_cast<Index>(k)];
      if (key.method == Method::crrr_corr) crrr_value = point[static_cast<Index>(k)];
      estimates.push_back(std::move(entry));
    }
  }
  report["estimates"] = std::move(estimates);
  report["between_group_persistence"] = (rrr_value && crrr_value)
                                            ? OrderedJson(*rrr_value - *crrr_value)
                                            : OrderedJson(nullptr);
  if (config.subgroup) report["subgroups"] = std::move(subgroup_estimates);

  if (config.transition) {
    OrderedJson transition;
    transition["marginal"] =
        to_json(transition_matrix(inter.u_marg, inter.v_marg, config.transition_k));
    transition["conditional"] =
        to_json(transition_matrix(inter.u_cond, inter.v_cond, config.transition_k));
    report["transition"] = std::move(transition);
  }

  if (inter.has_dr) {
    report["dr_diagnostics"] = {{"y", diagnostics_json(inter.fit_y)},
                                {"w", diagnostics_json(inter.fit_w)}};
  }

  if (!config.export_ranks_path.empty()) {
    export_ranks_csv(config.export_ranks_path, data, inter);
    report["ranks_exported_to"] = config.export_ranks_path;
  }
  return report;
}

OrderedJson run_estimate(const RunConfig& config) {
  IngestSpec spec;
  spec.y_col = config.y_col;
  spec.w_col = config.w_col;
  spec.group_col = config.group_col;
  std::set<std::string> needed(config.covariates.begin(), config.covariates.end());
  needed.insert(config.u_covariates.begin(), config.u_covariates.end());
  needed.insert(config.v_covariates.begin(), config.v_covariates.end());
  spec.covariates.assign(needed.begin(), needed.end());
  if (config.ranks_mode) spec.covariates.clear();

  const IngestResult ingest = ingest_csv(config.input, spec);
  return run_estimate_on(ingest.data, config, ingest.dropped_rows);
}

}  // namespace crrr
