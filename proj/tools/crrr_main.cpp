#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "crrr/pipeline.hpp"
#include "crrr/simulate.hpp"
#include "crrr/transition.hpp"

namespace {

int log_level() {
  const char* env = std::getenv("CRRR_LOG");
  if (env == nullptr) return 1;
  return std::atoi(env);
}

void info(const std::string& message) {
  if (log_level() >= 1) std::cerr << "crrr: " << message << "\n";
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw crrr::ConfigError("cannot write '" + path + "'");
  out << text;
}

void emit_json(const crrr::OrderedJson& report, const std::string& output_path) {
  const std::string text = report.dump(2) + "\n";
  if (output_path.empty()) {
    std::cout << text;
  } else {
    write_text(output_path, text);
    info("wrote " + output_path);
  }
}

std::string csv_escape(const crrr::OrderedJson& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  std::ostringstream out;
  out.precision(17);
  if (v.is_number_float()) {
    out << v.get<double>();
  } else {
    out << v;
  }
  return out.str();
}

void write_estimates_csv(const std::string& path, const crrr::OrderedJson& entries) {
  std::ostringstream out;
  out << "method,group,value,n,se,ci_lo,ci_hi\n";
  for (const auto& e : entries) {
    out << e["method"].get<std::string>() << ',' << csv_escape(e["group"]) << ','
        << csv_escape(e["value"]) << ',' << csv_escape(e["n"]) << ',' << csv_escape(e["se"]) << ',';
    if (e.contains("ci") && !e["ci"].is_null()) {
      out << csv_escape(e["ci"][0]) << ',' << csv_escape(e["ci"][1]);
    } else {
      out << ',';
    }
    out << '\n';
  }
  write_text(path, out.str());
}

void write_deviations_csv(const std::string& path, const crrr::OrderedJson& tm) {
  std::ostringstream out;
  out.precision(12);
  for (const auto& row : tm["deviations"]) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out << ',';
      out << row[c].get<double>();
    }
    out << '\n';
  }
  write_text(path, out.str());
}

void flatten_csv_tables(const crrr::OrderedJson& report, const std::string& prefix) {
  write_estimates_csv(prefix + "_estimates.csv", report["estimates"]);
  if (report.contains("subgroups")) {
    write_estimates_csv(prefix + "_subgroups.csv", report["subgroups"]);
  }
  if (report.contains("transition")) {
    write_deviations_csv(prefix + "_transition_marginal.csv", report["transition"]["marginal"]);
    write_deviations_csv(prefix + "_transition_conditional.csv",
                         report["transition"]["conditional"]);
  }
  info("wrote " + prefix + "_*.csv");
}

struct CommonOpts {
  crrr::RunConfig config;
  std::string link = "logit";
  std::string scheme = "empirical";
  long long boot_m = 0;
  std::string methods;
  std::string output;
  std::string csv_prefix;
  long long seed = -1;
};

void add_data_options(CLI::App* cmd, CommonOpts& opts, bool need_covariates) {
  cmd->add_option("--input", opts.config.input, "input CSV (header row, comma-delimited)")
      ->required();
  cmd->add_option("--y", opts.config.y_col, "child/outcome column")->required();
  cmd->add_option("--w", opts.config.w_col, "father/conditioning column")->required();
  auto* cov = cmd->add_option("--covariates", opts.config.covariates,
                              "numeric covariate columns (comma separated)")
                  ->delimiter(',');
  if (need_covariates) cov->required();
  cmd->add_option("--u-covariates", opts.config.u_covariates,
                  "covariate set for the y-ranks (defaults to --covariates)")
      ->delimiter(',');
  cmd->add_option("--v-covariates", opts.config.v_covariates,
                  "covariate set for the w-ranks (defaults to --covariates)")
      ->delimiter(',');
  cmd->add_option("--group", opts.config.group_col, "group label column");
  cmd->add_option("--output", opts.output, "write the JSON report here instead of stdout");
  cmd->add_option("--csv-prefix", opts.csv_prefix, "also write flattened CSV tables");
  cmd->add_option("--threads", opts.config.threads, "worker threads (0 = all cores)");
}

void add_model_options(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--link", opts.link, "link function: logit or probit");
  cmd->add_option("--grid-points", opts.config.grid_points, "quantile mesh size (default 200)");
  cmd->add_option("--grid-lo", opts.config.grid_lo, "lowest quantile order (default 0.01)");
  cmd->add_option("--grid-hi", opts.config.grid_hi, "highest quantile order (default 0.99)");
  cmd->add_flag("--full-grid", opts.config.use_full_grid,
                "fit at every distinct observed value instead of a quantile mesh");
  cmd->add_flag("--tail", opts.config.tail, "impose the linear tail restrictions (default off)");
  cmd->add_option("--tail-m", opts.config.tail_m, "minimum tail cell size (default 30)");
}

void add_bootstrap_options(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--scheme", opts.scheme,
                  "bootstrap weights: empirical, exponential, wild, m_of_n, subsampling");
  cmd->add_option("--boot-m", opts.boot_m, "m for m_of_n / subsampling schemes");
  cmd->add_option("--B", opts.config.B, "bootstrap replications (default 500; 0 disables)");
  cmd->add_option("--alpha", opts.config.alpha, "confidence level alpha (default 0.05)");
  cmd->add_option("--seed", opts.seed, "RNG seed (required whenever B > 0)");
}

void finalize(CommonOpts& opts) {
  opts.config.link = crrr::link_from_string(opts.link);
  opts.config.scheme.kind = crrr::weight_kind_from_string(opts.scheme);
  if (opts.boot_m > 0) opts.config.scheme.m = static_cast<crrr::Index>(opts.boot_m);
  if (opts.seed >= 0) opts.config.seed = static_cast<std::uint64_t>(opts.seed);
  if (!opts.methods.empty()) {
    opts.config.methods.clear();
    std::istringstream stream(opts.methods);
    std::string token;
    while (std::getline(stream, token, ',')) {
      if (!token.empty()) opts.config.methods.push_back(crrr::method_from_string(token));
    }
  }
}

void run_report(CommonOpts& opts) {
  finalize(opts);
  const crrr::OrderedJson report = crrr::run_estimate(opts.config);
  for (const auto& warning : report["warnings"]) {
    info("warning: " + warning.get<std::string>());
  }
  emit_json(report, opts.output);
  if (!opts.csv_prefix.empty()) flatten_csv_tables(report, opts.csv_prefix);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conditional rank-rank regression via distribution regression"};
  app.require_subcommand(1);

  // --- estimate ---------------------------------------------------------
  CommonOpts est;
  auto* estimate = app.add_subcommand("estimate", "fit ranks and slope estimators on a CSV");
  add_data_options(estimate, est, false);
  add_model_options(estimate, est);
  add_bootstrap_options(estimate, est);
  estimate->add_option("--methods", est.methods,
                       "comma list: rrr,rrrx_additive,rrrx_interacted,crrr_corr,"
                       "crrr_restricted_corr,crrr_fully_restricted,crrr_regression,"
                       "crrr_regression_restricted,crrr_reverse_restricted");
  estimate->add_flag("--subgroup", est.config.subgroup, "per-group estimates (needs --group)");
  estimate->add_flag("--transition", est.config.transition, "include k x k transition matrices");
  estimate->add_option("--transition-k", est.config.transition_k, "transition bins (default 10)");
  estimate->add_flag("--ranks-mode", est.config.ranks_mode,
                     "treat --y/--w as precomputed rank columns; estimators only");
  estimate->add_option("--export-ranks", est.config.export_ranks_path,
                       "write the data with rank columns appended to this CSV");

  // --- subgroup ---------------------------------------------------------
  CommonOpts sub;
  auto* subgroup = app.add_subcommand("subgroup", "per-group slope estimates");
  add_data_options(subgroup, sub, false);
  add_model_options(subgroup, sub);
  add_bootstrap_options(subgroup, sub);
  subgroup->add_option("--methods", sub.methods, "comma list of methods");
  subgroup->get_option("--group")->required();

  // --- transition -------------------------------------------------------
  CommonOpts trans;
  auto* transition = app.add_subcommand("transition", "marginal and conditional rank transition matrices");
  add_data_options(transition, trans, false);
  add_model_options(transition, trans);
  transition->add_option("--k", trans.config.transition_k, "bins per side (default 10)");

  // --- ranks ------------------------------------------------------------
  CommonOpts ranks;
  auto* ranks_cmd = app.add_subcommand("ranks", "export marginal and conditional ranks as CSV");
  add_data_options(ranks_cmd, ranks, false);
  add_model_options(ranks_cmd, ranks);
  std::string ranks_out;
  ranks_cmd->add_option("--ranks-output", ranks_out, "destination CSV")->required();

  // --- simulate ---------------------------------------------------------
  auto* simulate = app.add_subcommand("simulate", "draw a synthetic dataset to CSV");
  std::string sim_design = "conceptual";
  double sim_delta = 0.0, sim_c = 0.5;
  long long sim_n = 0, sim_seed = -1;
  std::string sim_output;
  bool sim_oracle = false;
  simulate->add_option("--design", sim_design, "conceptual or bivariate");
  simulate->add_option("--delta", sim_delta, "location shift (conceptual design)");
  simulate->add_option("--c", sim_c, "conditional correlation (bivariate design)");
  simulate->add_option("--n", sim_n, "sample size")->required();
  simulate->add_option("--seed", sim_seed, "RNG seed")->required();
  simulate->add_option("--sim-output", sim_output, "destination CSV")->required();
  simulate->add_flag("--oracle-ranks", sim_oracle, "append true conditional/marginal ranks");

  // --- mc ---------------------------------------------------------------
  auto* mc = app.add_subcommand("mc", "Monte Carlo study of the full pipeline");
  std::string mc_cells = "0.25:625";
  std::string mc_link = "probit", mc_scheme = "empirical", mc_method = "crrr_corr";
  std::string mc_prefix;
  crrr::McConfig mc_config;
  long long mc_seed = -1;
  mc->add_option("--cells", mc_cells, "cells as c:n pairs, e.g. 0.25:625,0.5:2500");
  mc->add_option("--reps", mc_config.reps, "Monte Carlo replicates per cell (default 500)");
  mc->add_option("--boot-reps", mc_config.boot_reps, "bootstrap replicates (default 100)");
  mc->add_option("--link", mc_link, "link function (default probit)");
  mc->add_option("--grid-points", mc_config.grid_points, "quantile mesh size (default 200)");
  mc->add_option("--grid-lo", mc_config.grid_lo, "lowest order (default 0.01)");
  mc->add_option("--grid-hi", mc_config.grid_hi, "highest order (default 0.99)");
  mc->add_flag("--tail", mc_config.tail, "impose tail restrictions");
  mc->add_option("--tail-m", mc_config.tail_m, "minimum tail cell size");
  mc->add_option("--method", mc_method, "estimator under study (default crrr_corr)");
  mc->add_option("--scheme", mc_scheme, "bootstrap scheme (default empirical)");
  mc->add_option("--alpha", mc_config.alpha, "confidence level alpha (default 0.05)");
  mc->add_option("--seed", mc_seed, "RNG seed")->required();
  mc->add_option("--threads", mc_config.threads, "worker threads (0 = all cores)");
  mc->add_option("--output-prefix", mc_prefix, "write <prefix>.csv and <prefix>.json");

  try {
    app.parse(argc, argv);

    if (*estimate) {
      run_report(est);
    } else if (*subgroup) {
      sub.config.subgroup = true;
      run_report(sub);
    } else if (*transition) {
      trans.config.transition = true;
      trans.config.B = 0;
      trans.config.methods = {crrr::Method::rrr};
      run_report(trans);
    } else if (*ranks_cmd) {
      ranks.config.export_ranks_path = ranks_out;
      ranks.config.B = 0;
      ranks.config.methods = {crrr::Method::rrr};
      run_report(ranks);
    } else if (*simulate) {
      crrr::DgpSpec spec;
      spec.kind = crrr::dgp_from_string(sim_design);
      spec.delta = sim_delta;
      spec.c = sim_c;
      spec.n = static_cast<crrr::Index>(sim_n);
      spec.seed = static_cast<std::uint64_t>(sim_seed);
      const crrr::Dataset data = crrr::gen_data(spec);
      crrr::CsvTable table;
      table.columns = {"y", "w", "x"};
      std::optional<crrr::OracleRanks> oracle;
      if (sim_oracle) {
        oracle = crrr::oracle_ranks(spec, data);
        table.columns.insert(table.columns.end(), {"u", "v", "u_marg", "v_marg"});
      }
      auto fmt = [](double x) {
        std::ostringstream out;
        out.precision(17);
        out << x;
        return out.str();
      };
      for (crrr::Index i = 0; i < data.n(); ++i) {
        std::vector<std::string> row = {fmt(data.y[i]), fmt(data.w[i]), fmt(data.x(i, 1))};
        if (oracle) {
          row.push_back(fmt(oracle->u.values[i]));
          row.push_back(fmt(oracle->v.values[i]));
          row.push_back(fmt(oracle->u_marg.values[i]));
          row.push_back(fmt(oracle->v_marg.values[i]));
        }
        table.rows.push_back(std::move(row));
      }
      crrr::write_csv(sim_output, table);
      info("wrote " + sim_output);
    } else if (*mc) {
      std::vector<crrr::McCell> cells;
      std::istringstream stream(mc_cells);
      std::string token;
      while (std::getline(stream, token, ',')) {
        const auto colon = token.find(':');
        if (colon == std::string::npos) {
          throw crrr::ConfigError("cell '" + token + "' is not of the form c:n");
        }
        crrr::McCell cell;
        cell.c = std::stod(token.substr(0, colon));
        cell.n = static_cast<crrr::Index>(std::stoll(token.substr(colon + 1)));
        cells.push_back(cell);
      }
      mc_config.link = crrr::link_from_string(mc_link);
      mc_config.method = crrr::method_from_string(mc_method);
      mc_config.scheme.kind = crrr::weight_kind_from_string(mc_scheme);
      mc_config.seed = static_cast<std::uint64_t>(mc_seed);
      const crrr::McReport report = crrr::run_monte_carlo(cells, mc_config);
      const std::string csv = crrr::mc_to_csv(report);
      if (mc_prefix.empty()) {
        std::cout << csv;
      } else {
        write_text(mc_prefix + ".csv", csv);
        write_text(mc_prefix + ".json", crrr::to_json(report).dump(2) + "\n");
        info("wrote " + mc_prefix + ".csv and " + mc_prefix + ".json");
      }
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const crrr::Error& e) {
    std::cerr << "crrr: error: " << e.what() << "\n";
    return static_cast<int>(e.error_class());
  } catch (const std::exception& e) {
    std::cerr << "crrr: unexpected error: " << e.what() << "\n";
    return 1;
  }
}
