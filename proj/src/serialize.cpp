#include "crrr/serialize.hpp"

namespace crrr {

OrderedJson to_json(const SlopeEstimate& estimate) {
  OrderedJson j;
  j["method"] = to_string(estimate.method);
  j["value"] = estimate.value;
  j["n"] = estimate.n;
  j["group"] = estimate.group ? OrderedJson(*estimate.group) : OrderedJson(nullptr);
  return j;
}

OrderedJson to_json(const BootstrapReport& report) {
  OrderedJson j;
  j["method"] = to_string(report.method);
  j["estimate"] = report.estimate;
  j["se"] = report.se;
  j["ci"] = {report.ci_lo, report.ci_hi};
  j["alpha"] = report.alpha;
  j["B"] = report.B;
  j["scheme"] = to_string(report.scheme.kind);
  if (report.scheme.m) j["m"] = *report.scheme.m;
  j["seed"] = report.seed;
  j["failed_replicates"] = report.failed_replicates;
  return j;
}

OrderedJson to_json(const TransitionMatrix& tm) {
  OrderedJson j;
  j["k"] = tm.k;
  j["kind"] = to_string(tm.kind);
  j["n"] = tm.n;
  auto matrix_to_json = [&](const Matrix& m) {
    OrderedJson rows = OrderedJson::array();
    for (Index r = 0; r < m.rows(); ++r) {
      OrderedJson row = OrderedJson::array();
      for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  j["counts"] = matrix_to_json(tm.counts);
  j["deviations"] = matrix_to_json(tm.deviations);
  OrderedJson row_margins = OrderedJson::array();
  OrderedJson col_margins = OrderedJson::array();
  for (Index r = 0; r < tm.counts.rows(); ++r) {
    row_margins.push_back(tm.counts.row(r).sum() / static_cast<double>(tm.n));
  }
  for (Index c = 0; c < tm.counts.cols(); ++c) {
    col_margins.push_back(tm.counts.col(c).sum() / static_cast<double>(tm.n));
  }
  j["row_margins"] = std::move(row_margins);
  j["col_margins"] = std::move(col_margins);
  return j;
}

OrderedJson to_json(const McReport& report) {
  OrderedJson j;
  OrderedJson config;
  config["reps"] = report.config.reps;
  config["boot_reps"] = report.config.boot_reps;
  config["link"] = to_string(report.config.link);
  config["grid_points"] = report.config.grid_points;
  config["grid_lo"] = report.config.grid_lo;
  config["grid_hi"] = report.config.grid_hi;
  config["tail"] = report.config.tail;
  config["method"] = to_string(report.config.method);
  config["scheme"] = to_string(report.config.scheme.kind);
  config["alpha"] = report.config.alpha;
  config["seed"] = report.config.seed;
  config["generator"] = report.generator;
  j["config"] = std::move(config);
  OrderedJson cells = OrderedJson::array();
  for (const auto& cell : report.cells) {
    OrderedJson c;
    c["c"] = cell.c;
    c["n"] = cell.n;
    c["truth"] = cell.truth;
    c["rmse"] = cell.rmse;
    c["bias"] = cell.bias;
    c["sd"] = cell.sd;
    c["coverage"] = cell.coverage;
    c["mean_ci_length"] = cell.mean_ci_length;
    c["reps"] = cell.reps;
    c["boot_reps"] = cell.boot_reps;
    c["failed"] = cell.failed;
    cells.push_back(std::move(c));
  }
  j["cells"] = std::move(cells);
  return j;
}

OrderedJson diagnostics_json(const DrFit& fit) {
  OrderedJson j;
  j["variable"] = fit.variable_label;
  j["link"] = to_string(fit.link.kind);
  j["thresholds"] = fit.grid.size();
  OrderedJson iterations = OrderedJson::array();
  OrderedJson separated = OrderedJson::array();
  OrderedJson saturated = OrderedJson::array();
  for (std::size_t t = 0; t < fit.diagnostics.size(); ++t) {
    iterations.push_back(fit.diagnostics[t].iterations);
    if (fit.diagnostics[t].separated) separated.push_back(t);
    if (fit.diagnostics[t].saturated) saturated.push_back(t);
  }
  j["iterations"] = std::move(iterations);
  j["separated_thresholds"] = std::move(separated);
  j["saturated_thresholds"] = std::move(saturated);
  if (fit.lower_tail) {
    j["lower_tail"] = {{"anchor", fit.lower_tail->anchor},
                       {"pivot", fit.lower_tail->pivot},
                       {"scale", fit.lower_tail->scale}};
  }
  if (fit.upper_tail) {
    j["upper_tail"] = {{"anchor", fit.upper_tail->anchor},
                       {"pivot", fit.upper_tail->pivot},
                       {"scale", fit.upper_tail->scale}};
  }
  return j;
}

}  // namespace crrr
