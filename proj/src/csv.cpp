#include "crrr/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace crrr {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream stream(line);
  while (std::getline(stream, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

Index CsvTable::col_index(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw MissingColumn("column '" + name + "' not found");
  return it - columns.begin();
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw EmptyAfterFiltering("'" + path + "' is empty");
  table.columns = split_line(line);
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto cells = split_line(line);
    cells.resize(table.columns.size());
    table.rows.push_back(std::move(cells));
  }
  return table;
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c > 0) out << ',';
    out << table.columns[c];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out << ',';
      out << row[c];
    }
    out << '\n';
  }
}

CellParse parse_cell(const std::string& token, double& out) {
  if (token.empty() || token == "NA" || token == "na" || token == "NaN" || token == "nan" ||
      token == ".") {
    return CellParse::missing;
  }
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto result = std::from_chars(begin, end, out);
  if (result.ec != std::errc{} || result.ptr != end) return CellParse::bad;
  return CellParse::ok;
}

IngestResult ingest_csv(const std::string& path, const IngestSpec& spec) {
  const CsvTable table = read_csv(path);
  const Index y_idx = table.col_index(spec.y_col);
  const Index w_idx = table.col_index(spec.w_col);
  std::vector<Index> cov_idx;
  for (const auto& name : spec.covariates) cov_idx.push_back(table.col_index(name));
  const Index group_idx = spec.group_col.empty() ? -1 : table.col_index(spec.group_col);

  IngestResult out;
  std::vector<double> y, w;
  std::vector<std::vector<double>> covs(spec.covariates.size());
  std::vector<std::string> groups;

  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const long row_number = static_cast<long>(r) + 1;
    double yv = 0.0, wv = 0.0;
    std::vector<double> cv(spec.covariates.size());
    bool missing = false;

    auto take = [&](Index col, const std::string& name, double& slot) {
      switch (parse_cell(row[static_cast<std::size_t>(col)], slot)) {
        case CellParse::ok: break;
        case CellParse::missing: missing = true; break;
        case CellParse::bad:
          throw ParseError(row_number, name,
                           "row " + std::to_string(row_number) + ", column '" + name +
                               "': cannot parse '" + row[static_cast<std::size_t>(col)] + "'");
      }
    };
    take(y_idx, spec.y_col, yv);
    take(w_idx, spec.w_col, wv);
    for (std::size_t c = 0; c < cov_idx.size(); ++c) take(cov_idx[c], spec.covariates[c], cv[c]);
    if (group_idx >= 0 && row[static_cast<std::size_t>(group_idx)].empty()) missing = true;

    if (missing) {
      out.dropped_rows.push_back(row_number);
      continue;
    }
    y.push_back(yv);
    w.push_back(wv);
    for (std::size_t c = 0; c < cv.size(); ++c) covs[c].push_back(cv[c]);
    if (group_idx >= 0) groups.push_back(row[static_cast<std::size_t>(group_idx)]);
  }

  const Index n = static_cast<Index>(y.size());
  if (n == 0) throw EmptyAfterFiltering("no usable rows left after filtering");

  Dataset& data = out.data;
  data.y = Eigen::Map<const Vector>(y.data(), n);
  data.w = Eigen::Map<const Vector>(w.data(), n);
  data.x.resize(n, static_cast<Index>(spec.covariates.size()) + 1);
  data.x.col(0).setOnes();
  data.covariate_names = {"(intercept)"};
  for (std::size_t c = 0; c < covs.size(); ++c) {
    const auto [lo, hi] = std::minmax_element(covs[c].begin(), covs[c].end());
    if (*lo == *hi) {
      throw DegenerateData("covariate '" + spec.covariates[c] + "' is constant");
    }
    data.x.col(static_cast<Index>(c) + 1) = Eigen::Map<const Vector>(covs[c].data(), n);
    data.covariate_names.push_back(spec.covariates[c]);
  }
  data.group = std::move(groups);
  return out;
}

}  // namespace crrr
