#pragma once

#include <string>
#include <vector>

#include "crrr/types.hpp"

namespace crrr {

/// Plain comma-delimited table with a header row. Cells are kept verbatim;
/// numeric parsing happens at ingestion.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  Index col_index(const std::string& name) const;  // throws MissingColumn
};

CsvTable read_csv(const std::string& path);
void write_csv(const std::string& path, const CsvTable& table);

struct IngestSpec {
  std::string y_col;
  std::string w_col;
  std::vector<std::string> covariates;
  std::string group_col;  // empty = none
};

struct IngestResult {
  Dataset data;
  std::vector<long> dropped_rows;  // 1-based data row numbers with missing cells
};

/// Parses the declared columns, prepends an intercept, drops rows with
/// missing cells (reporting their numbers) and rejects non-numeric cells with
/// a ParseError naming row and column. Constant covariate columns are
/// rejected.
IngestResult ingest_csv(const std::string& path, const IngestSpec& spec);

/// Strict numeric parse of one cell; empty/NA-style tokens count as missing.
enum class CellParse { ok, missing, bad };
CellParse parse_cell(const std::string& token, double& out);

}  // namespace crrr
