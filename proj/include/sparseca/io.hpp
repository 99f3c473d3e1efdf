#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "sparseca/analysis.hpp"
#include "sparseca/ca.hpp"
#include "sparseca/sparse_factorizer.hpp"
#include "sparseca/tuning.hpp"

namespace sparseca::io {

/// Unvalidated numeric table as parsed from disk.
struct RawTable {
  Matrix counts;
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
};

/// Splits CSV text into records (RFC 4180 quoting, LF or CRLF line ends).
/// Throws ParseError with the 1-based line/column of malformed quoting.
std::vector<std::vector<std::string>> parse_csv(std::string_view text, const std::string& source);

/// Contingency CSV: header row whose first cell is empty or "id", then one
/// row per category with its label followed by nonnegative numbers.
RawTable parse_contingency_csv(std::string_view text, const std::string& source);

/// Removes rows and columns whose counts are all zero.
RawTable drop_empty(RawTable table);

ContingencyTable read_contingency_csv(const std::filesystem::path& path, bool drop_empty_lines = false);

std::string format_contingency_csv(const ContingencyTable& table);
void write_contingency_csv(const ContingencyTable& table, const std::filesystem::path& path);

struct DtmResult {
  ContingencyTable table;
  std::size_t stoplisted_tokens = 0;   ///< distinct tokens removed by the stoplist
  std::size_t rare_tokens = 0;         ///< distinct tokens at or under min_count
  std::size_t capped_tokens = 0;       ///< distinct tokens beyond max_vocab
  std::vector<std::string> dropped_documents;
};

/// Documents x tokens table from `doc_id,token,count` triples. Stoplisted
/// tokens are removed, tokens whose corpus count is <= min_count dropped and
/// the vocabulary capped at the `max_vocab` most frequent tokens (ties by
/// token). Columns are ordered by decreasing frequency, documents by first
/// appearance; documents left empty are dropped and reported.
DtmResult build_dtm(std::string_view token_counts, std::string_view stoplist, double min_count,
                    std::size_t max_vocab, const std::string& source = "tokens");

DtmResult build_dtm_files(const std::filesystem::path& token_counts,
                          const std::filesystem::path& stoplist, double min_count,
                          std::size_t max_vocab);

/// Everything the table writers and map renderers need from a fitted model.
struct ResultTables {
  bool sparse = false;
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  Vector eigenvalues;        ///< one per reported dimension
  Vector percent;            ///< per-dimension share, in percent
  Vector cumulative_percent;
  Vector inertia_percent;    ///< eigenvalue / total inertia, in percent
  Matrix row_weights;        ///< sparse only
  Matrix col_weights;
  Matrix row_contrib;
  Matrix col_contrib;
  Matrix row_coords;
  Matrix col_coords;
};

/// Standard CA: every eigenvalue is listed, coordinates for the fitted dims.
ResultTables tables_from(const ContingencyTable& table, const ca::CaFit& fit);
/// Sparse CA: percentages are projected-variance fractions.
ResultTables tables_from(const ContingencyTable& table, const sparse::SparseCaModel& model);

/// 6 significant digits; zero (either sign) prints as "0".
std::string format_number(double value);

/// Writes eigenvalues.csv, rows.csv and cols.csv into `out_dir`.
void write_tables_csv(const ResultTables& tables, const std::filesystem::path& out_dir);

void write_tuning_csv(const tuning::TuningResult& result, const std::filesystem::path& path);
void write_weight_path_csv(const tuning::WeightPath& path,
                           const std::vector<std::string>& row_labels,
                           const std::vector<std::string>& col_labels,
                           const std::filesystem::path& file);
void write_clusters_csv(const std::vector<std::string>& labels, const std::vector<int>& assignment,
                        const std::filesystem::path& path);
void write_typicality_csv(const analysis::TypicalityTable& table, const std::filesystem::path& path);

/// Reads a whole file; IoError if it cannot be opened.
std::string read_file(const std::filesystem::path& path);
/// Writes a whole file, creating parent directories; IoError on failure.
void write_file(const std::filesystem::path& path, std::string_view contents);

/// Quotes a CSV field when it contains a separator, quote or line break.
std::string csv_field(std::string_view field);

}  // namespace sparseca::io
