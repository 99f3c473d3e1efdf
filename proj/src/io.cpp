#include "sparseca/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "sparseca/errors.hpp"

namespace sparseca::io {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view text, double& out) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

// Records together with the starting line of each and the column of each field.
struct CsvRecords {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;
  std::vector<std::vector<std::size_t>> columns;
};

CsvRecords tokenize(std::string_view text, const std::string& source) {
  CsvRecords out;
  std::vector<std::string> record;
  std::vector<std::size_t> cols;
  std::string field;
  std::size_t line = 1;
  std::size_t col = 1;
  std::size_t record_line = 1;
  std::size_t field_col = 1;
  bool in_quotes = false;
  bool was_quoted = false;
  bool record_open = false;

  auto end_field = [&] {
    record.push_back(std::move(field));
    cols.push_back(field_col);
    field.clear();
    was_quoted = false;
  };
  auto end_record = [&] {
    const bool quoted = was_quoted;
    end_field();
    const bool blank = record.size() == 1 && record[0].empty() && !quoted;
    if (!blank) {
      out.rows.push_back(std::move(record));
      out.lines.push_back(record_line);
      out.columns.push_back(std::move(cols));
    }
    record.clear();
    cols.clear();
    record_open = false;
  };

  std::size_t i = 0;
  if (text.substr(0, 3) == "\xEF\xBB\xBF") i = 3;
  for (; i < text.size(); ++i) {
    const char ch = text[i];
    if (!record_open) {
      record_open = true;
      record_line = line;
      field_col = col;
    }
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
          col += 2;
          continue;
        }
        in_quotes = false;
        ++col;
        if (i + 1 < text.size() && text[i + 1] != ',' && text[i + 1] != '\n' &&
            text[i + 1] != '\r') {
          throw ParseError(source, line, col, "unexpected character after closing quote");
        }
        continue;
      }
      field.push_back(ch);
      if (ch == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      continue;
    }
    switch (ch) {
      case '"':
        if (!trim(field).empty()) throw ParseError(source, line, col, "quote inside unquoted field");
        field.clear();
        in_quotes = true;
        was_quoted = true;
        ++col;
        break;
      case ',':
        end_field();
        ++col;
        field_col = col;
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') break;
        throw ParseError(source, line, col, "bare carriage return");
      case '\n':
        end_record();
        ++line;
        col = 1;
        break;
      default:
        field.push_back(ch);
        ++col;
    }
  }
  if (in_quotes) throw ParseError(source, line, col, "unterminated quoted field");
  if (record_open) end_record();
  return out;
}

void write_csv_line(std::ostringstream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os << ',';
    os << csv_field(fields[i]);
  }
  os << '\n';
}

std::string shortest(double value) {
  if (value == 0.0) return "0";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

}  // namespace

std::string csv_field(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos &&
      (field.empty() || (field.front() != ' ' && field.back() != ' '))) {
    return std::string(field);
  }
  std::string out = "\"";
  for (const char ch : field) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text, const std::string& source) {
  return tokenize(text, source).rows;
}

RawTable parse_contingency_csv(std::string_view text, const std::string& source) {
  const CsvRecords rec = tokenize(text, source);
  if (rec.rows.empty()) throw ParseError(source, 1, 1, "empty file");
  const auto& header = rec.rows.front();
  const std::string_view corner = trim(header.front());
  if (!corner.empty() && corner != "id") {
    throw ParseError(source, rec.lines.front(), 1,
                     "first header cell must be empty or \"id\", got \"" + std::string(corner) + "\"");
  }
  if (header.size() < 2) throw ParseError(source, rec.lines.front(), 1, "header has no columns");

  RawTable out;
  std::set<std::string> seen;
  for (std::size_t j = 1; j < header.size(); ++j) {
    std::string label(trim(header[j]));
    if (label.empty()) throw ParseError(source, rec.lines.front(), rec.columns.front()[j], "empty column label");
    if (!seen.insert(label).second) {
      throw ParseError(source, rec.lines.front(), rec.columns.front()[j],
                       "duplicate column label \"" + label + "\"");
    }
    out.col_labels.push_back(std::move(label));
  }
  const std::size_t width = header.size();
  const std::size_t n_rows = rec.rows.size() - 1;
  if (n_rows == 0) throw ParseError(source, rec.lines.front(), 1, "no data rows");

  out.counts.resize(static_cast<Eigen::Index>(n_rows), static_cast<Eigen::Index>(width - 1));
  seen.clear();
  for (std::size_t r = 1; r < rec.rows.size(); ++r) {
    const auto& row = rec.rows[r];
    const std::size_t line = rec.lines[r];
    if (row.size() != width) {
      throw ParseError(source, line, 1,
                       "expected " + std::to_string(width) + " fields, found " +
                           std::to_string(row.size()));
    }
    std::string label(trim(row[0]));
    if (label.empty()) throw ParseError(source, line, 1, "empty row label");
    if (!seen.insert(label).second) {
      throw ParseError(source, line, 1, "duplicate row label \"" + label + "\"");
    }
    out.row_labels.push_back(std::move(label));
    for (std::size_t j = 1; j < width; ++j) {
      double value = 0.0;
      const std::size_t col = rec.columns[r][j];
      if (!parse_double(row[j], value) || !std::isfinite(value)) {
        throw ParseError(source, line, col, "not a finite number: \"" + row[j] + "\"");
      }
      if (value < 0.0) throw ParseError(source, line, col, "negative count " + row[j]);
      out.counts(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(j - 1)) = value;
    }
  }
  return out;
}

RawTable drop_empty(RawTable table) {
  // Removing an all-zero row leaves column sums unchanged, so one pass each
  // way is enough.
  std::vector<Eigen::Index> keep_rows;
  std::vector<Eigen::Index> keep_cols;
  for (Eigen::Index i = 0; i < table.counts.rows(); ++i) {
    if (table.counts.row(i).sum() > 0.0) keep_rows.push_back(i);
  }
  for (Eigen::Index j = 0; j < table.counts.cols(); ++j) {
    if (table.counts.col(j).sum() > 0.0) keep_cols.push_back(j);
  }
  RawTable out;
  out.counts = table.counts(keep_rows, keep_cols);
  for (const auto i : keep_rows) out.row_labels.push_back(table.row_labels[static_cast<std::size_t>(i)]);
  for (const auto j : keep_cols) out.col_labels.push_back(table.col_labels[static_cast<std::size_t>(j)]);
  return out;
}

ContingencyTable read_contingency_csv(const std::filesystem::path& path, bool drop_empty_lines) {
  RawTable raw = parse_contingency_csv(read_file(path), path.string());
  if (drop_empty_lines) raw = drop_empty(std::move(raw));
  return ContingencyTable(std::move(raw.counts), std::move(raw.row_labels),
                          std::move(raw.col_labels));
}

std::string format_contingency_csv(const ContingencyTable& table) {
  std::ostringstream os;
  std::vector<std::string> fields{""};
  fields.insert(fields.end(), table.col_labels().begin(), table.col_labels().end());
  write_csv_line(os, fields);
  for (Eigen::Index i = 0; i < table.rows(); ++i) {
    fields.assign(1, table.row_labels()[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < table.cols(); ++j) fields.push_back(shortest(table.counts()(i, j)));
    write_csv_line(os, fields);
  }
  return os.str();
}

void write_contingency_csv(const ContingencyTable& table, const std::filesystem::path& path) {
  write_file(path, format_contingency_csv(table));
}

DtmResult build_dtm(std::string_view token_counts, std::string_view stoplist, double min_count,
                    std::size_t max_vocab, const std::string& source) {
  if (max_vocab == 0) throw InputError("build_dtm: max_vocab must be positive");
  if (!(min_count >= 1.0)) throw InputError("build_dtm: min_count must be at least 1");
  const CsvRecords rec = tokenize(token_counts, source);
  if (rec.rows.empty()) throw ParseError(source, 1, 1, "empty file");
  const auto& header = rec.rows.front();
  if (header.size() != 3 || trim(header[0]) != "doc_id" || trim(header[1]) != "token" ||
      trim(header[2]) != "count") {
    throw ParseError(source, rec.lines.front(), 1, "header must be doc_id,token,count");
  }

  std::set<std::string, std::less<>> stop;
  {
    std::istringstream is{std::string(stoplist)};
    std::string word;
    while (is >> word) stop.insert(word);
  }

  std::vector<std::string> docs;
  std::unordered_map<std::string, std::size_t> doc_index;
  std::map<std::string, double> freq;
  std::set<std::string> stopped;
  struct Triple {
    std::size_t doc;
    std::string token;
    double count;
  };
  std::vector<Triple> triples;
  for (std::size_t r = 1; r < rec.rows.size(); ++r) {
    const auto& row = rec.rows[r];
    if (row.size() != 3) {
      throw ParseError(source, rec.lines[r], 1,
                       "expected 3 fields, found " + std::to_string(row.size()));
    }
    std::string doc(trim(row[0]));
    std::string token(trim(row[1]));
    if (doc.empty()) throw ParseError(source, rec.lines[r], 1, "empty doc_id");
    if (token.empty()) throw ParseError(source, rec.lines[r], rec.columns[r][1], "empty token");
    double count = 0.0;
    if (!parse_double(row[2], count) || !std::isfinite(count) || count < 0.0) {
      throw ParseError(source, rec.lines[r], rec.columns[r][2],
                       "count must be a nonnegative number: \"" + row[2] + "\"");
    }
    auto [it, inserted] = doc_index.try_emplace(doc, docs.size());
    if (inserted) docs.push_back(doc);
    if (stop.count(token)) {
      stopped.insert(token);
      continue;
    }
    freq[token] += count;
    triples.push_back({it->second, std::move(token), count});
  }

  DtmResult out{ContingencyTable(Matrix::Ones(1, 1), {"_"}, {"_"}), stopped.size(), 0, 0, {}};
  std::vector<std::pair<std::string, double>> vocab;
  for (const auto& [token, total] : freq) {
    if (total > min_count) {
      vocab.emplace_back(token, total);
    } else {
      ++out.rare_tokens;
    }
  }
  std::stable_sort(vocab.begin(), vocab.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (vocab.size() > max_vocab) {
    out.capped_tokens = vocab.size() - max_vocab;
    vocab.resize(max_vocab);
  }
  if (vocab.empty()) throw InputError("build_dtm: no token survives the filters");

  std::unordered_map<std::string, Eigen::Index> col_of;
  std::vector<std::string> col_labels;
  for (const auto& [token, total] : vocab) {
    col_of.emplace(token, static_cast<Eigen::Index>(col_labels.size()));
    col_labels.push_back(token);
  }
  Matrix counts = Matrix::Zero(static_cast<Eigen::Index>(docs.size()),
                               static_cast<Eigen::Index>(col_labels.size()));
  for (const auto& t : triples) {
    const auto it = col_of.find(t.token);
    if (it != col_of.end()) counts(static_cast<Eigen::Index>(t.doc), it->second) += t.count;
  }

  std::vector<Eigen::Index> keep;
  std::vector<std::string> row_labels;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    if (counts.row(static_cast<Eigen::Index>(d)).sum() > 0.0) {
      keep.push_back(static_cast<Eigen::Index>(d));
      row_labels.push_back(docs[d]);
    } else {
      out.dropped_documents.push_back(docs[d]);
    }
  }
  if (keep.empty()) throw InputError("build_dtm: every document is empty after filtering");
  Matrix kept = counts(keep, Eigen::all);
  out.table = ContingencyTable(std::move(kept), std::move(row_labels), std::move(col_labels));
  return out;
}

DtmResult build_dtm_files(const std::filesystem::path& token_counts,
                          const std::filesystem::path& stoplist, double min_count,
                          std::size_t max_vocab) {
  const std::string stop = stoplist.empty() ? std::string() : read_file(stoplist);
  return build_dtm(read_file(token_counts), stop, min_count, max_vocab, token_counts.string());
}

ResultTables tables_from(const ContingencyTable& table, const ca::CaFit& fit) {
  ResultTables out;
  out.row_labels = table.row_labels();
  out.col_labels = table.col_labels();
  out.eigenvalues = fit.eigenvalues;
  const double total = fit.total_inertia;
  out.percent = total > 0.0 ? Vector(100.0 * fit.eigenvalues / total)
                            : Vector(Vector::Zero(fit.eigenvalues.size()));
  out.inertia_percent = out.percent;
  out.cumulative_percent.resize(out.percent.size());
  double running = 0.0;
  for (Eigen::Index k = 0; k < out.percent.size(); ++k) {
    running += out.percent(k);
    out.cumulative_percent(k) = running;
  }
  const ca::ContributionTable contrib = ca::contributions(fit);
  out.row_contrib = contrib.rows;
  out.col_contrib = contrib.cols;
  out.row_coords = fit.row_coords;
  out.col_coords = fit.col_coords;
  return out;
}

ResultTables tables_from(const ContingencyTable& table, const sparse::SparseCaModel& model) {
  ResultTables out;
  out.sparse = true;
  out.row_labels = table.row_labels();
  out.col_labels = table.col_labels();
  out.eigenvalues = model.lambdas;
  out.percent = 100.0 * model.explained;
  out.cumulative_percent = 100.0 * model.cumulative_explained;
  out.inertia_percent = 100.0 * model.lambda_shares;
  const sparse::SparseContributions contrib = sparse::sparse_contributions(model);
  out.row_weights = contrib.row_weights;
  out.col_weights = contrib.col_weights;
  out.row_contrib = contrib.rows;
  out.col_contrib = contrib.cols;
  out.row_coords = model.row_coords;
  out.col_coords = model.col_coords;
  return out;
}

std::string format_number(double value) {
  if (value == 0.0) return "0";
  if (std::isnan(value)) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  std::string s(buf);
  if (s == "-0") return "0";
  return s;
}

namespace {

std::string format_points(const std::vector<std::string>& labels, const Matrix& weights,
                          const Matrix& contrib, const Matrix& coords, bool sparse) {
  std::ostringstream os;
  const Eigen::Index k = coords.cols();
  std::vector<std::string> fields{"label"};
  if (sparse) {
    for (Eigen::Index d = 1; d <= k; ++d) fields.push_back("weight_" + std::to_string(d));
  }
  for (Eigen::Index d = 1; d <= k; ++d) fields.push_back("contribution_" + std::to_string(d));
  for (Eigen::Index d = 1; d <= k; ++d) fields.push_back("coordinate_" + std::to_string(d));
  write_csv_line(os, fields);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    fields.assign(1, labels[i]);
    if (sparse) {
      for (Eigen::Index d = 0; d < k; ++d) fields.push_back(format_number(weights(r, d)));
    }
    for (Eigen::Index d = 0; d < k; ++d) fields.push_back(format_number(contrib(r, d)));
    for (Eigen::Index d = 0; d < k; ++d) fields.push_back(format_number(coords(r, d)));
    write_csv_line(os, fields);
  }
  return os.str();
}

}  // namespace

void write_tables_csv(const ResultTables& tables, const std::filesystem::path& out_dir) {
  std::ostringstream eig;
  eig << "dimension,eigenvalue,percent,cumulative_percent,inertia_percent\n";
  for (Eigen::Index k = 0; k < tables.eigenvalues.size(); ++k) {
    eig << (k + 1) << ',' << format_number(tables.eigenvalues(k)) << ','
        << format_number(tables.percent(k)) << ',' << format_number(tables.cumulative_percent(k))
        << ',' << format_number(tables.inertia_percent(k)) << '\n';
  }
  write_file(out_dir / "eigenvalues.csv", eig.str());
  write_file(out_dir / "rows.csv", format_points(tables.row_labels, tables.row_weights,
                                                 tables.row_contrib, tables.row_coords,
                                                 tables.sparse));
  write_file(out_dir / "cols.csv", format_points(tables.col_labels, tables.col_weights,
                                                 tables.col_contrib, tables.col_coords,
                                                 tables.sparse));
}

void write_tuning_csv(const tuning::TuningResult& result, const std::filesystem::path& path) {
  std::ostringstream os;
  os << "param_u,param_v,is,bic,cv,nnz_u,nnz_v,fit,optimum\n";
  for (std::size_t i = 0; i < result.grid.cells.size(); ++i) {
    const auto& c = result.grid.cells[i];
    os << format_number(c.param_u) << ',' << format_number(c.param_v) << ','
       << format_number(c.is) << ',' << format_number(c.bic) << ','
       << (c.cv ? format_number(*c.cv) : std::string("NA")) << ',' << c.nnz_u << ',' << c.nnz_v
       << ',' << format_number(c.fit) << ',' << (i == result.optimum_index ? 1 : 0) << '\n';
  }
  write_file(path, os.str());
}

void write_weight_path_csv(const tuning::WeightPath& path,
                           const std::vector<std::string>& row_labels,
                           const std::vector<std::string>& col_labels,
                           const std::filesystem::path& file) {
  std::ostringstream os;
  os << "param,side,label,weight\n";
  for (std::size_t g = 0; g < path.params.size(); ++g) {
    const std::string param = format_number(path.params[g]);
    for (std::size_t i = 0; i < row_labels.size(); ++i) {
      os << param << ",u," << csv_field(row_labels[i]) << ','
         << format_number(path.u[g](static_cast<Eigen::Index>(i))) << '\n';
    }
    for (std::size_t j = 0; j < col_labels.size(); ++j) {
      os << param << ",v," << csv_field(col_labels[j]) << ','
         << format_number(path.v[g](static_cast<Eigen::Index>(j))) << '\n';
    }
  }
  write_file(file, os.str());
}

void write_clusters_csv(const std::vector<std::string>& labels, const std::vector<int>& assignment,
                        const std::filesystem::path& path) {
  if (labels.size() != assignment.size()) throw InputError("write_clusters_csv: length mismatch");
  std::ostringstream os;
  os << "label,cluster\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    os << csv_field(labels[i]) << ',' << assignment[i] << '\n';
  }
  write_file(path, os.str());
}

void write_typicality_csv(const analysis::TypicalityTable& table, const std::filesystem::path& path) {
  std::ostringstream os;
  os << "cluster,size,rank,category,z\n";
  for (const auto& cluster : table.clusters) {
    int rank = 0;
    for (const auto& cat : cluster.top) {
      os << csv_field(cluster.cluster) << ',' << format_number(cluster.size) << ',' << ++rank
         << ',' << csv_field(cat.label) << ',' << format_number(cat.z) << '\n';
    }
  }
  write_file(path, os.str());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path.string());
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("error writing " + path.string());
}

}  // namespace sparseca::io
