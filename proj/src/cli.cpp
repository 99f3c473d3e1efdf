#include "sparseca/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sparseca/analysis.hpp"
#include "sparseca/ca.hpp"
#include "sparseca/errors.hpp"
#include "sparseca/io.hpp"
#include "sparseca/sparse_factorizer.hpp"
#include "sparseca/svg.hpp"
#include "sparseca/tuning.hpp"

namespace sparseca::cli {
namespace {

namespace fs = std::filesystem;
using sparse::Variant;

std::string num(double v, int digits = 4) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

Variant parse_variant(const std::string& s) {
  return s == "column" ? Variant::column_sparse : Variant::doubly_sparse;
}

tuning::GridMode parse_mode(const std::string& s, Variant variant) {
  if (s == "coupled") return tuning::GridMode::coupled;
  if (s == "sumabsv") return tuning::GridMode::sumabsv;
  if (s == "sumabsu") {
    if (variant == Variant::column_sparse) {
      throw InputError("--mode sumabsu penalizes rows, which the column variant never does");
    }
    return tuning::GridMode::sumabsu;
  }
  return variant == Variant::column_sparse ? tuning::GridMode::sumabsv : tuning::GridMode::coupled;
}

// One value per dimension; a single value is reused for every dimension.
template <typename T>
T per_dim(const std::vector<T>& values, int d, const char* flag) {
  if (values.size() == 1) return values.front();
  if (static_cast<int>(values.size()) <= d) {
    throw InputError(std::string(flag) + " needs one value or one per dimension");
  }
  return values[static_cast<std::size_t>(d)];
}

struct Common {
  std::string input;
  std::string out = ".";
  bool drop_empty = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("input", c.input, "Contingency CSV (header row, label column)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", c.out, "Output directory")->capture_default_str();
  cmd->add_flag("--drop-empty", c.drop_empty, "Remove all-zero rows and columns before fitting");
}

ContingencyTable load(const Common& c) { return io::read_contingency_csv(c.input, c.drop_empty); }

svg::PlotSpec plot(svg::PlotKind kind, const fs::path& file, std::string title = {}) {
  svg::PlotSpec spec;
  spec.kind = kind;
  spec.output = file;
  spec.title = std::move(title);
  return spec;
}

// --- ca ------------------------------------------------------------------

struct CaArgs {
  Common common;
  int dims = 0;
};

void run_ca(const CaArgs& a, std::ostream& out) {
  const ContingencyTable table = load(a.common);
  const int max_dims = static_cast<int>(std::min(table.rows(), table.cols())) - 1;
  if (max_dims < 1) throw InputError("ca: the table needs at least two rows and two columns");
  const int dims = a.dims > 0 ? a.dims : std::min(2, max_dims);
  const ca::CaFit fit = ca::fit_ca(table, dims);
  const io::ResultTables tables = io::tables_from(table, fit);
  const fs::path dir = a.common.out;
  io::write_tables_csv(tables, dir);
  svg::write_svg(svg::render_scree(tables, plot(svg::PlotKind::scree, dir / "scree.svg")),
                 plot(svg::PlotKind::scree, dir / "scree.svg"));
  if (dims >= 2) {
    const auto spec = plot(svg::PlotKind::symmetric_map, dir / "map.svg");
    svg::write_svg(svg::render_symmetric_map(tables, spec), spec);
  }
  out << "total inertia " << num(fit.total_inertia, 6) << '\n';
  for (int k = 0; k < dims; ++k) {
    out << "dimension " << (k + 1) << ": eigenvalue " << num(tables.eigenvalues(k), 6) << ", "
        << num(tables.percent(k)) << "% (cumulative " << num(tables.cumulative_percent(k)) << "%)\n";
  }
}

// --- sca -----------------------------------------------------------------

struct ScaArgs {
  Common common;
  std::string variant = "doubly";
  std::vector<double> sumabs;
  std::vector<double> sumabsu;
  std::vector<double> sumabsv;
  std::vector<int> nnz;
  std::string nnz_axis = "cols";
  int dims = 2;
  std::string col_scale = "rescaled";
  bool nonzero_only = false;
};

std::vector<sparse::SparsityConstraint> constraints_for(const ScaArgs& a, Variant variant) {
  using sparse::SparsityConstraint;
  const int given = (!a.sumabs.empty()) + (!a.sumabsu.empty() || !a.sumabsv.empty()) + (!a.nnz.empty());
  if (given != 1) throw InputError("sca: give exactly one of --sumabs, --sumabsu/--sumabsv, --nnz");
  std::vector<SparsityConstraint> out;
  for (int d = 0; d < a.dims; ++d) {
    if (!a.nnz.empty()) {
      out.push_back(SparsityConstraint::nonzero_target(
          per_dim(a.nnz, d, "--nnz"), a.nnz_axis == "rows" ? sparse::Axis::rows : sparse::Axis::cols));
    } else if (!a.sumabs.empty()) {
      out.push_back(SparsityConstraint::coupled(per_dim(a.sumabs, d, "--sumabs")));
    } else if (variant == Variant::column_sparse || a.sumabsu.empty()) {
      if (!a.sumabsu.empty()) throw InputError("sca: the column variant takes --sumabsv only");
      out.push_back(SparsityConstraint::unpenalized_rows(per_dim(a.sumabsv, d, "--sumabsv")));
    } else {
      if (a.sumabsv.empty()) throw InputError("sca: --sumabsu needs --sumabsv");
      out.push_back(SparsityConstraint::absolute(per_dim(a.sumabsu, d, "--sumabsu"),
                                                 per_dim(a.sumabsv, d, "--sumabsv")));
    }
  }
  return out;
}

void run_sca(const ScaArgs& a, std::ostream& out) {
  const ContingencyTable table = load(a.common);
  const Variant variant = parse_variant(a.variant);
  const auto scale = a.col_scale == "barycentric" ? sparse::ColumnScale::barycentric
                                                  : sparse::ColumnScale::rescaled;
  const auto model = sparse::fit_sparse_ca(table, constraints_for(a, variant), a.dims, variant, scale);
  const io::ResultTables tables = io::tables_from(table, model);
  const fs::path dir = a.common.out;
  io::write_tables_csv(tables, dir);
  if (a.dims >= 2) {
    auto spec = plot(svg::PlotKind::symmetric_map, dir / "map.svg");
    if (a.nonzero_only) spec.filter = svg::LabelFilter::nonzero_only;
    svg::write_svg(svg::render_symmetric_map(tables, spec), spec);
  }
  for (int k = 0; k < model.dims(); ++k) {
    const auto& f = model.factors[static_cast<std::size_t>(k)];
    out << "dimension " << (k + 1) << ": sumabsu "
        << (f.budgets.u ? num(*f.budgets.u) : std::string("-")) << ", sumabsv "
        << (f.budgets.v ? num(*f.budgets.v) : std::string("-")) << ", nonzeros " << f.nnz_u
        << " rows / " << f.nnz_v << " cols, eigenvalue " << num(model.lambdas(k), 6)
        << ", explained " << num(tables.percent(k)) << "% (cumulative "
        << num(tables.cumulative_percent(k)) << "%)\n";
  }
  out << "max deflation residual " << num(model.max_deflation_residual, 3) << '\n';
  for (const auto& w : model.warnings) out << "warning: " << w << '\n';
}

// --- tune ----------------------------------------------------------------

struct TuneArgs {
  Common common;
  std::string variant = "doubly";
  std::string criterion = "is";
  bool grid_2d = false;
  std::string mode;
  std::string orientation = "tradeoff";
  int dims = 1;
  double step = 0.0;
  std::uint64_t seed = 1;
  int repeats = 1;
  int folds = 10;
  int threads = 0;
};

sparse::L1Budgets optimum_budgets(const tuning::GridCell& cell, bool two_d, tuning::GridMode mode,
                                  Variant variant, Eigen::Index rows, Eigen::Index cols) {
  sparse::L1Budgets b;
  if (two_d) {
    b.u = std::min(cell.param_u, std::sqrt(static_cast<double>(rows)));
    b.v = std::min(cell.param_v, std::sqrt(static_cast<double>(cols)));
    return b;
  }
  switch (mode) {
    case tuning::GridMode::coupled:
      b = sparse::resolve_budgets(sparse::SparsityConstraint::coupled(cell.param_u), rows, cols);
      if (variant == Variant::column_sparse) b.u.reset();
      break;
    case tuning::GridMode::sumabsv:
      b.v = cell.param_u;
      break;
    case tuning::GridMode::sumabsu:
      b.u = cell.param_u;
      break;
  }
  return b;
}

void run_tune(const TuneArgs& a, std::ostream& out) {
  const ContingencyTable table = load(a.common);
  const Variant variant = parse_variant(a.variant);
  if (a.grid_2d && variant == Variant::column_sparse) {
    throw InputError("tune: --grid-2d searches both bounds; use the doubly variant");
  }
  const tuning::GridMode mode = parse_mode(a.mode, variant);
  const auto corr = ca::correspondence_matrix(table);
  Matrix z = ca::standardized_residuals(corr.p, corr.r, corr.c);
  const auto rows = z.rows();
  const auto cols = z.cols();

  tuning::SearchOptions options;
  options.variant = variant;
  options.orientation =
      a.orientation == "printed" ? tuning::IsOrientation::printed : tuning::IsOrientation::tradeoff;
  options.cv.seed = a.seed;
  options.cv.repeats = a.repeats;
  options.cv.folds = a.folds;
  options.threads = a.threads;
  const tuning::Criterion criterion = a.criterion == "bic" ? tuning::Criterion::bic
                                      : a.criterion == "cv" ? tuning::Criterion::cv
                                                            : tuning::Criterion::is;
  const int max_dims = static_cast<int>(std::min(rows, cols)) - 1;
  if (a.dims < 1 || a.dims > max_dims) {
    throw InputError("tune: --dims must lie in 1.." + std::to_string(max_dims));
  }

  const fs::path dir = a.common.out;
  for (int d = 1; d <= a.dims; ++d) {
    tuning::TuningResult result;
    if (a.grid_2d) {
      const double step = a.step > 0 ? a.step : 0.2;
      result = tuning::grid_search_2d(z, tuning::default_absolute_grid(rows, step),
                                      tuning::default_absolute_grid(cols, step), criterion, options);
    } else {
      std::vector<double> grid;
      switch (mode) {
        case tuning::GridMode::coupled:
          grid = tuning::default_coupled_grid(rows, cols, a.step > 0 ? a.step : 0.01);
          break;
        case tuning::GridMode::sumabsv:
          grid = tuning::default_absolute_grid(cols, a.step > 0 ? a.step : 0.2);
          break;
        case tuning::GridMode::sumabsu:
          grid = tuning::default_absolute_grid(rows, a.step > 0 ? a.step : 0.2);
          break;
      }
      result = tuning::grid_search_1d(z, grid, criterion, mode, options);
    }
    const std::string suffix = d == 1 ? "" : "_" + std::to_string(d);
    io::write_tuning_csv(result, dir / ("tuning_grid" + suffix + ".csv"));
    auto spec = plot(a.grid_2d ? svg::PlotKind::contour : svg::PlotKind::criterion_curve,
                     dir / ((a.grid_2d ? "contour" : "criterion") + suffix + ".svg"),
                     "Dimension " + std::to_string(d));
    svg::write_svg(a.grid_2d ? svg::render_contour(result, spec)
                             : svg::render_criterion_curve(result, spec),
                   spec);

    const auto& opt = result.optimum;
    out << "dimension " << d << ": optimum ";
    if (a.grid_2d) {
      out << "sumabsu " << num(opt.param_u) << ", sumabsv " << num(opt.param_v);
    } else {
      out << (mode == tuning::GridMode::coupled ? "sumabs " : mode == tuning::GridMode::sumabsv ? "sumabsv " : "sumabsu ")
          << num(opt.param_u);
    }
    out << " (" << a.criterion << ' ';
    switch (criterion) {
      case tuning::Criterion::is:
        out << num(opt.is, 6);
        break;
      case tuning::Criterion::bic:
        out << num(opt.bic, 6);
        break;
      case tuning::Criterion::cv:
        out << num(opt.cv.value_or(NAN), 6);
        break;
    }
    out << "), nonzeros " << opt.nnz_u << " rows / " << opt.nnz_v << " cols\n";

    if (d < a.dims) {
      const auto f = sparse::pmd_rank1(
          z, optimum_budgets(opt, a.grid_2d, mode, variant, rows, cols), options.pmd);
      z = sparse::ppmd_deflate(z, f.u, f.v);
    }
  }
}

// --- paths ---------------------------------------------------------------

struct PathArgs {
  Common common;
  std::string variant = "doubly";
  std::string mode;
  double step = 0.0;
  bool nonzero_only = false;
  int threads = 0;
};

void run_paths(const PathArgs& a, std::ostream& out) {
  const ContingencyTable table = load(a.common);
  const Variant variant = parse_variant(a.variant);
  const tuning::GridMode mode = parse_mode(a.mode, variant);
  const auto corr = ca::correspondence_matrix(table);
  const Matrix z = ca::standardized_residuals(corr.p, corr.r, corr.c);
  std::vector<double> grid;
  switch (mode) {
    case tuning::GridMode::coupled:
      grid = tuning::default_coupled_grid(z.rows(), z.cols(), a.step > 0 ? a.step : 0.01);
      break;
    case tuning::GridMode::sumabsv:
      grid = tuning::default_absolute_grid(z.cols(), a.step > 0 ? a.step : 0.2);
      break;
    case tuning::GridMode::sumabsu:
      grid = tuning::default_absolute_grid(z.rows(), a.step > 0 ? a.step : 0.2);
      break;
  }
  tuning::SearchOptions options;
  options.variant = variant;
  options.threads = a.threads;
  const auto path = tuning::weight_paths(z, grid, mode, options);
  const fs::path dir = a.common.out;
  io::write_weight_path_csv(path, table.row_labels(), table.col_labels(), dir / "weight_paths.csv");
  for (const auto side : {svg::Side::rows, svg::Side::cols}) {
    const bool rows = side == svg::Side::rows;
    auto spec = plot(svg::PlotKind::weight_path, dir / (rows ? "paths_rows.svg" : "paths_cols.svg"),
                     rows ? "Row weights" : "Column weights");
    spec.side = side;
    if (a.nonzero_only) spec.filter = svg::LabelFilter::nonzero_only;
    svg::write_svg(svg::render_weight_path(path, rows ? table.row_labels() : table.col_labels(), spec),
                   spec);
  }
  out << "grid of " << path.params.size() << " values from " << num(path.params.front()) << " to "
      << num(path.params.back()) << '\n';
  out << "zero fraction at the smallest value: rows " << num(path.zero_fraction_u.front())
      << ", cols " << num(path.zero_fraction_v.front()) << '\n';
}

// --- cluster -------------------------------------------------------------

struct ClusterArgs {
  Common common;
  int dims = 0;
  int k = 0;
  int top_words = 10;
  std::string ward = "d2";
  std::string on = "rows";
};

void run_cluster(const ClusterArgs& a, std::ostream& out) {
  const ContingencyTable table = load(a.common);
  const int max_dims = static_cast<int>(std::min(table.rows(), table.cols())) - 1;
  if (max_dims < 1) throw InputError("cluster: the table needs at least two rows and two columns");
  const int dims = a.dims > 0 ? a.dims : std::min(2, max_dims);
  const ca::CaFit fit = ca::fit_ca(table, dims);
  const bool on_rows = a.on == "rows";
  const Matrix& coords = on_rows ? fit.row_coords : fit.col_coords;
  const auto& labels = on_rows ? table.row_labels() : table.col_labels();
  const Matrix counts = on_rows ? table.counts() : Matrix(table.counts().transpose());
  const auto& categories = on_rows ? table.col_labels() : table.row_labels();

  const auto dendrogram = analysis::ward_cluster(
      coords, labels, a.ward == "d" ? analysis::WardVariant::d : analysis::WardVariant::d2);
  const auto assignment = analysis::cut_tree(dendrogram, a.k);
  std::vector<std::string> cluster_names;
  for (int c = 1; c <= a.k; ++c) cluster_names.push_back("cluster " + std::to_string(c));
  const Matrix grouped = analysis::aggregate_by_cluster(counts, assignment, a.k);
  const auto typical = analysis::typicality_zscores(grouped, cluster_names, categories, a.top_words);

  const fs::path dir = a.common.out;
  io::write_clusters_csv(labels, assignment, dir / "clusters.csv");
  io::write_typicality_csv(typical, dir / "typicality.csv");
  auto dspec = plot(svg::PlotKind::dendrogram, dir / "dendrogram.svg");
  dspec.cut_clusters = a.k;
  svg::write_svg(svg::render_dendrogram(dendrogram, dspec), dspec);
  if (dims >= 2) {
    const auto spec = plot(svg::PlotKind::cluster_map, dir / "cluster_map.svg");
    svg::write_svg(svg::render_cluster_map(coords, labels, assignment, &typical, spec), spec);
  }
  for (const auto& c : typical.clusters) {
    out << c.cluster << " (" << num(c.size, 6) << "):";
    for (const auto& t : c.top) out << ' ' << t.label << " [" << num(t.z, 3) << ']';
    out << '\n';
  }
  for (const auto& w : typical.warnings) out << "warning: " << w << '\n';
}

// --- dtm -----------------------------------------------------------------

struct DtmArgs {
  std::string tokens;
  std::string stoplist;
  double min_count = 1.0;
  std::size_t max_vocab = 1000000;
  std::string out = "dtm.csv";
};

void run_dtm(const DtmArgs& a, std::ostream& out) {
  const auto result = io::build_dtm_files(a.tokens, a.stoplist, a.min_count, a.max_vocab);
  io::write_contingency_csv(result.table, a.out);
  out << result.table.rows() << " documents x " << result.table.cols() << " tokens written to "
      << a.out << '\n'
      << "removed: " << result.stoplisted_tokens << " stoplisted, " << result.rare_tokens
      << " at or under the count threshold, " << result.capped_tokens << " beyond the vocabulary cap\n"
      << "note: tokens are used as given; no stemming is applied\n";
  for (const auto& d : result.dropped_documents) out << "dropped empty document " << d << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse correspondence analysis of contingency tables", "sparse-ca"};
  app.require_subcommand(1);

  CaArgs ca_args;
  auto* ca_cmd = app.add_subcommand("ca", "Standard correspondence analysis");
  add_common(ca_cmd, ca_args.common);
  ca_cmd->add_option("--dims", ca_args.dims, "Dimensions to report (default min(2, available))")
      ->check(CLI::PositiveNumber);

  ScaArgs sca;
  auto* sca_cmd = app.add_subcommand("sca", "Sparse correspondence analysis");
  add_common(sca_cmd, sca.common);
  sca_cmd->add_option("--variant", sca.variant)->check(CLI::IsMember({"doubly", "column"}))->capture_default_str();
  sca_cmd->add_option("--sumabs", sca.sumabs, "Coupled bound per dimension")->delimiter(',');
  sca_cmd->add_option("--sumabsu", sca.sumabsu, "Row L1 bound per dimension")->delimiter(',');
  sca_cmd->add_option("--sumabsv", sca.sumabsv, "Column L1 bound per dimension")->delimiter(',');
  sca_cmd->add_option("--nnz", sca.nnz, "Nonzero target per dimension")->delimiter(',');
  sca_cmd->add_option("--nnz-axis", sca.nnz_axis)->check(CLI::IsMember({"rows", "cols"}))->capture_default_str();
  sca_cmd->add_option("--dims", sca.dims)->check(CLI::PositiveNumber)->capture_default_str();
  sca_cmd->add_option("--col-scale", sca.col_scale)
      ->check(CLI::IsMember({"barycentric", "rescaled"}))
      ->capture_default_str();
  sca_cmd->add_flag("--nonzero-only", sca.nonzero_only, "Leave all-zero categories off the map");

  TuneArgs tune;
  auto* tune_cmd = app.add_subcommand("tune", "Grid search for the sparsity bound");
  add_common(tune_cmd, tune.common);
  tune_cmd->add_option("--variant", tune.variant)->check(CLI::IsMember({"doubly", "column"}))->capture_default_str();
  tune_cmd->add_option("--criterion", tune.criterion)->check(CLI::IsMember({"is", "bic", "cv"}))->capture_default_str();
  auto* g1 = tune_cmd->add_flag("--grid-1d", "One bound (default)");
  auto* g2 = tune_cmd->add_flag("--grid-2d", tune.grid_2d, "Row bound x column bound");
  g1->excludes(g2);
  tune_cmd->add_option("--mode", tune.mode, "1-D grid: coupled, sumabsv or sumabsu")
      ->check(CLI::IsMember({"coupled", "sumabsv", "sumabsu"}));
  tune_cmd->add_option("--orientation", tune.orientation)
      ->check(CLI::IsMember({"tradeoff", "printed"}))
      ->capture_default_str();
  tune_cmd->add_option("--dims", tune.dims, "Tune this many dimensions in sequence")->capture_default_str();
  tune_cmd->add_option("--step", tune.step, "Grid step (default 0.01 coupled, 0.2 absolute)")
      ->check(CLI::PositiveNumber);
  tune_cmd->add_option("--seed", tune.seed, "Seed for cross-validation")->capture_default_str();
  tune_cmd->add_option("--repeats", tune.repeats)->check(CLI::PositiveNumber)->capture_default_str();
  tune_cmd->add_option("--folds", tune.folds)->check(CLI::PositiveNumber)->capture_default_str();
  tune_cmd->add_option("--threads", tune.threads, "Workers (default SPARSE_CA_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);

  PathArgs paths;
  auto* paths_cmd = app.add_subcommand("paths", "Weights along a grid of bounds");
  add_common(paths_cmd, paths.common);
  paths_cmd->add_option("--variant", paths.variant)->check(CLI::IsMember({"doubly", "column"}))->capture_default_str();
  paths_cmd->add_option("--mode", paths.mode)->check(CLI::IsMember({"coupled", "sumabsv", "sumabsu"}));
  paths_cmd->add_option("--step", paths.step)->check(CLI::PositiveNumber);
  paths_cmd->add_flag("--nonzero-only", paths.nonzero_only);
  paths_cmd->add_option("--threads", paths.threads)->check(CLI::NonNegativeNumber);

  ClusterArgs cl;
  auto* cl_cmd = app.add_subcommand("cluster", "Ward clustering of CA coordinates with typical categories");
  add_common(cl_cmd, cl.common);
  cl_cmd->add_option("--k", cl.k, "Number of clusters")->required()->check(CLI::PositiveNumber);
  cl_cmd->add_option("--dims", cl.dims, "CA dimensions used as coordinates")->check(CLI::PositiveNumber);
  cl_cmd->add_option("--top-words", cl.top_words)->check(CLI::PositiveNumber)->capture_default_str();
  cl_cmd->add_option("--ward", cl.ward)->check(CLI::IsMember({"d2", "d"}))->capture_default_str();
  cl_cmd->add_option("--on", cl.on)->check(CLI::IsMember({"rows", "cols"}))->capture_default_str();

  DtmArgs dtm;
  auto* dtm_cmd = app.add_subcommand("dtm", "Document x token table from doc_id,token,count triples");
  dtm_cmd->add_option("--tokens", dtm.tokens)->required()->check(CLI::ExistingFile);
  dtm_cmd->add_option("--stoplist", dtm.stoplist, "One token per line")->check(CLI::ExistingFile);
  dtm_cmd->add_option("--min-count", dtm.min_count, "Keep tokens whose corpus count exceeds this")
      ->capture_default_str();
  dtm_cmd->add_option("--max-vocab", dtm.max_vocab)->check(CLI::PositiveNumber)->capture_default_str();
  dtm_cmd->add_option("--out", dtm.out)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (*ca_cmd) run_ca(ca_args, out);
    if (*sca_cmd) run_sca(sca, out);
    if (*tune_cmd) run_tune(tune, out);
    if (*paths_cmd) run_paths(paths, out);
    if (*cl_cmd) run_cluster(cl, out);
    if (*dtm_cmd) run_dtm(dtm, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace sparseca::cli
