#include "sparseca/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <string>
#include <thread>

#include "sparseca/errors.hpp"

namespace sparseca::tuning {

namespace {

using sparse::L1Budgets;
using sparse::SparseFactor;
using sparse::Variant;

int penalized_length(Eigen::Index rows, Eigen::Index cols, Variant variant) {
  return static_cast<int>(variant == Variant::column_sparse ? cols : rows + cols);
}

int nonzero_weights(const SparseFactor& f, Variant variant) {
  return variant == Variant::column_sparse ? f.nnz_v : f.nnz_u + f.nnz_v;
}

std::vector<double> sorted_unique(std::vector<double> grid) {
  if (grid.empty()) throw InputError("grid search: empty grid");
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

L1Budgets budgets_for(double value, GridMode mode, Variant variant, Eigen::Index rows,
                      Eigen::Index cols) {
  const double sqrt_rows = std::sqrt(static_cast<double>(rows));
  const double sqrt_cols = std::sqrt(static_cast<double>(cols));
  L1Budgets b;
  switch (mode) {
    case GridMode::coupled: {
      sparse::SparsityConstraint::coupled(value).validate(rows, cols);
      if (variant == Variant::doubly_sparse) b.u = std::min(sqrt_rows * value, sqrt_rows);
      b.v = std::min(sqrt_cols * value, sqrt_cols);
      break;
    }
    case GridMode::sumabsv:
      sparse::SparsityConstraint::unpenalized_rows(value).validate(rows, cols);
      b.v = std::min(value, sqrt_cols);
      break;
    case GridMode::sumabsu:
      if (!(value >= 1.0) || value > sqrt_rows * (1.0 + 1e-12)) {
        throw InputError("sumabsu = " + std::to_string(value) + " outside [1, sqrt(rows)]");
      }
      b.u = std::min(value, sqrt_rows);
      break;
  }
  return b;
}

Variant effective_variant(GridMode mode, Variant variant) {
  return mode == GridMode::sumabsv ? Variant::column_sparse : variant;
}

// Draws uniform doubles in [0, 1) with a fixed bit recipe so results do not
// depend on the standard library's distribution implementation.
class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed) : engine_(seed) {}
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

bool better(Criterion criterion, double candidate, double incumbent) {
  return criterion == Criterion::is ? candidate > incumbent : candidate < incumbent;
}

double criterion_value(const GridCell& cell, Criterion criterion) {
  switch (criterion) {
    case Criterion::is:
      return cell.is;
    case Criterion::bic:
      return cell.bic;
    case Criterion::cv:
      return cell.cv.value_or(std::numeric_limits<double>::infinity());
  }
  return 0.0;
}

struct CellContext {
  const Matrix& z;
  Criterion criterion;
  const SearchOptions& options;
  double sigma2_doubly;
  double sigma2_column;
};

GridCell evaluate_cell(const CellContext& ctx, const L1Budgets& budgets, Variant variant) {
  GridCell cell;
  const SparseFactor f = sparse::pmd_rank1(ctx.z, budgets, ctx.options.pmd);
  cell.nnz_u = f.nnz_u;
  cell.nnz_v = f.nnz_v;
  cell.is = is_criterion(ctx.z, {f}, variant, ctx.options.orientation);
  const double sigma2 =
      variant == Variant::column_sparse ? ctx.sigma2_column : ctx.sigma2_doubly;
  cell.bic = std::isnan(sigma2) ? sigma2 : bic_criterion(ctx.z, f, sigma2, variant);
  cell.fit = explained_variance(ctx.z, f.v).fraction;
  if (ctx.criterion == Criterion::cv) cell.cv = cv_error(ctx.z, budgets, ctx.options.cv);
  return cell;
}

TuningResult pick_optimum(Criterion criterion, TuningGrid grid) {
  TuningResult result;
  result.criterion = criterion;
  for (std::size_t i = 0; i < grid.cells.size(); ++i) {
    if (i == 0 || better(criterion, criterion_value(grid.cells[i], criterion),
                         criterion_value(grid.cells[result.optimum_index], criterion))) {
      result.optimum_index = i;
    }
  }
  result.optimum = grid.cells[result.optimum_index];
  result.grid = std::move(grid);
  return result;
}

// NaN when the matrix is too small for the noise estimate; BIC searches
// still fail loudly.
double sigma2_or_nan(const Matrix& z, Variant variant, Criterion criterion) {
  try {
    return estimate_sigma2(z, variant);
  } catch (const InputError&) {
    if (criterion == Criterion::bic) throw;
    return std::numeric_limits<double>::quiet_NaN();
  }
}

double rounded_to_step(double value, double step) {
  const double scale = std::round(1.0 / step);
  return std::round(value * scale) / scale;
}

}  // namespace

ExplainedVariance explained_variance(const Matrix& z, const Matrix& weights) {
  if (weights.rows() != z.cols() || weights.cols() == 0) {
    throw InputError("explained_variance: weight matrix shape does not match");
  }
  const double total = z.squaredNorm();
  if (total == 0.0) throw DegenerateInputError("explained_variance: zero matrix");

  const auto svd = numerics::full_svd(weights);
  const double top = svd.singular_values(0);
  if (top == 0.0) throw DegenerateInputError("explained_variance: zero weights");
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < svd.singular_values.size(); ++k) {
    if (svd.singular_values(k) > 1e-10 * top) rank = k + 1;
  }
  ExplainedVariance out;
  out.rank_deficient = rank < weights.cols();
  // projector onto span(W) is Q Q' with Q the leading left singular vectors
  const double captured = (z * svd.left.leftCols(rank)).squaredNorm();
  out.fraction = std::clamp(captured / total, 0.0, 1.0);
  return out;
}

double is_criterion(const Matrix& z, const std::vector<SparseFactor>& factors, Variant variant,
                    IsOrientation orientation) {
  if (factors.empty()) throw InputError("is_criterion: at least one factor required");
  const auto r = static_cast<Eigen::Index>(factors.size());
  Matrix w(z.cols(), r);
  int nonzero = 0;
  for (Eigen::Index k = 0; k < r; ++k) {
    w.col(k) = factors[static_cast<std::size_t>(k)].v;
    nonzero += nonzero_weights(factors[static_cast<std::size_t>(k)], variant);
  }
  const double total = static_cast<double>(penalized_length(z.rows(), z.cols(), variant) * r);
  const double zeros = total - nonzero;
  if (zeros <= 0.0) return 0.0;

  const double fit_sparse = explained_variance(z, w).fraction;
  const auto svd = numerics::full_svd(z);
  const double fit_original = explained_variance(z, svd.right.leftCols(r)).fraction;
  const double sparsity = (zeros / total) * (zeros / total);
  if (orientation == IsOrientation::tradeoff) return fit_sparse / fit_original * sparsity;
  if (fit_sparse == 0.0) return std::numeric_limits<double>::infinity();
  return fit_original / fit_sparse * sparsity;
}

double estimate_sigma2(const Matrix& z, Variant variant) {
  const double np = static_cast<double>(z.rows() * z.cols());
  const double df_full = penalized_length(z.rows(), z.cols(), variant);
  if (np - df_full <= 0.0) {
    throw InputError("estimate_sigma2: matrix too small for the rank-1 degrees of freedom");
  }
  const auto svd = numerics::full_svd(z);
  const double s1 = svd.singular_values(0);
  const double residual = std::max(z.squaredNorm() - s1 * s1, 0.0);
  // exactly rank-1 data would make sigma2 zero
  const double floor = std::numeric_limits<double>::epsilon() * z.squaredNorm() / np;
  return std::max(residual / (np - df_full), std::max(floor, std::numeric_limits<double>::min()));
}

double bic_criterion(const Matrix& z, const SparseFactor& factor, double sigma2, Variant variant) {
  if (!(sigma2 > 0.0)) throw InputError("bic_criterion: sigma2 must be positive");
  const double np = static_cast<double>(z.rows() * z.cols());
  const double residual = (z - factor.alpha * factor.u * factor.v.transpose()).squaredNorm();
  const double df = nonzero_weights(factor, variant);
  return residual / (np * sigma2) + std::log(np) / np * df;
}

double cv_error(const Matrix& z, const L1Budgets& budgets, const CvOptions& options) {
  if (options.folds < 1 || options.repeats < 1 || options.impute_sweeps < 1) {
    throw InputError("cv_error: folds, repeats and sweeps must be positive");
  }
  if (!(options.holdout_fraction > 0.0) || options.holdout_fraction >= 1.0) {
    throw InputError("cv_error: holdout fraction must lie in (0, 1)");
  }
  const double width = std::min(options.holdout_fraction, 1.0 / options.folds);
  UniformSource source(options.seed);
  double squared_error = 0.0;
  std::size_t held_cells = 0;

  Matrix draws(z.rows(), z.cols());
  for (int rep = 0; rep < options.repeats; ++rep) {
    for (Eigen::Index j = 0; j < z.cols(); ++j) {
      for (Eigen::Index i = 0; i < z.rows(); ++i) draws(i, j) = source.next();
    }
    for (int fold = 0; fold < options.folds; ++fold) {
      const double lo = fold * width;
      const double hi = (fold + 1) * width;
      const auto held = ((draws.array() >= lo) && (draws.array() < hi)).eval();
      if (!held.any()) continue;
      if (held.all()) throw InputError("cv_error: a fold holds out every cell");

      Matrix filled = held.select(Eigen::ArrayXXd::Zero(z.rows(), z.cols()), z.array()).matrix();
      Matrix estimate;
      for (int sweep = 0; sweep < options.impute_sweeps; ++sweep) {
        if (filled.isZero(0.0)) {
          estimate = Matrix::Zero(z.rows(), z.cols());
          break;
        }
        const SparseFactor f = sparse::pmd_rank1(filled, budgets);
        estimate = f.alpha * f.u * f.v.transpose();
        filled = held.select(estimate.array(), z.array()).matrix();
      }
      squared_error += held.select((estimate - z).array(), 0.0).matrix().squaredNorm();
      held_cells += static_cast<std::size_t>(held.count());
    }
  }
  if (held_cells == 0) throw InputError("cv_error: no cell was held out");
  return squared_error / static_cast<double>(held_cells);
}

TuningResult grid_search_1d(const Matrix& z, const std::vector<double>& grid, Criterion criterion,
                            GridMode mode, const SearchOptions& options) {
  const auto values = sorted_unique(grid);
  const Variant variant = effective_variant(mode, options.variant);
  std::vector<L1Budgets> budgets;
  budgets.reserve(values.size());
  for (double value : values) {
    budgets.push_back(budgets_for(value, mode, options.variant, z.rows(), z.cols()));
  }

  const CellContext ctx{z, criterion, options,
                        sigma2_or_nan(z, Variant::doubly_sparse, criterion),
                        sigma2_or_nan(z, Variant::column_sparse, criterion)};
  TuningGrid out;
  out.axis1 = values;
  out.cells = parallel_map<GridCell>(
      values.size(), resolve_threads(options.threads), [&](std::size_t i) {
        GridCell cell = evaluate_cell(ctx, budgets[i], variant);
        cell.param_u = values[i];
        cell.param_v = values[i];
        return cell;
      });
  return pick_optimum(criterion, std::move(out));
}

TuningResult grid_search_2d(const Matrix& z, const std::vector<double>& grid_u,
                            const std::vector<double>& grid_v, Criterion criterion,
                            const SearchOptions& options) {
  const auto values_u = sorted_unique(grid_u);
  const auto values_v = sorted_unique(grid_v);
  for (double u : values_u) budgets_for(u, GridMode::sumabsu, options.variant, z.rows(), z.cols());
  for (double v : values_v) budgets_for(v, GridMode::sumabsv, options.variant, z.rows(), z.cols());

  const CellContext ctx{z, criterion, options,
                        sigma2_or_nan(z, Variant::doubly_sparse, criterion),
                        sigma2_or_nan(z, Variant::column_sparse, criterion)};
  TuningGrid out;
  out.axis1 = values_u;
  out.axis2 = values_v;
  const std::size_t nv = values_v.size();
  out.cells = parallel_map<GridCell>(
      values_u.size() * nv, resolve_threads(options.threads), [&](std::size_t idx) {
        const double su = values_u[idx / nv];
        const double sv = values_v[idx % nv];
        L1Budgets b;
        b.u = std::min(su, std::sqrt(static_cast<double>(z.rows())));
        b.v = std::min(sv, std::sqrt(static_cast<double>(z.cols())));
        GridCell cell = evaluate_cell(ctx, b, Variant::doubly_sparse);
        cell.param_u = su;
        cell.param_v = sv;
        return cell;
      });
  return pick_optimum(criterion, std::move(out));
}

WeightPath weight_paths(const Matrix& z, const std::vector<double>& grid, GridMode mode,
                        const SearchOptions& options) {
  const auto values = sorted_unique(grid);
  std::vector<L1Budgets> budgets;
  for (double value : values) {
    budgets.push_back(budgets_for(value, mode, options.variant, z.rows(), z.cols()));
  }
  const auto factors = parallel_map<SparseFactor>(
      values.size(), resolve_threads(options.threads),
      [&](std::size_t i) { return sparse::pmd_rank1(z, budgets[i], options.pmd); });

  WeightPath path;
  path.params = values;
  for (const auto& f : factors) {
    path.u.push_back(f.u);
    path.v.push_back(f.v);
    path.zero_fraction_u.push_back(1.0 - static_cast<double>(f.nnz_u) / static_cast<double>(f.u.size()));
    path.zero_fraction_v.push_back(1.0 - static_cast<double>(f.nnz_v) / static_cast<double>(f.v.size()));
  }
  return path;
}

std::vector<double> default_coupled_grid(Eigen::Index rows, Eigen::Index cols, double step) {
  if (!(step > 0.0)) throw InputError("default_coupled_grid: step must be positive");
  const double lower = std::max(1.0 / std::sqrt(static_cast<double>(rows)),
                                1.0 / std::sqrt(static_cast<double>(cols)));
  std::vector<double> grid;
  for (long k = static_cast<long>(std::floor(lower / step)); ; ++k) {
    const double value = rounded_to_step(static_cast<double>(k) * step, step);
    if (value > 1.0 + 1e-12) break;
    if (value > lower) grid.push_back(value);
  }
  if (grid.empty() || grid.back() < 1.0) grid.push_back(1.0);
  return grid;
}

std::vector<double> default_absolute_grid(Eigen::Index dim, double step) {
  if (!(step > 0.0)) throw InputError("default_absolute_grid: step must be positive");
  const double top = std::sqrt(static_cast<double>(dim));
  std::vector<double> grid;
  for (long k = 0;; ++k) {
    const double value = rounded_to_step(1.0 + static_cast<double>(k) * step, step);
    if (value > top + 1e-12) break;
    grid.push_back(std::min(value, top));
  }
  if (grid.back() < top - 1e-9) grid.push_back(top);
  return grid;
}

Matrix deflate_sequence(const Matrix& z, const std::vector<SparseFactor>& prior) {
  Matrix current = z;
  for (const auto& f : prior) current = sparse::ppmd_deflate(current, f.u, f.v);
  return current;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SPARSE_CA_THREADS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && value > 0) return static_cast<int>(value);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace sparseca::tuning
