#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sparseca/numerics.hpp"
#include "sparseca/sparse_factorizer.hpp"

namespace sparseca::tuning {

struct ExplainedVariance {
  double fraction = 0.0;
  bool rank_deficient = false;
};

/// Trace(X~'X~) / Trace(X'X) with X~ = X W (W'W)^-1 W', the projection of the
/// rows of X onto the span of the weight columns W. A rank-deficient W falls
/// back to the pseudo-inverse and sets `rank_deficient`.
ExplainedVariance explained_variance(const Matrix& z, const Matrix& weights);

enum class Criterion { is, bic, cv };

/// Orientation of the sparsity index.
///   tradeoff: fit(tau) / fit(original) * (#0 / pr)^2   (default)
///   printed:  fit(original) / fit(tau) * (#0 / pr)^2
enum class IsOrientation { tradeoff, printed };

/// Index of sparsity of a factor set fitted to `z`.
///
/// fit(tau) is the projected variance of the factors' v weights, fit(original)
/// that of the same number of leading right singular vectors. #0 counts exact
/// zeros over all penalized weight vectors (u and v for the doubly sparse
/// variant, v only for the column-sparse one) and pr is their total length.
double is_criterion(const Matrix& z, const std::vector<sparse::SparseFactor>& factors,
                    sparse::Variant variant,
                    IsOrientation orientation = IsOrientation::tradeoff);

/// ||Z - Zhat||^2 / (np) divided by the rank-1 OLS noise estimate:
///   sigma2 = ||Z - s1 u1 v1'||^2 / (np - df_full).
double estimate_sigma2(const Matrix& z, sparse::Variant variant);

/// BIC(tau) = ||Z - alpha u v'||^2 / (np sigma2) + ln(np)/(np) df(tau), with
/// df = nnz_u + nnz_v (doubly sparse) or nnz_v (column sparse).
double bic_criterion(const Matrix& z, const sparse::SparseFactor& factor, double sigma2,
                     sparse::Variant variant);

struct CvOptions {
  int folds = 10;
  double holdout_fraction = 0.10;
  int repeats = 1;
  int impute_sweeps = 20;
  std::uint64_t seed = 1;
};

/// Mean squared error of held-out cells imputed by a rank-1 sparse fit.
///
/// Each repeat draws a uniform number per cell; fold f holds out the cells
/// whose draw falls in [f h, (f+1) h) with h = min(holdout, 1/folds). The
/// held-out cells start at 0 and are refilled from alpha u v' for
/// `impute_sweeps` sweeps. Identical seeds give identical results.
double cv_error(const Matrix& z, const sparse::L1Budgets& budgets, const CvOptions& options);

/// How a one-dimensional grid value maps onto L1 budgets.
enum class GridMode {
  coupled,  ///< value is sumabs; sumabsu = sqrt(I) s, sumabsv = sqrt(J) s
  sumabsv,  ///< value is sumabsv; u unpenalized
  sumabsu,  ///< value is sumabsu; v unpenalized
};

struct GridCell {
  double param_u = 0.0;  ///< sumabs (1-D coupled), sumabsu (2-D) or the 1-D value
  double param_v = 0.0;  ///< sumabsv for 2-D grids, same as param_u otherwise
  double is = 0.0;
  double bic = 0.0;
  std::optional<double> cv;
  int nnz_u = 0;
  int nnz_v = 0;
  double fit = 0.0;  ///< projected variance fraction of v on the grid matrix
};

struct TuningGrid {
  std::vector<double> axis1;
  std::vector<double> axis2;  ///< empty for 1-D grids
  std::vector<GridCell> cells;  ///< row-major: axis1 outer, axis2 inner
};

struct TuningResult {
  Criterion criterion = Criterion::is;
  GridCell optimum;
  std::size_t optimum_index = 0;
  TuningGrid grid;
};

struct SearchOptions {
  sparse::Variant variant = sparse::Variant::doubly_sparse;
  IsOrientation orientation = IsOrientation::tradeoff;
  CvOptions cv;
  sparse::PmdOptions pmd;
  int threads = 0;  ///< 0: SPARSE_CA_THREADS or hardware concurrency
};

/// 1-D search on the (possibly deflated) matrix z. IS is maximized, BIC and
/// CV minimized; ties go to the smaller (sparser) parameter.
TuningResult grid_search_1d(const Matrix& z, const std::vector<double>& grid, Criterion criterion,
                            GridMode mode, const SearchOptions& options = {});

/// Full factorial search over sumabsu x sumabsv.
TuningResult grid_search_2d(const Matrix& z, const std::vector<double>& grid_u,
                            const std::vector<double>& grid_v, Criterion criterion,
                            const SearchOptions& options = {});

/// Fitted weights along a 1-D grid.
struct WeightPath {
  std::vector<double> params;
  std::vector<Vector> u;
  std::vector<Vector> v;
  std::vector<double> zero_fraction_u;
  std::vector<double> zero_fraction_v;
};

WeightPath weight_paths(const Matrix& z, const std::vector<double>& grid, GridMode mode,
                        const SearchOptions& options = {});

/// max(1/sqrt(I), 1/sqrt(J)) + step, ..., 1 rounded to the step.
std::vector<double> default_coupled_grid(Eigen::Index rows, Eigen::Index cols, double step = 0.01);

/// 1, 1 + step, ... up to sqrt(dim).
std::vector<double> default_absolute_grid(Eigen::Index dim, double step = 0.2);

/// Applies pPMD deflation for each prior factor in turn.
Matrix deflate_sequence(const Matrix& z, const std::vector<sparse::SparseFactor>& prior);

/// Worker count: explicit value if positive, else SPARSE_CA_THREADS, else
/// hardware concurrency.
int resolve_threads(int requested);

/// Evaluates fn(i) for i in [0, n) on up to `threads` workers. Results are
/// stored by index, so the output does not depend on scheduling.
template <typename T>
std::vector<T> parallel_map(std::size_t n, int threads, const std::function<T(std::size_t)>& fn);

}  // namespace sparseca::tuning

#include "sparseca/detail/parallel_map.hpp"
