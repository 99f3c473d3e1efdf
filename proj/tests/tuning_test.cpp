#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "sparseca/errors.hpp"
#include "sparseca/tuning.hpp"
#include "support.hpp"

namespace sparseca {
namespace {

using sparse::L1Budgets;
using sparse::Variant;
using testing::Rng;
using namespace tuning;

// trace(X P X') / trace(X X') with P = W (W'W)^-1 W'
double projected_share(const Matrix& x, const Matrix& w) {
  const Matrix p = w * (w.transpose() * w).inverse() * w.transpose();
  return (x * p * x.transpose()).trace() / (x * x.transpose()).trace();
}

Matrix leading_right_vectors(const Matrix& z, Eigen::Index k) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(z.transpose() * z);
  return es.eigenvectors().rowwise().reverse().leftCols(k);
}

SearchOptions single_thread() {
  SearchOptions o;
  o.threads = 1;
  return o;
}

TEST(ExplainedVariance, MatchesProjectorFormula) {
  Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix x = testing::random_matrix(rng, 12, 9);
    const Matrix w = testing::random_matrix(rng, 9, 1 + trial % 4);
    const auto got = explained_variance(x, w);
    EXPECT_NEAR(got.fraction, projected_share(x, w), 1e-12);
    EXPECT_FALSE(got.rank_deficient);
    EXPECT_GE(got.fraction, 0.0);
    EXPECT_LE(got.fraction, 1.0);
  }
}

TEST(ExplainedVariance, LeadingSingularVectorGivesSpectralShare) {
  Rng rng(42);
  const Matrix x = testing::random_matrix(rng, 10, 7);
  const Vector ev = testing::gram_eigenvalues(x);
  const auto got = explained_variance(x, leading_right_vectors(x, 1));
  EXPECT_NEAR(got.fraction, ev(0) / ev.sum(), 1e-12);
  const auto all = explained_variance(x, leading_right_vectors(x, 7));
  EXPECT_NEAR(all.fraction, 1.0, 1e-12);
}

TEST(ExplainedVariance, RankDeficientWeightsUsePseudoInverse) {
  Rng rng(43);
  const Matrix x = testing::random_matrix(rng, 8, 6);
  const Matrix w1 = testing::random_matrix(rng, 6, 1);
  Matrix w(6, 2);
  w << w1, 2.0 * w1;
  const auto got = explained_variance(x, w);
  EXPECT_TRUE(got.rank_deficient);
  EXPECT_NEAR(got.fraction, projected_share(x, w1), 1e-12);
  EXPECT_THROW(explained_variance(x, Matrix::Zero(6, 1)), DegenerateInputError);
  EXPECT_THROW(explained_variance(x, Matrix::Ones(5, 1)), InputError);
}

TEST(SparsityIndex, ZeroWithoutZeros) {
  Rng rng(44);
  const Matrix z = testing::random_matrix(rng, 7, 6);
  const auto f = sparse::pmd_rank1(z, {std::sqrt(7.0), std::sqrt(6.0)});
  ASSERT_EQ(f.nnz_u + f.nnz_v, 13);
  EXPECT_EQ(is_criterion(z, {f}, Variant::doubly_sparse), 0.0);
}

TEST(SparsityIndex, MatchesHandComputation) {
  Rng rng(45);
  const Matrix z = testing::random_matrix(rng, 9, 8);
  const auto f = sparse::pmd_rank1(z, {1.6, 1.4});
  const int zeros = 17 - f.nnz_u - f.nnz_v;
  ASSERT_GT(zeros, 0);
  const double fit_sparse = projected_share(z, f.v);
  const double fit_full = projected_share(z, leading_right_vectors(z, 1));
  const double share = zeros / 17.0;
  EXPECT_NEAR(is_criterion(z, {f}, Variant::doubly_sparse),
              fit_sparse / fit_full * share * share, 1e-12);
  EXPECT_NEAR(is_criterion(z, {f}, Variant::doubly_sparse, IsOrientation::printed),
              fit_full / fit_sparse * share * share, 1e-12);

  const int zeros_v = 8 - f.nnz_v;
  EXPECT_NEAR(is_criterion(z, {f}, Variant::column_sparse),
              fit_sparse / fit_full * (zeros_v / 8.0) * (zeros_v / 8.0), 1e-12);
}

TEST(SparsityIndex, InvariantToWeightSigns) {
  Rng rng(46);
  const Matrix z = testing::random_matrix(rng, 9, 8);
  auto f = sparse::pmd_rank1(z, {1.5, 1.5});
  const double before = is_criterion(z, {f}, Variant::doubly_sparse);
  f.u = -f.u;
  f.v = -f.v;
  EXPECT_DOUBLE_EQ(is_criterion(z, {f}, Variant::doubly_sparse), before);
  EXPECT_THROW(is_criterion(z, {}, Variant::doubly_sparse), InputError);
}

TEST(Bic, MatchesFormula) {
  Rng rng(47);
  const Matrix z = testing::random_matrix(rng, 10, 8);
  const Vector ev = testing::gram_eigenvalues(z);
  const double sigma2 = estimate_sigma2(z, Variant::doubly_sparse);
  EXPECT_NEAR(sigma2, (ev.sum() - ev(0)) / (80.0 - 18.0), 1e-12);
  EXPECT_NEAR(estimate_sigma2(z, Variant::column_sparse), (ev.sum() - ev(0)) / (80.0 - 8.0),
              1e-12);

  const auto f = sparse::pmd_rank1(z, {1.8, 1.6});
  const double residual = (z - f.alpha * f.u * f.v.transpose()).squaredNorm();
  EXPECT_NEAR(bic_criterion(z, f, sigma2, Variant::doubly_sparse),
              residual / (80.0 * sigma2) + std::log(80.0) / 80.0 * (f.nnz_u + f.nnz_v), 1e-12);
  EXPECT_NEAR(bic_criterion(z, f, sigma2, Variant::column_sparse),
              residual / (80.0 * sigma2) + std::log(80.0) / 80.0 * f.nnz_v, 1e-12);
  EXPECT_THROW(bic_criterion(z, f, 0.0, Variant::doubly_sparse), InputError);
}

TEST(Bic, SmallMatrixHasNoNoiseEstimate) {
  Rng rng(48);
  const Matrix z = testing::random_matrix(rng, 2, 2);
  EXPECT_THROW(estimate_sigma2(z, Variant::doubly_sparse), InputError);
  EXPECT_THROW(grid_search_1d(z, {1.0}, Criterion::bic, GridMode::coupled, single_thread()),
               InputError);
  const auto is = grid_search_1d(z, {1.0}, Criterion::is, GridMode::coupled, single_thread());
  EXPECT_TRUE(std::isnan(is.optimum.bic));
}

TEST(CrossValidation, RecoversRankOneData) {
  Rng rng(49);
  const Matrix z = testing::random_matrix(rng, 20, 1) * testing::random_matrix(rng, 1, 15);
  const L1Budgets dense{std::sqrt(20.0), std::sqrt(15.0)};
  CvOptions o;
  o.impute_sweeps = 200;
  EXPECT_LE(cv_error(z, dense, o), 1e-6 * z.squaredNorm() / 300.0);
}

TEST(CrossValidation, DeterministicPerSeed) {
  Rng rng(50);
  const Matrix z = testing::random_matrix(rng, 12, 10);
  const L1Budgets b{2.0, 2.0};
  CvOptions o;
  o.seed = 7;
  const double first = cv_error(z, b, o);
  EXPECT_EQ(cv_error(z, b, o), first);
  o.seed = 8;
  EXPECT_NE(cv_error(z, b, o), first);
}

TEST(CrossValidation, RejectsBadOptions) {
  const Matrix z = Matrix::Ones(4, 4);
  CvOptions o;
  o.folds = 0;
  EXPECT_THROW(cv_error(z, {}, o), InputError);
  o = {};
  o.holdout_fraction = 1.0;
  EXPECT_THROW(cv_error(z, {}, o), InputError);
}

TEST(CrossValidation, PrefersSparseFitForSparseSignal) {
  Rng rng(51);
  Vector u = Vector::Zero(20);
  Vector v = Vector::Zero(15);
  u.head(4) << 2, -2, 1.5, 1;
  v.head(3) << 2, 1.5, -1;
  std::normal_distribution<double> noise(0.0, 0.1);
  Matrix z = u * v.transpose();
  for (auto& x : z.reshaped()) x += noise(rng);
  CvOptions o;
  o.repeats = 2;
  // budgets just above the true L1/L2 ratios (1.94 and 1.67)
  const double matched = cv_error(z, {2.0, 1.7}, o);
  const double dense = cv_error(z, {std::sqrt(20.0), std::sqrt(15.0)}, o);
  const double starved = cv_error(z, {1.0, 1.0}, o);
  EXPECT_LT(matched, dense);
  EXPECT_LT(dense, starved);
}

TEST(GridSearch, OneDimensionalOptimumIsExhaustive) {
  Rng rng(52);
  const Matrix z = testing::random_matrix(rng, 10, 9);
  const auto grid = default_coupled_grid(10, 9, 0.05);
  const auto result = grid_search_1d(z, grid, Criterion::is, GridMode::coupled, single_thread());
  ASSERT_EQ(result.grid.cells.size(), grid.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double s = grid[i];
    const auto f = sparse::pmd_rank1(z, {std::sqrt(10.0) * s, 3.0 * s});
    const double is = is_criterion(z, {f}, Variant::doubly_sparse);
    EXPECT_NEAR(result.grid.cells[i].is, is, 1e-12) << "at " << s;
    EXPECT_EQ(result.grid.cells[i].nnz_u, f.nnz_u);
    if (is > result.grid.cells[best].is) best = i;
  }
  EXPECT_EQ(result.optimum_index, best);
  EXPECT_EQ(result.optimum.param_u, grid[best]);
}

TEST(GridSearch, BicAndCvAreMinimized) {
  Rng rng(53);
  const Matrix z = testing::random_matrix(rng, 9, 8);
  const std::vector<double> grid{0.4, 0.6, 0.8, 1.0};
  for (auto criterion : {Criterion::bic, Criterion::cv}) {
    const auto result = grid_search_1d(z, grid, criterion, GridMode::coupled, single_thread());
    for (const auto& cell : result.grid.cells) {
      const double value = criterion == Criterion::bic ? cell.bic : *cell.cv;
      const double best = criterion == Criterion::bic ? result.optimum.bic : *result.optimum.cv;
      EXPECT_GE(value, best);
    }
  }
}

TEST(GridSearch, TiesGoToSmallerParameter) {
  Rng rng(54);
  const Matrix z = testing::random_matrix(rng, 5, 4);
  // every budget here leaves both vectors dense, so IS is zero throughout
  const auto result =
      grid_search_1d(z, {2.0, 1.99, 1.995}, Criterion::is, GridMode::sumabsv, single_thread());
  for (const auto& cell : result.grid.cells) ASSERT_EQ(cell.nnz_v, 4);
  EXPECT_EQ(result.optimum_index, 0u);
  EXPECT_EQ(result.optimum.param_u, 1.99);
}

TEST(GridSearch, TwoDimensionalOptimumIsExhaustive) {
  Rng rng(55);
  const Matrix z = testing::random_matrix(rng, 9, 8);
  const std::vector<double> gu{1.0, 1.6, 2.2, 3.0};
  const std::vector<double> gv{1.0, 1.5, 2.0, std::sqrt(8.0)};
  const auto result = grid_search_2d(z, gu, gv, Criterion::is, single_thread());
  ASSERT_EQ(result.grid.cells.size(), 16u);
  std::size_t best = 0;
  for (std::size_t i = 0; i < 16; ++i) {
    const auto f = sparse::pmd_rank1(z, {gu[i / 4], gv[i % 4]});
    EXPECT_NEAR(result.grid.cells[i].is, is_criterion(z, {f}, Variant::doubly_sparse), 1e-12);
    EXPECT_EQ(result.grid.cells[i].param_u, gu[i / 4]);
    EXPECT_EQ(result.grid.cells[i].param_v, gv[i % 4]);
    if (result.grid.cells[i].is > result.grid.cells[best].is) best = i;
  }
  EXPECT_EQ(result.optimum_index, best);
}

TEST(GridSearch, ThreadCountDoesNotChangeResults) {
  Rng rng(56);
  const Matrix z = testing::random_matrix(rng, 10, 9);
  SearchOptions many;
  many.threads = 6;
  const auto grid = default_coupled_grid(10, 9, 0.05);
  const auto a = grid_search_1d(z, grid, Criterion::cv, GridMode::coupled, single_thread());
  const auto b = grid_search_1d(z, grid, Criterion::cv, GridMode::coupled, many);
  ASSERT_EQ(a.grid.cells.size(), b.grid.cells.size());
  for (std::size_t i = 0; i < a.grid.cells.size(); ++i) {
    EXPECT_EQ(a.grid.cells[i].is, b.grid.cells[i].is);
    EXPECT_EQ(*a.grid.cells[i].cv, *b.grid.cells[i].cv);
  }
  EXPECT_EQ(a.optimum_index, b.optimum_index);
}

TEST(GridSearch, RejectsOutOfRangeValues) {
  const Matrix z = Matrix::Identity(4, 4);
  EXPECT_THROW(grid_search_1d(z, {0.2}, Criterion::is, GridMode::coupled), InputError);
  EXPECT_THROW(grid_search_1d(z, {2.5}, Criterion::is, GridMode::sumabsv), InputError);
  EXPECT_THROW(grid_search_1d(z, {}, Criterion::is, GridMode::coupled), InputError);
}

TEST(Grids, CoupledLatticeStartsAboveBound) {
  const auto g = default_coupled_grid(10, 9);
  ASSERT_EQ(g.size(), 67u);
  EXPECT_DOUBLE_EQ(g.front(), 0.34);
  EXPECT_DOUBLE_EQ(g.back(), 1.0);
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_NEAR(g[i] - g[i - 1], 0.01, 1e-12);
}

TEST(Grids, AbsoluteGridEndsAtRoot) {
  const auto nine = default_absolute_grid(9);
  ASSERT_EQ(nine.size(), 11u);
  EXPECT_DOUBLE_EQ(nine.front(), 1.0);
  EXPECT_DOUBLE_EQ(nine.back(), 3.0);
  const auto ten = default_absolute_grid(10);
  EXPECT_DOUBLE_EQ(ten.back(), std::sqrt(10.0));
  EXPECT_NEAR(ten[ten.size() - 2], 3.0, 1e-12);
}

TEST(WeightPaths, SingletonGridGivesOneColumn) {
  Rng rng(57);
  const Matrix z = testing::random_matrix(rng, 6, 5);
  const auto path = weight_paths(z, {0.6}, GridMode::coupled, single_thread());
  ASSERT_EQ(path.params.size(), 1u);
  ASSERT_EQ(path.v.size(), 1u);
  const auto f = sparse::pmd_rank1(z, {std::sqrt(6.0) * 0.6, std::sqrt(5.0) * 0.6});
  EXPECT_EQ(path.v[0], f.v);
  EXPECT_DOUBLE_EQ(path.zero_fraction_v[0], 1.0 - f.nnz_v / 5.0);
}

TEST(Deflation, SequenceMatchesStepwiseProjection) {
  Rng rng(58);
  const Matrix z = testing::random_matrix(rng, 7, 6);
  const auto f1 = sparse::pmd_rank1(z, {1.5, 1.5});
  const Matrix z1 = sparse::ppmd_deflate(z, f1.u, f1.v);
  const auto f2 = sparse::pmd_rank1(z1, {1.5, 1.5});
  const Matrix expected = (Matrix::Identity(7, 7) - f2.u * f2.u.transpose()) * z1 *
                          (Matrix::Identity(6, 6) - f2.v * f2.v.transpose());
  EXPECT_LE((deflate_sequence(z, {f1, f2}) - expected).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(ParallelMap, OrderedResultsAndErrors) {
  const auto squares =
      parallel_map<int>(100, 8, [](std::size_t i) { return static_cast<int>(i * i); });
  for (std::size_t i = 0; i < 100; ++i) EXPECT_EQ(squares[i], static_cast<int>(i * i));
  EXPECT_THROW(parallel_map<int>(50, 4,
                                 [](std::size_t i) -> int {
                                   if (i == 17) throw std::runtime_error("boom");
                                   return 0;
                                 }),
               std::runtime_error);
  EXPECT_TRUE(parallel_map<int>(0, 4, [](std::size_t) { return 1; }).empty());
}

TEST(ParallelMap, ThreadCountResolution) {
  EXPECT_EQ(resolve_threads(3), 3);
  ::setenv("SPARSE_CA_THREADS", "5", 1);
  EXPECT_EQ(resolve_threads(0), 5);
  ::setenv("SPARSE_CA_THREADS", "junk", 1);
  EXPECT_GE(resolve_threads(0), 1);
  ::unsetenv("SPARSE_CA_THREADS");
}

}  // namespace
}  // namespace sparseca
