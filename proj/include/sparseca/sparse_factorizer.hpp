#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sparseca/ca.hpp"
#include "sparseca/numerics.hpp"

namespace sparseca::sparse {

enum class Variant { doubly_sparse, column_sparse };
enum class Axis { rows, cols };
enum class ColumnScale { barycentric, rescaled };

/// How the L1 budgets of one dimension are chosen.
///
///  - absolute:         sumabsu in [1, sqrt(I)], sumabsv in [1, sqrt(J)]
///  - coupled:          one sumabs in (max(1/sqrt(I), 1/sqrt(J)), 1];
///                      sumabsu = sqrt(I) sumabs, sumabsv = sqrt(J) sumabs
///  - unpenalized_rows: u only normalized, sumabsv in [1, sqrt(J)]
///  - nonzero_target:   budget on `axis` searched so that about `count`
///                      weights are nonzero, the other axis unpenalized
struct SparsityConstraint {
  enum class Mode { absolute, coupled, unpenalized_rows, nonzero_target };

  Mode mode = Mode::coupled;
  double sumabs = 1.0;
  double sumabsu = 1.0;
  double sumabsv = 1.0;
  int count = 1;
  Axis axis = Axis::cols;

  static SparsityConstraint absolute(double sumabsu, double sumabsv);
  static SparsityConstraint coupled(double sumabs);
  static SparsityConstraint unpenalized_rows(double sumabsv);
  static SparsityConstraint nonzero_target(int count, Axis axis);

  /// Throws InputError when the values fall outside the ranges above.
  void validate(Eigen::Index rows, Eigen::Index cols) const;
};

/// L1 budgets for u and v; nullopt means that side is not penalized.
struct L1Budgets {
  std::optional<double> u;
  std::optional<double> v;
};

/// Budgets implied by a constraint on a rows x cols matrix. nonzero_target
/// cannot be resolved without data; use nnz_target_search for it.
L1Budgets resolve_budgets(const SparsityConstraint& constraint, Eigen::Index rows,
                          Eigen::Index cols);

struct PmdOptions {
  double tolerance = 1e-7;  ///< L-infinity change of v between iterations
  int max_iterations = 200;
  bool record_objective = false;
};

/// One pseudo-singular triplet.
struct SparseFactor {
  Vector u;
  Vector v;
  double alpha = 0.0;   ///< u'Zv on the matrix the factor was fitted to
  double lambda = 0.0;  ///< alpha^2
  int nnz_u = 0;
  int nnz_v = 0;
  L1Budgets budgets;
  int iterations = 0;
  bool converged = false;
  /// u'Zv after every half-update when PmdOptions::record_objective is set.
  /// The first entry pairs the new u with the unconstrained start v, so the
  /// sequence is nondecreasing only from the second entry on.
  std::vector<double> objective;
};

/// Rank-1 penalized matrix decomposition: alternate
///   u <- l1_constrained_unit_vector(Z v, sumabsu),
///   v <- l1_constrained_unit_vector(Z'u, sumabsv)
/// from the leading right singular vector until v settles. The returned pair
/// is oriented so the largest-magnitude entry of v is positive.
SparseFactor pmd_rank1(const Matrix& z, const L1Budgets& budgets, const PmdOptions& options = {});

/// Projected deflation (I - uu') Z (I - vv'). u and v must have unit norm.
Matrix ppmd_deflate(const Matrix& z, const Vector& u, const Vector& v);

/// Largest of ||Z'v||_inf and ||u'Z'||_inf for a deflated matrix.
double deflation_residual(const Matrix& deflated, const Vector& u, const Vector& v);

struct NnzSearchResult {
  double budget = 1.0;
  int achieved_nnz = 0;
  bool reached = false;
  SparseFactor factor;
};

/// Smallest budget on `axis` from the grid 1, 1+step, ... (capped at
/// sqrt(dim)) whose factor has at least `target` nonzero weights on that axis.
/// When no grid value gets there the closest achievable one is returned with
/// reached == false.
NnzSearchResult nnz_target_search(const Matrix& z, int target, Axis axis,
                                  std::optional<double> other_budget = std::nullopt,
                                  double step = 0.2);

struct Coordinates {
  Vector a;
  Vector b;
};

/// Principal-like coordinates from sparse weights:
///   a ~ Dr^-1 (P - rc') Dc^-1/2 v   with a'Dr a = lambda,
///   b ~ Dc^-1 (P - rc')' Dr^-1/2 u  with b'Dc b = lambda,
/// signed so that <a, Dr^-1/2 u> >= 0 and <b, Dc^-1/2 v> >= 0.
Coordinates coordinates_from_weights(const ca::Correspondence& corr, const Vector& u,
                                     const Vector& v, double lambda);

/// Column display for the column-sparse variant: barycenters Dc^-1 P'a of the
/// row points, optionally rescaled to b'Dc b = lambda.
Vector column_sparse_coordinates(const ca::Correspondence& corr, const Vector& a,
                                 double lambda, ColumnScale scale);

/// Pairwise inner products between dimensions.
struct GramReport {
  Matrix u;  ///< <u_s, u_t>
  Matrix v;  ///< <v_s, v_t>
  Matrix a;  ///< <a_s, a_t>_Dr
  Matrix b;  ///< <b_s, b_t>_Dc
};

struct SparseCaModel {
  Variant variant = Variant::doubly_sparse;
  ColumnScale column_scale = ColumnScale::rescaled;
  ca::Correspondence corr;
  Matrix z;
  double total_inertia = 0.0;

  std::vector<SparseFactor> factors;
  Vector lambdas;             ///< (u'Zv)^2 evaluated on the undeflated Z
  Vector lambda_shares;       ///< lambdas / total inertia
  Vector explained;           ///< per-dimension projected variance fraction
  Vector cumulative_explained;
  Matrix row_coords;
  Matrix col_coords;
  GramReport gram;
  double max_deflation_residual = 0.0;
  std::vector<std::string> warnings;

  int dims() const noexcept { return static_cast<int>(factors.size()); }
  Matrix row_weights() const;
  Matrix col_weights() const;
};

/// Extracts `dims` sparse factors from the standardized residuals with pPMD
/// deflation between them. One constraint per dimension. The column-sparse
/// variant never penalizes u.
SparseCaModel fit_sparse_ca(const ContingencyTable& table,
                            const std::vector<SparsityConstraint>& constraints, int dims,
                            Variant variant, ColumnScale column_scale = ColumnScale::rescaled);

/// Weights, contributions and zero flags of a sparse model.
///
/// The contribution of a category to an axis is its squared weight, so
/// zero-weight categories contribute exactly nothing and every axis sums to
/// one. With dense CA singular vectors this is r_i a_ik^2 / lambda_k.
struct SparseContributions {
  Matrix row_weights;
  Matrix col_weights;
  Matrix rows;
  Matrix cols;
  std::vector<bool> row_all_zero;  ///< zero weight on every dimension
  std::vector<bool> col_all_zero;
};

SparseContributions sparse_contributions(const SparseCaModel& model);

}  // namespace sparseca::sparse
