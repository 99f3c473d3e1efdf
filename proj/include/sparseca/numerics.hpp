#pragma once

#include <Eigen/Dense>

namespace sparseca {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace numerics {

/// Thin singular value decomposition  m = U diag(s) V'.
///
/// `singular_values` has min(rows, cols) entries in nonincreasing order.
/// `left` is rows x min(rows, cols) and `right` is cols x min(rows, cols),
/// both with orthonormal columns (null-space columns are completed to an
/// orthonormal basis when the matrix is rank deficient).
struct SvdResult {
  Vector singular_values;
  Matrix left;
  Matrix right;
};

/// One-sided (Hestenes) Jacobi SVD.
///
/// Each singular pair is oriented so that the largest-magnitude entry of the
/// right vector is positive (lowest index wins ties).
/// Throws InputError on non-finite entries or an empty matrix.
SvdResult full_svd(const Matrix& m);

/// Componentwise sign(x) * max(|x| - delta, 0). Throws InputError if delta < 0.
Vector soft_threshold(const Vector& x, double delta);

/// Result of the L1-constrained unit-vector search.
struct L1UnitVector {
  Vector w;            ///< unit Euclidean norm, ||w||_1 <= budget (+1e-8)
  double delta = 0.0;  ///< soft threshold applied to the input
  bool one_sparse_fallback = false;
};

/// Maximizer of w'x over {||w||_2 <= 1, ||w||_1 <= c}: the normalized
/// soft-thresholded x with the smallest threshold meeting the L1 budget.
///
/// Requires 1 <= c <= sqrt(length(x)) (InputError otherwise) and x not all
/// zero (DegenerateInputError). c == 1 returns the 1-sparse vector at the
/// first index of max |x_i|.
L1UnitVector l1_constrained_unit_vector(const Vector& x, double c);

/// Index of the first entry of maximal absolute value.
Eigen::Index argmax_abs(const Vector& x);

/// Number of entries that are exactly nonzero.
int count_nonzero(const Vector& x);

/// Throws InputError if any entry is NaN or infinite.
void require_finite(const Matrix& m, const char* what);

}  // namespace numerics
}  // namespace sparseca
