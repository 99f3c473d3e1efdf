#pragma once

#include <string>
#include <vector>

#include "sparseca/numerics.hpp"

namespace sparseca {

/// Nonnegative I x J count table with labelled axes.
///
/// Construction validates: finite nonnegative counts, positive total, no empty
/// row or column (SingularMarginError names the first offender), label counts
/// matching the matrix shape and labels unique per axis.
class ContingencyTable {
 public:
  ContingencyTable(Matrix counts, std::vector<std::string> row_labels,
                   std::vector<std::string> col_labels);

  const Matrix& counts() const noexcept { return counts_; }
  const std::vector<std::string>& row_labels() const noexcept { return row_labels_; }
  const std::vector<std::string>& col_labels() const noexcept { return col_labels_; }
  Eigen::Index rows() const noexcept { return counts_.rows(); }
  Eigen::Index cols() const noexcept { return counts_.cols(); }
  double total() const noexcept { return total_; }

 private:
  Matrix counts_;
  std::vector<std::string> row_labels_;
  std::vector<std::string> col_labels_;
  double total_ = 0.0;
};

namespace ca {

/// P = N / n with its row and column margins.
struct Correspondence {
  Matrix p;
  Vector r;
  Vector c;
};

Correspondence correspondence_matrix(const ContingencyTable& table);

/// Z_ij = (P_ij - r_i c_j) / sqrt(r_i c_j). Margins must be positive.
Matrix standardized_residuals(const Matrix& p, const Vector& r, const Vector& c);

/// Standard correspondence analysis fit.
///
/// `eigenvalues` holds all min(I-1, J-1) principal inertias; the singular
/// vectors and principal coordinates are restricted to the leading
/// `dims` axes:  A = Dr^-1/2 U Dalpha,  B = Dc^-1/2 V Dalpha.
struct CaFit {
  Correspondence corr;
  Matrix z;
  Vector eigenvalues;
  Matrix u;
  Matrix v;
  Matrix row_coords;
  Matrix col_coords;
  double total_inertia = 0.0;

  int dims() const noexcept { return static_cast<int>(u.cols()); }
};

/// Throws InputError unless 1 <= dims <= min(I-1, J-1).
CaFit fit_ca(const ContingencyTable& table, int dims);

/// Share of an axis in each category's mass-weighted squared coordinate.
struct ContributionTable {
  Matrix rows;  ///< I x k, each column sums to 1 (or is all zero if degenerate)
  Matrix cols;  ///< J x k
  std::vector<bool> degenerate_axis;
};

/// row_i,k = r_i A_ik^2 / lambda_k and col_j,k = c_j B_jk^2 / lambda_k.
/// Axes with lambda_k at rounding level (<= 1e-13) come back all-zero and
/// flagged degenerate.
ContributionTable contributions(const CaFit& fit);

/// Pearson phi^2 = sum_ij (p_ij - r_i c_j)^2 / (r_i c_j).
double total_inertia(const ContingencyTable& table);

}  // namespace ca
}  // namespace sparseca
