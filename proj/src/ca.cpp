#include "sparseca/ca.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "sparseca/errors.hpp"

namespace sparseca {

namespace {

void require_unique(const std::vector<std::string>& labels, const char* axis) {
  std::unordered_set<std::string> seen;
  for (const auto& label : labels) {
    if (!seen.insert(label).second) {
      throw InputError(std::string("duplicate ") + axis + " label '" + label + "'");
    }
  }
}

}  // namespace

ContingencyTable::ContingencyTable(Matrix counts, std::vector<std::string> row_labels,
                                   std::vector<std::string> col_labels)
    : counts_(std::move(counts)),
      row_labels_(std::move(row_labels)),
      col_labels_(std::move(col_labels)) {
  if (counts_.rows() == 0 || counts_.cols() == 0) throw InputError("contingency table is empty");
  if (static_cast<Eigen::Index>(row_labels_.size()) != counts_.rows() ||
      static_cast<Eigen::Index>(col_labels_.size()) != counts_.cols()) {
    throw InputError("contingency table: label count does not match matrix shape");
  }
  numerics::require_finite(counts_, "contingency table");
  if ((counts_.array() < 0.0).any()) throw InputError("contingency table: negative count");
  require_unique(row_labels_, "row");
  require_unique(col_labels_, "column");

  const Vector row_sums = counts_.rowwise().sum();
  const Vector col_sums = counts_.colwise().sum();
  for (Eigen::Index i = 0; i < counts_.rows(); ++i) {
    if (row_sums(i) <= 0.0) throw SingularMarginError("row", row_labels_[i]);
  }
  for (Eigen::Index j = 0; j < counts_.cols(); ++j) {
    if (col_sums(j) <= 0.0) throw SingularMarginError("column", col_labels_[j]);
  }
  total_ = counts_.sum();
}

namespace ca {

Correspondence correspondence_matrix(const ContingencyTable& table) {
  Correspondence out;
  out.p = table.counts() / table.total();
  out.r = out.p.rowwise().sum();
  out.c = out.p.colwise().sum().transpose();
  return out;
}

Matrix standardized_residuals(const Matrix& p, const Vector& r, const Vector& c) {
  if (p.rows() != r.size() || p.cols() != c.size()) {
    throw InputError("standardized_residuals: shape mismatch");
  }
  if ((r.array() <= 0.0).any() || (c.array() <= 0.0).any()) {
    throw InputError("standardized_residuals: margins must be positive");
  }
  Matrix z(p.rows(), p.cols());
  for (Eigen::Index j = 0; j < p.cols(); ++j) {
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
      const double expected = r(i) * c(j);
      z(i, j) = (p(i, j) - expected) / std::sqrt(expected);
    }
  }
  return z;
}

CaFit fit_ca(const ContingencyTable& table, int dims) {
  const auto max_dims = std::min(table.rows(), table.cols()) - 1;
  if (dims < 1 || dims > max_dims) {
    throw InputError("fit_ca: dims must lie in [1, " + std::to_string(max_dims) + "]");
  }
  CaFit fit;
  fit.corr = correspondence_matrix(table);
  fit.z = standardized_residuals(fit.corr.p, fit.corr.r, fit.corr.c);
  const auto svd = numerics::full_svd(fit.z);

  fit.eigenvalues = svd.singular_values.head(max_dims).array().square();
  fit.total_inertia = fit.z.squaredNorm();
  fit.u = svd.left.leftCols(dims);
  fit.v = svd.right.leftCols(dims);

  const Vector alpha = svd.singular_values.head(dims);
  const Vector inv_sqrt_r = fit.corr.r.array().rsqrt();
  const Vector inv_sqrt_c = fit.corr.c.array().rsqrt();
  fit.row_coords = inv_sqrt_r.asDiagonal() * fit.u * alpha.asDiagonal();
  fit.col_coords = inv_sqrt_c.asDiagonal() * fit.v * alpha.asDiagonal();
  return fit;
}

ContributionTable contributions(const CaFit& fit) {
  const int k = fit.dims();
  ContributionTable out;
  out.rows = Matrix::Zero(fit.row_coords.rows(), k);
  out.cols = Matrix::Zero(fit.col_coords.rows(), k);
  out.degenerate_axis.assign(static_cast<std::size_t>(k), false);
  for (int axis = 0; axis < k; ++axis) {
    const double lambda = fit.eigenvalues(axis);
    // eigenvalues lie in [0, 1]; anything at rounding level has no mass
    if (lambda <= 1e-13) {
      out.degenerate_axis[static_cast<std::size_t>(axis)] = true;
      continue;
    }
    out.rows.col(axis) =
        fit.corr.r.array() * fit.row_coords.col(axis).array().square() / lambda;
    out.cols.col(axis) =
        fit.corr.c.array() * fit.col_coords.col(axis).array().square() / lambda;
  }
  return out;
}

double total_inertia(const ContingencyTable& table) {
  const auto corr = correspondence_matrix(table);
  double phi2 = 0.0;
  for (Eigen::Index j = 0; j < corr.p.cols(); ++j) {
    for (Eigen::Index i = 0; i < corr.p.rows(); ++i) {
      const double expected = corr.r(i) * corr.c(j);
      const double diff = corr.p(i, j) - expected;
      phi2 += diff * diff / expected;
    }
  }
  return phi2;
}

}  // namespace ca
}  // namespace sparseca
