#include "sparseca/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "sparseca/errors.hpp"

namespace sparseca::numerics {

namespace {

constexpr int kMaxSweeps = 80;
constexpr int kMaxBisections = 60;
constexpr double kL1Gap = 1e-8;

// Extends the orthonormal columns [0, filled) of q to a full orthonormal set
// by Gram-Schmidt against the canonical basis.
void complete_orthonormal_basis(Matrix& q, Eigen::Index filled) {
  const Eigen::Index m = q.rows();
  for (Eigen::Index col = filled; col < q.cols(); ++col) {
    Vector best;
    double best_norm = -1.0;
    for (Eigen::Index k = 0; k < m; ++k) {
      Vector e = Vector::Unit(m, k);
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index j = 0; j < col; ++j) e -= q.col(j).dot(e) * q.col(j);
      }
      const double n = e.norm();
      if (n > best_norm + 1e-12) {
        best_norm = n;
        best = e;
      }
      if (best_norm > 0.7) break;
    }
    q.col(col) = best / best_norm;
  }
}

// Hestenes one-sided Jacobi on a matrix with rows >= cols.
SvdResult jacobi_tall(const Matrix& m) {
  const Eigen::Index rows = m.rows();
  const Eigen::Index cols = m.cols();
  const double eps = std::numeric_limits<double>::epsilon();

  Matrix a = m;
  Matrix v = Matrix::Identity(cols, cols);
  Vector sq(cols);
  for (Eigen::Index j = 0; j < cols; ++j) sq(j) = a.col(j).squaredNorm();

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (Eigen::Index p = 0; p + 1 < cols; ++p) {
      for (Eigen::Index q = p + 1; q < cols; ++q) {
        const double alpha = sq(p);
        const double beta = sq(q);
        if (alpha == 0.0 || beta == 0.0) continue;
        const double gamma = a.col(p).dot(a.col(q));
        if (std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (Eigen::Index i = 0; i < rows; ++i) {
          const double ap = a(i, p);
          const double aq = a(i, q);
          a(i, p) = c * ap - s * aq;
          a(i, q) = s * ap + c * aq;
        }
        for (Eigen::Index i = 0; i < cols; ++i) {
          const double vp = v(i, p);
          const double vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
        sq(p) = a.col(p).squaredNorm();
        sq(q) = a.col(q).squaredNorm();
      }
    }
    if (!rotated) break;
  }

  Vector sigma(cols);
  for (Eigen::Index j = 0; j < cols; ++j) sigma(j) = a.col(j).norm();

  std::vector<Eigen::Index> order(static_cast<std::size_t>(cols));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return sigma(x) > sigma(y); });

  const double sigma_max = cols > 0 ? sigma(order.front()) : 0.0;
  const double cutoff = static_cast<double>(std::max(rows, cols)) * eps * sigma_max;

  SvdResult out;
  out.singular_values = Vector::Zero(cols);
  out.left = Matrix::Zero(rows, cols);
  out.right = Matrix::Zero(cols, cols);
  Eigen::Index nonzero = 0;
  for (Eigen::Index k = 0; k < cols; ++k) {
    const Eigen::Index j = order[static_cast<std::size_t>(k)];
    out.right.col(k) = v.col(j);
    if (sigma(j) > cutoff && sigma(j) > 0.0) {
      out.singular_values(k) = sigma(j);
      out.left.col(k) = a.col(j) / sigma(j);
      nonzero = k + 1;
    }
  }
  complete_orthonormal_basis(out.left, nonzero);
  return out;
}

void orient(SvdResult& svd) {
  for (Eigen::Index k = 0; k < svd.right.cols(); ++k) {
    const Eigen::Index idx = argmax_abs(svd.right.col(k));
    if (svd.right(idx, k) < 0.0) {
      svd.right.col(k) *= -1.0;
      svd.left.col(k) *= -1.0;
    }
  }
}

double l1_over_l2(const Vector& s) {
  const double n2 = s.norm();
  return n2 > 0.0 ? s.lpNorm<1>() / n2 : 0.0;
}

Vector one_sparse(const Vector& x) {
  Vector w = Vector::Zero(x.size());
  const Eigen::Index idx = argmax_abs(x);
  w(idx) = x(idx) >= 0.0 ? 1.0 : -1.0;
  return w;
}

}  // namespace

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw InputError(std::string(what) + ": non-finite entry");
}

Eigen::Index argmax_abs(const Vector& x) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < x.size(); ++i) {
    if (std::abs(x(i)) > std::abs(x(best))) best = i;
  }
  return best;
}

int count_nonzero(const Vector& x) {
  return static_cast<int>((x.array() != 0.0).count());
}

SvdResult full_svd(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) throw InputError("full_svd: empty matrix");
  require_finite(m, "full_svd");
  SvdResult out;
  if (m.rows() >= m.cols()) {
    out = jacobi_tall(m);
  } else {
    SvdResult t = jacobi_tall(m.transpose());
    out.singular_values = std::move(t.singular_values);
    out.left = std::move(t.right);
    out.right = std::move(t.left);
  }
  orient(out);
  return out;
}

Vector soft_threshold(const Vector& x, double delta) {
  if (!(delta >= 0.0)) throw InputError("soft_threshold: delta must be nonnegative");
  Vector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double mag = std::abs(x(i)) - delta;
    out(i) = mag > 0.0 ? std::copysign(mag, x(i)) : 0.0;
  }
  return out;
}

L1UnitVector l1_constrained_unit_vector(const Vector& x, double c) {
  const double n = static_cast<double>(x.size());
  if (x.size() == 0) throw InputError("l1_constrained_unit_vector: empty vector");
  if (!x.allFinite()) throw InputError("l1_constrained_unit_vector: non-finite entry");
  // the upper end tolerates rounding in sqrt(n) computed by callers
  if (!(c >= 1.0) || c > std::sqrt(n) * (1.0 + 1e-12)) {
    throw InputError("l1_constrained_unit_vector: budget must lie in [1, sqrt(length)]");
  }
  const double x_norm = x.norm();
  if (x_norm == 0.0) throw DegenerateInputError("l1_constrained_unit_vector: all-zero input");

  L1UnitVector out;
  if (x.lpNorm<1>() / x_norm <= c) {
    out.w = x / x_norm;
    return out;
  }
  const double top = x.cwiseAbs().maxCoeff();
  if (c == 1.0) {
    out.w = one_sparse(x);
    out.delta = top;
    out.one_sparse_fallback = true;
    return out;
  }

  // ratio(delta) = ||S(x,delta)||_1 / ||S(x,delta)||_2 is nonincreasing;
  // keep lo infeasible and hi feasible.
  double lo = 0.0;
  double hi = top;
  bool hi_is_limit = true;
  Vector hi_vec;
  for (int step = 0; step < kMaxBisections; ++step) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    Vector s = soft_threshold(x, mid);
    const double ratio = l1_over_l2(s);
    if (s.isZero(0.0)) {
      hi = mid;
      continue;
    }
    if (ratio <= c) {
      hi = mid;
      hi_is_limit = false;
      hi_vec = std::move(s);
      if (c - ratio <= kL1Gap) break;
    } else {
      lo = mid;
    }
  }
  if (hi_is_limit) {
    out.w = one_sparse(x);
    out.delta = top;
    out.one_sparse_fallback = true;
    return out;
  }
  out.w = hi_vec / hi_vec.norm();
  out.delta = hi;
  return out;
}

}  // namespace sparseca::numerics
