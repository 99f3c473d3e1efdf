#include "sparseca/sparse_factorizer.hpp"

#include <algorithm>
#include <cmath>

#include "sparseca/errors.hpp"
#include "sparseca/tuning.hpp"

namespace sparseca::sparse {

namespace {

constexpr double kUnitTolerance = 1e-10;

Vector update(const Vector& x, const std::optional<double>& budget) {
  if (budget) return numerics::l1_constrained_unit_vector(x, *budget).w;
  const double n = x.norm();
  if (n == 0.0) throw DegenerateInputError("pmd_rank1: zero product vector");
  return x / n;
}

void require_range(double value, double lo, double hi, const char* name) {
  // sqrt bounds are compared with a little slack for rounding in callers
  if (!(value >= lo) || value > hi * (1.0 + 1e-12)) {
    throw InputError(std::string(name) + " = " + std::to_string(value) + " outside [" +
                     std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
}

double clamp_to_sqrt(double value, Eigen::Index dim) {
  return std::min(value, std::sqrt(static_cast<double>(dim)));
}

}  // namespace

SparsityConstraint SparsityConstraint::absolute(double sumabsu, double sumabsv) {
  SparsityConstraint c;
  c.mode = Mode::absolute;
  c.sumabsu = sumabsu;
  c.sumabsv = sumabsv;
  return c;
}

SparsityConstraint SparsityConstraint::coupled(double sumabs) {
  SparsityConstraint c;
  c.mode = Mode::coupled;
  c.sumabs = sumabs;
  return c;
}

SparsityConstraint SparsityConstraint::unpenalized_rows(double sumabsv) {
  SparsityConstraint c;
  c.mode = Mode::unpenalized_rows;
  c.sumabsv = sumabsv;
  return c;
}

SparsityConstraint SparsityConstraint::nonzero_target(int count, Axis axis) {
  SparsityConstraint c;
  c.mode = Mode::nonzero_target;
  c.count = count;
  c.axis = axis;
  return c;
}

void SparsityConstraint::validate(Eigen::Index rows, Eigen::Index cols) const {
  const double sqrt_rows = std::sqrt(static_cast<double>(rows));
  const double sqrt_cols = std::sqrt(static_cast<double>(cols));
  switch (mode) {
    case Mode::absolute:
      require_range(sumabsu, 1.0, sqrt_rows, "sumabsu");
      require_range(sumabsv, 1.0, sqrt_cols, "sumabsv");
      break;
    case Mode::coupled: {
      const double lower = std::max(1.0 / sqrt_rows, 1.0 / sqrt_cols);
      if (!(sumabs > lower) || sumabs > 1.0) {
        throw InputError("sumabs = " + std::to_string(sumabs) + " outside (" +
                         std::to_string(lower) + ", 1]");
      }
      break;
    }
    case Mode::unpenalized_rows:
      require_range(sumabsv, 1.0, sqrt_cols, "sumabsv");
      break;
    case Mode::nonzero_target: {
      const Eigen::Index dim = axis == Axis::rows ? rows : cols;
      if (count < 1 || count > dim) {
        throw InputError("nonzero target " + std::to_string(count) + " outside [1, " +
                         std::to_string(dim) + "]");
      }
      break;
    }
  }
}

L1Budgets resolve_budgets(const SparsityConstraint& constraint, Eigen::Index rows,
                          Eigen::Index cols) {
  constraint.validate(rows, cols);
  L1Budgets b;
  switch (constraint.mode) {
    case SparsityConstraint::Mode::absolute:
      b.u = clamp_to_sqrt(constraint.sumabsu, rows);
      b.v = clamp_to_sqrt(constraint.sumabsv, cols);
      break;
    case SparsityConstraint::Mode::coupled:
      b.u = clamp_to_sqrt(std::sqrt(static_cast<double>(rows)) * constraint.sumabs, rows);
      b.v = clamp_to_sqrt(std::sqrt(static_cast<double>(cols)) * constraint.sumabs, cols);
      break;
    case SparsityConstraint::Mode::unpenalized_rows:
      b.v = clamp_to_sqrt(constraint.sumabsv, cols);
      break;
    case SparsityConstraint::Mode::nonzero_target:
      throw InputError("resolve_budgets: nonzero targets need nnz_target_search");
  }
  return b;
}

SparseFactor pmd_rank1(const Matrix& z, const L1Budgets& budgets, const PmdOptions& options) {
  numerics::require_finite(z, "pmd_rank1");
  if (z.isZero(0.0)) throw DegenerateInputError("pmd_rank1: zero matrix");
  if (budgets.u && (*budgets.u < 1.0 ||
                    *budgets.u > std::sqrt(static_cast<double>(z.rows())) * (1.0 + 1e-12))) {
    throw InputError("pmd_rank1: sumabsu outside [1, sqrt(rows)]");
  }
  if (budgets.v && (*budgets.v < 1.0 ||
                    *budgets.v > std::sqrt(static_cast<double>(z.cols())) * (1.0 + 1e-12))) {
    throw InputError("pmd_rank1: sumabsv outside [1, sqrt(cols)]");
  }

  SparseFactor f;
  f.budgets = budgets;
  Vector v = numerics::full_svd(z).right.col(0);
  Vector u;
  for (int it = 1; it <= options.max_iterations; ++it) {
    const Vector zv = z * v;
    u = update(zv, budgets.u);
    if (options.record_objective) f.objective.push_back(u.dot(zv));
    const Vector ztu = z.transpose() * u;
    Vector next = update(ztu, budgets.v);
    if (options.record_objective) f.objective.push_back(ztu.dot(next));
    const double change = (next - v).lpNorm<Eigen::Infinity>();
    v = std::move(next);
    f.iterations = it;
    if (change < options.tolerance) {
      f.converged = true;
      break;
    }
  }

  const Eigen::Index top = numerics::argmax_abs(v);
  if (v(top) < 0.0) {
    v = -v;
    u = -u;
  }
  f.alpha = u.dot(z * v);
  f.lambda = f.alpha * f.alpha;
  f.nnz_u = numerics::count_nonzero(u);
  f.nnz_v = numerics::count_nonzero(v);
  f.u = std::move(u);
  f.v = std::move(v);
  return f;
}

Matrix ppmd_deflate(const Matrix& z, const Vector& u, const Vector& v) {
  if (u.size() != z.rows() || v.size() != z.cols()) {
    throw InputError("ppmd_deflate: weight length does not match matrix shape");
  }
  if (std::abs(u.norm() - 1.0) > kUnitTolerance || std::abs(v.norm() - 1.0) > kUnitTolerance) {
    throw InputError("ppmd_deflate: weights must have unit norm");
  }
  Matrix left = z - u * (u.transpose() * z);
  return left - (left * v) * v.transpose();
}

double deflation_residual(const Matrix& deflated, const Vector& u, const Vector& v) {
  const double right = (deflated * v).lpNorm<Eigen::Infinity>();
  const double left = (u.transpose() * deflated).lpNorm<Eigen::Infinity>();
  return std::max(right, left);
}

NnzSearchResult nnz_target_search(const Matrix& z, int target, Axis axis,
                                  std::optional<double> other_budget, double step) {
  const Eigen::Index dim = axis == Axis::rows ? z.rows() : z.cols();
  if (target < 1 || target > dim) {
    throw InputError("nnz_target_search: target outside [1, " + std::to_string(dim) + "]");
  }
  if (!(step > 0.0)) throw InputError("nnz_target_search: step must be positive");

  const auto grid = tuning::default_absolute_grid(dim, step);
  NnzSearchResult best;
  int best_gap = -1;
  for (double value : grid) {
    L1Budgets b;
    if (axis == Axis::rows) {
      b.u = value;
      b.v = other_budget;
    } else {
      b.u = other_budget;
      b.v = value;
    }
    SparseFactor f = pmd_rank1(z, b);
    const int nnz = axis == Axis::rows ? f.nnz_u : f.nnz_v;
    if (nnz >= target) {
      return {value, nnz, true, std::move(f)};
    }
    const int gap = std::abs(nnz - target);
    if (best_gap < 0 || gap < best_gap) {
      best_gap = gap;
      best = {value, nnz, false, std::move(f)};
    }
  }
  return best;
}

Coordinates coordinates_from_weights(const ca::Correspondence& corr, const Vector& u,
                                     const Vector& v, double lambda) {
  const Eigen::Index rows = corr.p.rows();
  const Eigen::Index cols = corr.p.cols();
  if (u.size() != rows || v.size() != cols) {
    throw InputError("coordinates_from_weights: weight length does not match table");
  }
  if (std::abs(u.norm() - 1.0) > 1e-8 || std::abs(v.norm() - 1.0) > 1e-8) {
    throw InputError("coordinates_from_weights: weights must have unit norm");
  }
  if (!(lambda > 0.0)) throw InputError("coordinates_from_weights: lambda must be positive");

  const Vector sqrt_r = corr.r.array().sqrt();
  const Vector sqrt_c = corr.c.array().sqrt();
  const Matrix centered = corr.p - corr.r * corr.c.transpose();

  // weights in the profile metric
  const Vector v_profile = v.cwiseQuotient(sqrt_c);
  const Vector u_profile = u.cwiseQuotient(sqrt_r);
  Vector a = (centered * v_profile).cwiseQuotient(corr.r);
  Vector b = (centered.transpose() * u_profile).cwiseQuotient(corr.c);

  const double a_var = a.dot(corr.r.asDiagonal() * a);
  const double b_var = b.dot(corr.c.asDiagonal() * b);
  if (!(a_var > 0.0) || !(b_var > 0.0)) {
    throw DegenerateInputError("coordinates_from_weights: degenerate axis (zero projection)");
  }
  a *= std::sqrt(lambda / a_var);
  b *= std::sqrt(lambda / b_var);
  if (a.dot(u_profile) < 0.0) a = -a;
  if (b.dot(v_profile) < 0.0) b = -b;
  return {std::move(a), std::move(b)};
}

Vector column_sparse_coordinates(const ca::Correspondence& corr, const Vector& a, double lambda,
                                 ColumnScale scale) {
  if (a.size() != corr.p.rows()) {
    throw InputError("column_sparse_coordinates: coordinate length does not match table");
  }
  Vector b = (corr.p.transpose() * a).cwiseQuotient(corr.c);
  if (scale == ColumnScale::rescaled) {
    const double var = b.dot(corr.c.asDiagonal() * b);
    if (var > 0.0 && lambda > 0.0) b *= std::sqrt(lambda / var);
  }
  return b;
}

Matrix SparseCaModel::row_weights() const {
  Matrix w(corr.p.rows(), dims());
  for (int k = 0; k < dims(); ++k) w.col(k) = factors[static_cast<std::size_t>(k)].u;
  return w;
}

Matrix SparseCaModel::col_weights() const {
  Matrix w(corr.p.cols(), dims());
  for (int k = 0; k < dims(); ++k) w.col(k) = factors[static_cast<std::size_t>(k)].v;
  return w;
}

SparseCaModel fit_sparse_ca(const ContingencyTable& table,
                            const std::vector<SparsityConstraint>& constraints, int dims,
                            Variant variant, ColumnScale column_scale) {
  const auto max_dims = std::min(table.rows(), table.cols()) - 1;
  if (dims < 1 || dims > max_dims) {
    throw InputError("fit_sparse_ca: dims must lie in [1, " + std::to_string(max_dims) + "]");
  }
  if (static_cast<int>(constraints.size()) != dims) {
    throw InputError("fit_sparse_ca: expected one constraint per dimension");
  }
  for (const auto& c : constraints) c.validate(table.rows(), table.cols());

  SparseCaModel model;
  model.variant = variant;
  model.column_scale = column_scale;
  model.corr = ca::correspondence_matrix(table);
  model.z = ca::standardized_residuals(model.corr.p, model.corr.r, model.corr.c);
  model.total_inertia = model.z.squaredNorm();
  model.lambdas = Vector::Zero(dims);
  model.row_coords = Matrix::Zero(table.rows(), dims);
  model.col_coords = Matrix::Zero(table.cols(), dims);

  Matrix current = model.z;
  for (int d = 0; d < dims; ++d) {
    const auto& constraint = constraints[static_cast<std::size_t>(d)];
    SparseFactor factor;
    if (constraint.mode == SparsityConstraint::Mode::nonzero_target) {
      auto found = nnz_target_search(current, constraint.count, constraint.axis);
      if (!found.reached) {
        model.warnings.push_back("dimension " + std::to_string(d + 1) + ": nonzero target " +
                                 std::to_string(constraint.count) + " unreachable, using " +
                                 std::to_string(found.achieved_nnz));
      }
      factor = std::move(found.factor);
    } else {
      L1Budgets budgets = resolve_budgets(constraint, table.rows(), table.cols());
      if (variant == Variant::column_sparse) budgets.u.reset();
      factor = pmd_rank1(current, budgets);
    }
    if (!factor.converged) {
      model.warnings.push_back("dimension " + std::to_string(d + 1) + ": no convergence after " +
                               std::to_string(factor.iterations) + " iterations");
    }

    const double alpha_original = factor.u.dot(model.z * factor.v);
    const double lambda = alpha_original * alpha_original;
    model.lambdas(d) = lambda;
    const Coordinates coords = coordinates_from_weights(model.corr, factor.u, factor.v, lambda);
    model.row_coords.col(d) = coords.a;
    model.col_coords.col(d) = variant == Variant::column_sparse
                                  ? column_sparse_coordinates(model.corr, coords.a, lambda,
                                                              column_scale)
                                  : coords.b;

    current = ppmd_deflate(current, factor.u, factor.v);
    model.max_deflation_residual = std::max(model.max_deflation_residual,
                                            deflation_residual(current, factor.u, factor.v));
    model.factors.push_back(std::move(factor));
  }

  model.lambda_shares = model.lambdas / model.total_inertia;
  model.explained = Vector::Zero(dims);
  model.cumulative_explained = Vector::Zero(dims);
  const Matrix v_weights = model.col_weights();
  double previous = 0.0;
  for (int d = 0; d < dims; ++d) {
    const auto ev = tuning::explained_variance(model.z, v_weights.leftCols(d + 1));
    if (ev.rank_deficient) {
      model.warnings.push_back("dimension " + std::to_string(d + 1) +
                               ": column weights are linearly dependent");
    }
    const double cumulative = std::max(previous, ev.fraction);
    model.cumulative_explained(d) = cumulative;
    model.explained(d) = cumulative - previous;
    previous = cumulative;
  }

  const Matrix u_weights = model.row_weights();
  model.gram.u = u_weights.transpose() * u_weights;
  model.gram.v = v_weights.transpose() * v_weights;
  model.gram.a = model.row_coords.transpose() * model.corr.r.asDiagonal() * model.row_coords;
  model.gram.b = model.col_coords.transpose() * model.corr.c.asDiagonal() * model.col_coords;
  return model;
}

SparseContributions sparse_contributions(const SparseCaModel& model) {
  SparseContributions out;
  out.row_weights = model.row_weights();
  out.col_weights = model.col_weights();
  out.rows = out.row_weights.array().square();
  out.cols = out.col_weights.array().square();
  out.row_all_zero.resize(static_cast<std::size_t>(out.row_weights.rows()));
  out.col_all_zero.resize(static_cast<std::size_t>(out.col_weights.rows()));
  for (Eigen::Index i = 0; i < out.row_weights.rows(); ++i) {
    out.row_all_zero[static_cast<std::size_t>(i)] = out.row_weights.row(i).isZero(0.0);
  }
  for (Eigen::Index j = 0; j < out.col_weights.rows(); ++j) {
    out.col_all_zero[static_cast<std::size_t>(j)] = out.col_weights.row(j).isZero(0.0);
  }
  return out;
}

}  // namespace sparseca::sparse
