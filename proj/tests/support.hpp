#pragma once

// Shared fixtures and independent reference computations for the test
// suites. Nothing here calls into the library's numerical code, so it can
// serve as an oracle for it.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "sparseca/ca.hpp"

namespace sparseca::testing {

using Rng = std::mt19937_64;

inline Matrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> normal;
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  }
  return m;
}

/// Poisson counts around a random low-rank mean, with every margin positive.
inline Matrix random_counts(Rng& rng, Eigen::Index rows, Eigen::Index cols, double scale = 6.0) {
  std::gamma_distribution<double> gamma(1.0, 1.0);
  Matrix mean = Matrix::Zero(rows, cols);
  for (int k = 0; k < 3; ++k) {
    Vector a(rows), b(cols);
    for (auto& x : a) x = gamma(rng);
    for (auto& x : b) x = gamma(rng);
    mean += a * b.transpose();
  }
  Matrix counts(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      std::poisson_distribution<int> poisson(scale * mean(i, j) / 3.0);
      counts(i, j) = poisson(rng);
    }
  }
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (counts.row(i).sum() == 0.0) counts(i, i % cols) = 1.0;
  }
  for (Eigen::Index j = 0; j < cols; ++j) {
    if (counts.col(j).sum() == 0.0) counts(j % rows, j) = 1.0;
  }
  return counts;
}

inline std::vector<std::string> labels(const std::string& prefix, Eigen::Index n) {
  std::vector<std::string> out;
  for (Eigen::Index i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i + 1));
  return out;
}

inline ContingencyTable random_table(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  return ContingencyTable(random_counts(rng, rows, cols), labels("r", rows), labels("c", cols));
}

/// Eigenvalues (descending) of the symmetric matrix m'm.
inline Vector gram_eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.transpose() * m);
  Vector ev = es.eigenvalues().reverse();
  return ev;
}

/// Nontrivial CA eigenvalues from the operator Dr^-1 P Dc^-1 P', evaluated
/// through its symmetric similarity transform, with the trivial unit
/// eigenvalue removed. Returns min(I, J) - 1 values, descending.
inline Vector ca_operator_eigenvalues(const Matrix& counts) {
  const Matrix p = counts / counts.sum();
  const Vector r = p.rowwise().sum();
  const Vector c = p.colwise().sum().transpose();
  const Vector rs = r.array().rsqrt();
  const Matrix s = rs.asDiagonal() * p * c.cwiseInverse().asDiagonal() * p.transpose() *
                   rs.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Matrix> es(s);
  Vector ev = es.eigenvalues().reverse();
  const auto k = std::min(counts.rows(), counts.cols()) - 1;
  return ev.segment(1, k);
}

/// Pearson phi^2 straight from the counts.
inline double phi_squared(const Matrix& counts) {
  const double n = counts.sum();
  const Vector rows = counts.rowwise().sum();
  const Vector cols = counts.colwise().sum().transpose();
  double chi2 = 0.0;
  for (Eigen::Index i = 0; i < counts.rows(); ++i) {
    for (Eigen::Index j = 0; j < counts.cols(); ++j) {
      const double e = rows(i) * cols(j) / n;
      chi2 += (counts(i, j) - e) * (counts(i, j) - e) / e;
    }
  }
  return chi2 / n;
}

/// Reference L1-constrained unit vector: scans thresholds on a fixed lattice
/// and keeps the smallest one whose normalized soft-thresholded vector meets
/// the budget.
inline Vector l1_unit_by_sweep(const Vector& x, double c, double step) {
  const double top = x.cwiseAbs().maxCoeff();
  for (double delta = 0.0; delta < top; delta += step) {
    Vector s = x;
    for (auto& e : s) e = (e > 0 ? 1.0 : -1.0) * std::max(std::abs(e) - delta, 0.0);
    const double n = s.norm();
    if (n > 0 && s.lpNorm<1>() / n <= c) return s / n;
  }
  Vector w = Vector::Zero(x.size());
  Eigen::Index k;
  x.cwiseAbs().maxCoeff(&k);
  w(k) = x(k) > 0 ? 1.0 : -1.0;
  return w;
}

/// Ward clustering evaluated from cluster centroids at every step: merges
/// the pair with the smallest increase in within-cluster sum of squares
/// n_a n_b / (n_a + n_b) |c_a - c_b|^2. Heights are sqrt(2 * increase).
struct WardStep {
  std::set<int> members;
  double height;
};

inline std::vector<WardStep> ward_by_centroids(const Matrix& x) {
  std::vector<std::set<int>> clusters;
  for (int i = 0; i < x.rows(); ++i) clusters.push_back({i});
  std::vector<WardStep> steps;
  auto centroid = [&](const std::set<int>& s) {
    Eigen::RowVectorXd c = Eigen::RowVectorXd::Zero(x.cols());
    for (int i : s) c += x.row(i);
    return Eigen::RowVectorXd(c / static_cast<double>(s.size()));
  };
  while (clusters.size() > 1) {
    double best = INFINITY;
    std::size_t bi = 0, bj = 1;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        const double na = static_cast<double>(clusters[i].size());
        const double nb = static_cast<double>(clusters[j].size());
        const double cost =
            na * nb / (na + nb) * (centroid(clusters[i]) - centroid(clusters[j])).squaredNorm();
        if (cost < best) {
          best = cost;
          bi = i;
          bj = j;
        }
      }
    }
    std::set<int> merged = clusters[bi];
    merged.insert(clusters[bj].begin(), clusters[bj].end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
    clusters[bi] = merged;
    steps.push_back({merged, std::sqrt(2.0 * best)});
  }
  return steps;
}

/// Leaves under each internal node of a merge list (ids >= n are merges).
template <typename MergeList>
std::vector<std::set<int>> merge_members(const MergeList& merges, int n) {
  std::vector<std::set<int>> out;
  auto members = [&](int id) {
    return id < n ? std::set<int>{id} : out[static_cast<std::size_t>(id - n)];
  };
  for (const auto& m : merges) {
    std::set<int> s = members(m.left);
    const auto r = members(m.right);
    s.insert(r.begin(), r.end());
    out.push_back(s);
  }
  return out;
}

}  // namespace sparseca::testing
