#include "sparseca/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sparseca/errors.hpp"

namespace sparseca::analysis {

std::vector<int> Dendrogram::leaf_order() const {
  const int n = leaf_count();
  std::vector<int> order;
  if (n == 0) return order;
  if (merges.empty()) return {0};
  std::vector<int> stack{n + static_cast<int>(merges.size()) - 1};
  while (!stack.empty()) {
    const int node = stack.back();
    stack.pop_back();
    if (node < n) {
      order.push_back(node);
      continue;
    }
    const Merge& m = merges[static_cast<std::size_t>(node - n)];
    stack.push_back(m.right);
    stack.push_back(m.left);
  }
  return order;
}

Dendrogram ward_cluster(const Matrix& coords, std::vector<std::string> labels,
                        WardVariant variant) {
  const auto n = static_cast<int>(coords.rows());
  if (n == 0 || coords.cols() == 0) throw InputError("ward_cluster: empty coordinates");
  if (static_cast<int>(labels.size()) != n) throw InputError("ward_cluster: label count mismatch");
  numerics::require_finite(coords, "ward_cluster");

  Matrix dist(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double sq = (coords.row(i) - coords.row(j)).squaredNorm();
      dist(i, j) = variant == WardVariant::d2 ? sq : std::sqrt(sq);
    }
  }
  std::vector<int> id(static_cast<std::size_t>(n));
  std::iota(id.begin(), id.end(), 0);
  std::vector<int> size(static_cast<std::size_t>(n), 1);
  std::vector<bool> active(static_cast<std::size_t>(n), true);

  Dendrogram out;
  out.labels = std::move(labels);
  for (int step = 0; step + 1 < n; ++step) {
    int best_i = -1;
    int best_j = -1;
    double best = std::numeric_limits<double>::infinity();
    auto key = [&](int i, int j) {
      const int a = id[static_cast<std::size_t>(i)];
      const int b = id[static_cast<std::size_t>(j)];
      return std::pair{std::min(a, b), std::max(a, b)};
    };
    for (int i = 0; i < n; ++i) {
      if (!active[static_cast<std::size_t>(i)]) continue;
      for (int j = i + 1; j < n; ++j) {
        if (!active[static_cast<std::size_t>(j)]) continue;
        const double d = dist(i, j);
        if (best_i < 0 || d < best || (d == best && key(i, j) < key(best_i, best_j))) {
          best = d;
          best_i = i;
          best_j = j;
        }
      }
    }

    const double ni = size[static_cast<std::size_t>(best_i)];
    const double nj = size[static_cast<std::size_t>(best_j)];
    for (int k = 0; k < n; ++k) {
      if (!active[static_cast<std::size_t>(k)] || k == best_i || k == best_j) continue;
      const double nk = size[static_cast<std::size_t>(k)];
      const double updated =
          ((ni + nk) * dist(k, best_i) + (nj + nk) * dist(k, best_j) - nk * best) /
          (ni + nj + nk);
      dist(k, best_i) = updated;
      dist(best_i, k) = updated;
    }

    const auto [left, right] = key(best_i, best_j);
    Merge m;
    m.left = left;
    m.right = right;
    m.height = variant == WardVariant::d2 ? std::sqrt(std::max(best, 0.0)) : best;
    m.size = static_cast<int>(ni + nj);
    out.merges.push_back(m);

    id[static_cast<std::size_t>(best_i)] = n + step;
    size[static_cast<std::size_t>(best_i)] = m.size;
    active[static_cast<std::size_t>(best_j)] = false;
  }
  return out;
}

std::vector<int> cut_tree(const Dendrogram& dendrogram, int k) {
  const int n = dendrogram.leaf_count();
  if (k < 1 || k > n) throw InputError("cut_tree: k must lie in [1, leaf count]");

  std::vector<int> parent(static_cast<std::size_t>(2 * n), -1);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] >= 0) x = parent[static_cast<std::size_t>(x)];
    return x;
  };
  for (int m = 0; m < n - k; ++m) {
    const Merge& merge = dendrogram.merges[static_cast<std::size_t>(m)];
    parent[static_cast<std::size_t>(find(merge.left))] = n + m;
    parent[static_cast<std::size_t>(find(merge.right))] = n + m;
  }
  std::vector<int> assignment(static_cast<std::size_t>(n), 0);
  std::vector<int> root_to_cluster(static_cast<std::size_t>(2 * n), 0);
  int next = 0;
  for (int leaf = 0; leaf < n; ++leaf) {
    const int root = find(leaf);
    int& cluster = root_to_cluster[static_cast<std::size_t>(root)];
    if (cluster == 0) cluster = ++next;
    assignment[static_cast<std::size_t>(leaf)] = cluster;
  }
  return assignment;
}

TypicalityTable typicality_zscores(const Matrix& counts,
                                   const std::vector<std::string>& cluster_labels,
                                   const std::vector<std::string>& category_labels, int top_m) {
  if (top_m < 1) throw InputError("typicality_zscores: top_m must be positive");
  if (static_cast<Eigen::Index>(cluster_labels.size()) != counts.rows() ||
      static_cast<Eigen::Index>(category_labels.size()) != counts.cols()) {
    throw InputError("typicality_zscores: label count mismatch");
  }
  numerics::require_finite(counts, "typicality_zscores");
  if ((counts.array() < 0.0).any()) throw InputError("typicality_zscores: negative count");

  TypicalityTable out;
  const Vector cluster_totals = counts.rowwise().sum();
  out.category_totals = counts.colwise().sum().transpose();
  out.grand_total = counts.sum();
  if (!(out.grand_total > 0.0)) throw InputError("typicality_zscores: empty table");
  const double k = out.grand_total;

  for (Eigen::Index i = 0; i < counts.rows(); ++i) {
    if (cluster_totals(i) <= 0.0) {
      out.warnings.push_back("cluster '" + cluster_labels[static_cast<std::size_t>(i)] +
                             "' has no counts and is excluded");
    }
  }
  for (Eigen::Index j = 0; j < counts.cols(); ++j) {
    const double kj = out.category_totals(j);
    if (kj <= 0.0 || kj >= k) {
      out.warnings.push_back("category '" + category_labels[static_cast<std::size_t>(j)] +
                             "' has a degenerate margin and is excluded");
    }
  }

  out.z = Matrix::Constant(counts.rows(), counts.cols(), std::numeric_limits<double>::quiet_NaN());
  for (Eigen::Index i = 0; i < counts.rows(); ++i) {
    const double ki = cluster_totals(i);
    ClusterTypicality cluster;
    cluster.cluster = cluster_labels[static_cast<std::size_t>(i)];
    cluster.size = ki;
    if (ki <= 0.0) {
      out.clusters.push_back(std::move(cluster));
      continue;
    }
    std::vector<TypicalCategory> ranked;
    for (Eigen::Index j = 0; j < counts.cols(); ++j) {
      const double kj = out.category_totals(j);
      if (kj <= 0.0 || kj >= k) continue;
      const double expected = ki * kj / k;
      const double z = (counts(i, j) - expected) / std::sqrt(expected * (1.0 - kj / k));
      out.z(i, j) = z;
      ranked.push_back({category_labels[static_cast<std::size_t>(j)], z});
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const TypicalCategory& a, const TypicalCategory& b) { return a.z > b.z; });
    if (static_cast<int>(ranked.size()) > top_m) ranked.resize(static_cast<std::size_t>(top_m));
    cluster.top = std::move(ranked);
    out.clusters.push_back(std::move(cluster));
  }
  return out;
}

Matrix aggregate_by_cluster(const Matrix& counts, const std::vector<int>& assignment, int k) {
  if (static_cast<Eigen::Index>(assignment.size()) != counts.rows()) {
    throw InputError("aggregate_by_cluster: assignment length mismatch");
  }
  Matrix out = Matrix::Zero(k, counts.cols());
  for (Eigen::Index i = 0; i < counts.rows(); ++i) {
    const int cluster = assignment[static_cast<std::size_t>(i)];
    if (cluster < 1 || cluster > k) throw InputError("aggregate_by_cluster: cluster id out of range");
    out.row(cluster - 1) += counts.row(i);
  }
  return out;
}

}  // namespace sparseca::analysis
