#pragma once

#include <string>
#include <vector>

#include "sparseca/numerics.hpp"

namespace sparseca::analysis {

enum class WardVariant {
  d2,  ///< squared Euclidean distances in the Lance-Williams update, height = sqrt
  d,   ///< Euclidean distances fed directly to the update
};

/// One agglomeration step. Leaves are 0..n-1; the cluster created by merge
/// m gets id n + m.
struct Merge {
  int left = 0;
  int right = 0;
  double height = 0.0;
  int size = 0;
};

struct Dendrogram {
  std::vector<Merge> merges;  ///< n - 1 entries, heights nondecreasing
  std::vector<std::string> labels;

  int leaf_count() const noexcept { return static_cast<int>(labels.size()); }
  /// Leaves in left-to-right drawing order.
  std::vector<int> leaf_order() const;
};

/// Agglomerative Ward clustering of the rows of `coords`.
/// Ties in merge cost go to the pair with the lowest (left, right) ids.
Dendrogram ward_cluster(const Matrix& coords, std::vector<std::string> labels,
                        WardVariant variant = WardVariant::d2);

/// Cluster ids 1..k per leaf, obtained by undoing the k-1 last merges.
/// Clusters are numbered by first appearance in leaf index order.
std::vector<int> cut_tree(const Dendrogram& dendrogram, int k);

struct TypicalCategory {
  std::string label;
  double z = 0.0;
};

struct ClusterTypicality {
  std::string cluster;
  double size = 0.0;  ///< k_i
  std::vector<TypicalCategory> top;
};

struct TypicalityTable {
  std::vector<ClusterTypicality> clusters;
  Matrix z;            ///< clusters x categories; NaN where excluded
  Vector category_totals;  ///< k_j
  double grand_total = 0.0;
  std::vector<std::string> warnings;
};

/// z_ij = (k_ij - k_i k_j / k) / sqrt(k_i k_j / k (1 - k_j / k)).
/// Clusters or categories with zero margin (or a category holding all the
/// mass) are excluded with a warning. Each cluster lists its `top_m`
/// categories by decreasing z.
TypicalityTable typicality_zscores(const Matrix& counts,
                                   const std::vector<std::string>& cluster_labels,
                                   const std::vector<std::string>& category_labels, int top_m);

/// Sums the rows of `counts` by cluster id (1..k) into a k x J table.
Matrix aggregate_by_cluster(const Matrix& counts, const std::vector<int>& assignment, int k);

}  // namespace sparseca::analysis
