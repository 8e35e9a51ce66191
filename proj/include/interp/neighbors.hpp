#pragma once

#include <span>
#include <vector>

#include "interp/dataset.hpp"
#include "interp/errors.hpp"

namespace interp {

struct Neighbor {
  int index;
  double distance;
};

/// The k nearest points in ascending (distance, index) order plus the
/// distance to the (k+1)-st neighbor, which normalizes the wiNN weights.
struct NeighborList {
  std::vector<Neighbor> neighbors;
  double r_next = 0.0;  // +inf when k == n
};

/// Exact Euclidean k-nearest-neighbor index (kd-tree). Results are
/// identical to a brute-force scan: ties are broken by ascending dataset
/// index and the tree prunes only on strict distance bounds. Immutable
/// after construction; concurrent queries are safe.
class NeighborIndex {
 public:
  NeighborIndex(const double* pts, int n, int dim);
  explicit NeighborIndex(const LabeledDataset& ds)
      : NeighborIndex(ds.points.data(), ds.size(), ds.dim) {}

  /// 1 <= k <= n. r_next is +inf when k == n.
  NeighborList query(std::span<const double> q, int k) const;

  int size() const { return n_; }
  int dim() const { return dim_; }

 private:
  struct Node {
    int left = -1, right = -1;
    int begin = 0, end = 0;  // leaf range into order_
    int split_dim = -1;
    double split_value = 0.0;
  };

  int build_node(int begin, int end, std::vector<double>& lo,
                 std::vector<double>& hi);

  int n_, dim_;
  std::vector<double> pts_;  // copied, n x dim
  std::vector<int> order_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

NeighborIndex build_index(const LabeledDataset& ds);  // throws EmptyDataset

/// Spec contract: requires the (k+1)-st neighbor to exist.
/// Throws KTooLarge when k + 1 > n.
NeighborList knn_query(const NeighborIndex& index, std::span<const double> q,
                       int k);

}  // namespace interp
