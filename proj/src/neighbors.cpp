#include "interp/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace interp {

namespace {

constexpr int kLeafSize = 8;

struct Candidate {
  double d2;
  int index;
  // "worse" ordering: larger distance first, then larger index.
  bool operator<(const Candidate& o) const {
    return d2 != o.d2 ? d2 < o.d2 : index < o.index;
  }
};

}  // namespace

NeighborIndex::NeighborIndex(const double* pts, int n, int dim)
    : n_(n), dim_(dim) {
  if (n < 1) throw EmptyDataset("neighbor index: empty dataset");
  if (dim < 1) throw std::invalid_argument("neighbor index: dim >= 1 required");
  pts_.assign(pts, pts + static_cast<std::size_t>(n) * dim);
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), 0);
  nodes_.reserve(static_cast<std::size_t>(2 * n) / kLeafSize + 2);

  std::vector<double> lo(dim), hi(dim);
  for (int j = 0; j < dim; ++j) lo[j] = hi[j] = pts_[j];
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < dim; ++j) {
      const double v = pts_[static_cast<std::size_t>(i) * dim + j];
      lo[j] = std::min(lo[j], v);
      hi[j] = std::max(hi[j], v);
    }
  root_ = build_node(0, n, lo, hi);
}

int NeighborIndex::build_node(int begin, int end, std::vector<double>& lo,
                              std::vector<double>& hi) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  nodes_[id].begin = begin;
  nodes_[id].end = end;
  if (end - begin <= kLeafSize) return id;

  int split = 0;
  double extent = -1.0;
  for (int j = 0; j < dim_; ++j)
    if (hi[j] - lo[j] > extent) {
      extent = hi[j] - lo[j];
      split = j;
    }
  if (extent <= 0.0) return id;  // all points identical: keep as leaf

  const int mid = begin + (end - begin) / 2;
  auto key = [&](int i) {
    return std::pair<double, int>(pts_[static_cast<std::size_t>(i) * dim_ + split], i);
  };
  std::nth_element(order_.begin() + begin, order_.begin() + mid,
                   order_.begin() + end,
                   [&](int a, int b) { return key(a) < key(b); });
  const double value = pts_[static_cast<std::size_t>(order_[mid]) * dim_ + split];

  nodes_[id].split_dim = split;
  nodes_[id].split_value = value;

  const double saved_hi = hi[split];
  hi[split] = value;
  const int left = build_node(begin, mid, lo, hi);
  hi[split] = saved_hi;

  const double saved_lo = lo[split];
  lo[split] = value;
  const int right = build_node(mid, end, lo, hi);
  lo[split] = saved_lo;

  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

NeighborList NeighborIndex::query(std::span<const double> q, int k) const {
  if (static_cast<int>(q.size()) != dim_)
    throw std::invalid_argument("knn: query dimension mismatch");
  if (k < 1) throw std::invalid_argument("knn: k >= 1 required");
  if (k > n_) throw KTooLarge("knn: k exceeds dataset size");

  const int heap_size = std::min(k + 1, n_);
  std::priority_queue<Candidate> heap;  // top = worst kept candidate

  auto offer = [&](int i) {
    double d2 = 0.0;
    const double* p = pts_.data() + static_cast<std::size_t>(i) * dim_;
    for (int j = 0; j < dim_; ++j) {
      const double diff = q[j] - p[j];
      d2 += diff * diff;
    }
    Candidate c{d2, i};
    if (static_cast<int>(heap.size()) < heap_size) {
      heap.push(c);
    } else if (c < heap.top()) {
      heap.pop();
      heap.push(c);
    }
  };

  // Depth-first with near-side preference; prune on strict > so that
  // equal-distance candidates with smaller index are always visited.
  struct Frame {
    int node;
    double plane_d2;  // lower bound on d2 for this subtree
  };
  std::vector<Frame> stack;
  stack.push_back({root_, 0.0});
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (static_cast<int>(heap.size()) == heap_size && f.plane_d2 > heap.top().d2)
      continue;
    const Node& node = nodes_[f.node];
    if (node.split_dim < 0) {
      for (int t = node.begin; t < node.end; ++t) offer(order_[t]);
      continue;
    }
    const double delta = q[node.split_dim] - node.split_value;
    const double away_d2 = std::max(f.plane_d2, delta * delta);
    const int near = delta < 0.0 ? node.left : node.right;
    const int far = delta < 0.0 ? node.right : node.left;
    stack.push_back({far, away_d2});
    stack.push_back({near, f.plane_d2});
  }

  NeighborList out;
  std::vector<Candidate> sorted(heap.size());
  for (int i = static_cast<int>(heap.size()) - 1; i >= 0; --i) {
    sorted[i] = heap.top();
    heap.pop();
  }
  if (static_cast<int>(sorted.size()) == k + 1) {
    out.r_next = std::sqrt(sorted.back().d2);
    sorted.pop_back();
  } else {
    out.r_next = std::numeric_limits<double>::infinity();
  }
  out.neighbors.reserve(sorted.size());
  for (const auto& c : sorted)
    out.neighbors.push_back({c.index, std::sqrt(c.d2)});
  return out;
}

NeighborIndex build_index(const LabeledDataset& ds) {
  if (ds.size() == 0) throw EmptyDataset("build_index: empty dataset");
  return NeighborIndex(ds);
}

NeighborList knn_query(const NeighborIndex& index, std::span<const double> q,
                       int k) {
  if (k + 1 > index.size())
    throw KTooLarge("knn_query: the (k+1)-st neighbor must exist");
  return index.query(q, k);
}

}  // namespace interp
