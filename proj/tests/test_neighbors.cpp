#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "interp/neighbors.hpp"
#include "interp/rng.hpp"
#include "oracles.hpp"

using namespace interp;

TEST_CASE("knn: interval example with r_next") {
  const std::vector<double> pts = {0.0, 1.0, 3.0};
  const NeighborIndex index(pts.data(), 3, 1);
  const auto nn = knn_query(index, std::vector<double>{2.5}, 2);
  REQUIRE(nn.neighbors.size() == 2);
  CHECK(nn.neighbors[0].index == 2);
  CHECK(nn.neighbors[0].distance == doctest::Approx(0.5));
  CHECK(nn.neighbors[1].index == 1);
  CHECK(nn.neighbors[1].distance == doctest::Approx(1.5));
  CHECK(nn.r_next == doctest::Approx(2.5));
}

TEST_CASE("knn: equidistant tie goes to the lower index") {
  const std::vector<double> pts = {0.0, 2.0};
  const NeighborIndex index(pts.data(), 2, 1);
  const auto nn = knn_query(index, std::vector<double>{1.0}, 1);
  CHECK(nn.neighbors[0].index == 0);
  CHECK(nn.r_next == doctest::Approx(1.0));
}

TEST_CASE("knn: k too large") {
  const std::vector<double> pts = {0.0, 1.0};
  const NeighborIndex index(pts.data(), 2, 1);
  CHECK_THROWS_AS(knn_query(index, std::vector<double>{0.5}, 2), KTooLarge);
  // The relaxed query allows k == n with infinite r_next.
  const auto nn = index.query(std::vector<double>{0.5}, 2);
  CHECK(nn.neighbors.size() == 2);
  CHECK(std::isinf(nn.r_next));
}

TEST_CASE("knn: empty dataset") {
  LabeledDataset ds;
  ds.dim = 1;
  CHECK_THROWS_AS(build_index(ds), EmptyDataset);
}

TEST_CASE("knn: duplicate points are all retrievable") {
  const std::vector<double> pts = {1.0, 1.0, 2.0};
  const NeighborIndex index(pts.data(), 3, 1);
  const auto nn = knn_query(index, std::vector<double>{1.0}, 2);
  CHECK(nn.neighbors[0].index == 0);
  CHECK(nn.neighbors[1].index == 1);
  CHECK(nn.neighbors[0].distance == 0.0);
  CHECK(nn.neighbors[1].distance == 0.0);
}

TEST_CASE("knn: exactness against brute force") {
  Rng rng(314159);
  for (int config = 0; config < 4; ++config) {
    const int d = 1 + static_cast<int>(rng.below(5));
    const int n = 1000;
    std::vector<double> pts(static_cast<std::size_t>(n) * d);
    for (auto& v : pts) v = rng.uniform();
    // Plant duplicates and grid collisions to stress tie handling.
    for (int i = 0; i < 50; ++i) {
      const int a = static_cast<int>(rng.below(n));
      const int b = static_cast<int>(rng.below(n));
      std::copy(pts.begin() + b * d, pts.begin() + (b + 1) * d,
                pts.begin() + a * d);
    }
    for (auto& v : pts)
      if (rng.bernoulli(0.3)) v = std::round(v * 4.0) / 4.0;

    const NeighborIndex index(pts.data(), n, d);
    for (int qi = 0; qi < 25; ++qi) {
      std::vector<double> q(d);
      for (auto& v : q) v = rng.uniform(-0.2, 1.2);
      const int k = 1 + static_cast<int>(rng.below(40));
      const auto got = knn_query(index, q, k);
      const auto want = oracle::brute_knn(pts.data(), n, d, q, k + 1);
      REQUIRE(static_cast<int>(got.neighbors.size()) == k);
      for (int i = 0; i < k; ++i) {
        CHECK(got.neighbors[i].index == want[i].second);
        CHECK(got.neighbors[i].distance ==
              doctest::Approx(std::sqrt(want[i].first)).epsilon(1e-12));
      }
      CHECK(got.r_next ==
            doctest::Approx(std::sqrt(want[k].first)).epsilon(1e-12));
    }
  }
}

TEST_CASE("knn: permutation robustness of returned distances") {
  Rng rng(8080);
  const int n = 200, d = 3;
  std::vector<double> pts(static_cast<std::size_t>(n) * d);
  for (auto& v : pts) v = rng.uniform();

  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int i = n - 1; i > 0; --i)
    std::swap(perm[i], perm[rng.below(static_cast<std::uint64_t>(i) + 1)]);
  std::vector<double> shuffled(pts.size());
  for (int i = 0; i < n; ++i)
    std::copy(pts.begin() + perm[i] * d, pts.begin() + (perm[i] + 1) * d,
              shuffled.begin() + i * d);

  const NeighborIndex a(pts.data(), n, d);
  const NeighborIndex b(shuffled.data(), n, d);
  for (int qi = 0; qi < 20; ++qi) {
    std::vector<double> q(d);
    for (auto& v : q) v = rng.uniform();
    const auto na = knn_query(a, q, 7);
    const auto nb = knn_query(b, q, 7);
    std::vector<double> da, db;
    for (const auto& x : na.neighbors) da.push_back(x.distance);
    for (const auto& x : nb.neighbors) db.push_back(x.distance);
    std::sort(da.begin(), da.end());
    std::sort(db.begin(), db.end());
    for (int i = 0; i < 7; ++i)
      CHECK(da[i] == doctest::Approx(db[i]).epsilon(1e-12));
    CHECK(na.r_next == doctest::Approx(nb.r_next).epsilon(1e-12));
  }
}
