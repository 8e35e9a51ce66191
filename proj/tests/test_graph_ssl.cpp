#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "interp/graph_ssl.hpp"
#include "interp/rng.hpp"

using namespace interp;

namespace {

LabeledGraph path3(double kappa) {
  LabeledGraph g(3);
  g.kappa = kappa;
  g.add_edge(0, 1, 1.0);
  g.add_edge(1, 2, 1.0);
  g.add_label(0, 0.0);
  g.add_label(2, 1.0);
  return g;
}

LabeledGraph random_connected_graph(Rng& rng, int n, double kappa) {
  LabeledGraph g(n);
  g.kappa = kappa;
  for (int v = 1; v < n; ++v)
    g.add_edge(v, static_cast<int>(rng.below(v)), rng.uniform(0.2, 2.0));
  for (int e = 0; e < n; ++e) {
    const int i = static_cast<int>(rng.below(n));
    const int j = static_cast<int>(rng.below(n));
    if (i != j) g.add_edge(i, j, rng.uniform(0.2, 2.0));
  }
  return g;
}

}  // namespace

TEST_CASE("graph: harmonic average on the path") {
  const auto eta = solve_graph_interpolant(path3(0.0));
  CHECK(eta.values[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(eta.values[0] == 0.0);
  CHECK(eta.values[2] == 1.0);
}

TEST_CASE("graph: kappa shrinks the path solution to 1/3") {
  // Single unlabeled vertex: eta = z/(kappa^2+z) * etabar with z = 2,
  // etabar = 1/2.
  const auto eta = solve_graph_interpolant(path3(1.0));
  CHECK(eta.values[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("graph: fully connected closed form") {
  const auto g = fully_connected_graph(100, 7, 3, 1.0);
  const auto eta = solve_graph_interpolant(g);
  const double expect = fully_connected_eta(100, 7, 3, 1.0);
  CHECK(expect == doctest::Approx(4.0 / 11.0).epsilon(1e-12));
  for (int v = 10; v < 100; ++v)
    CHECK(std::abs(eta.values[v] - expect) <= 1e-9);
  CHECK(stationarity_residual(g, eta) <= 1e-8);
}

TEST_CASE("fully_connected_eta: examples and errors") {
  CHECK(fully_connected_eta(100, 7, 3, 0.0) == doctest::Approx(0.4));
  CHECK(fully_connected_eta(100, 5, 5, 0.7) == doctest::Approx(0.0));
  CHECK_THROWS_AS(fully_connected_eta(100, 0, 0, 1.0), NoLabels);
  CHECK_THROWS_AS(fully_connected_eta(100, 7, 3, -1.0), NegativeKappa);
  CHECK_THROWS_AS(fully_connected_eta(10, 7, 3, 0.0), std::invalid_argument);
}

TEST_CASE("fully_connected_eta: |value| strictly decreasing in kappa") {
  double prev = std::abs(fully_connected_eta(50, 6, 2, 0.0));
  for (double kappa : {0.5, 1.0, 2.0, 4.0}) {
    const double cur = std::abs(fully_connected_eta(50, 6, 2, kappa));
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("hoeffding bound: formula substitution") {
  CHECK(hoeffding_excess_bound(0.7, 50) == doctest::Approx(std::exp(-4.0)));
  CHECK(hoeffding_excess_bound(0.5, 123) == doctest::Approx(1.0));
  CHECK(hoeffding_excess_bound(1.0, 1) == doctest::Approx(std::exp(-0.5)));
}

TEST_CASE("graph: maximum principle at kappa = 0") {
  Rng rng(5150);
  auto g = random_connected_graph(rng, 60, 0.0);
  g.add_label(3, -1.0);
  g.add_label(17, 1.0);
  g.add_label(44, 0.25);
  const auto eta = solve_graph_interpolant(g);
  for (double v : eta.values) {
    CHECK(v >= -1.0 - 1e-10);
    CHECK(v <= 1.0 + 1e-10);
  }
  CHECK(stationarity_residual(g, eta) <= 1e-8);
}

TEST_CASE("graph: labeled values are reproduced exactly") {
  Rng rng(6);
  auto g = random_connected_graph(rng, 40, 0.8);
  g.add_label(0, 0.77);
  g.add_label(21, -0.4);
  const auto eta = solve_graph_interpolant(g);
  CHECK(eta.values[0] == 0.77);
  CHECK(eta.values[21] == -0.4);
}

TEST_CASE("graph: direct and Jacobi solvers agree") {
  Rng rng(31337);
  for (double kappa : {0.0, 0.5}) {
    auto g = random_connected_graph(rng, 80, kappa);
    g.add_label(2, 1.0);
    g.add_label(50, -1.0);
    const auto direct = solve_graph_interpolant(g, GraphSolveMethod::Direct);
    const auto jacobi = solve_graph_interpolant(g, GraphSolveMethod::Jacobi);
    for (int v = 0; v < g.n; ++v)
      CHECK(direct.values[v] == doctest::Approx(jacobi.values[v]).epsilon(1e-7));
  }
}

TEST_CASE("graph: kappa = 0 with an unlabeled component is singular") {
  LabeledGraph g(4);
  g.kappa = 0.0;
  g.add_edge(0, 1, 1.0);
  g.add_edge(2, 3, 1.0);  // second component, never labeled
  g.add_label(0, 1.0);
  CHECK_THROWS_AS(solve_graph_interpolant(g), SingularSystem);
  // kappa > 0 regularizes the same graph.
  g.kappa = 0.5;
  const auto eta = solve_graph_interpolant(g);
  CHECK(eta.values[2] == doctest::Approx(0.0));
  CHECK(eta.values[3] == doctest::Approx(0.0));
}

TEST_CASE("graph: validation errors") {
  LabeledGraph g(3);
  g.add_edge(0, 1, 1.0);
  CHECK_THROWS_AS(solve_graph_interpolant(g), NoLabels);
  g.add_label(0, 1.0);
  g.kappa = -0.1;
  CHECK_THROWS_AS(solve_graph_interpolant(g), NegativeKappa);
  CHECK_THROWS_AS(g.add_edge(1, 1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(g.add_edge(0, 2, -3.0), std::invalid_argument);
}

TEST_CASE("graph: file round trip") {
  const std::string edges_path = "test_graph_edges.txt";
  const std::string labels_path = "test_graph_labels.txt";
  {
    std::ofstream e(edges_path);
    e << "# path graph\n0 1 1.0\n1 2 1.0\n";
    std::ofstream l(labels_path);
    l << "0 0\n2 1\n";
  }
  const auto g = read_graph_files(edges_path, labels_path, 0.0);
  CHECK(g.n == 3);
  const auto eta = solve_graph_interpolant(g);
  CHECK(eta.values[1] == doctest::Approx(0.5));
  std::ostringstream csv;
  write_interpolant_csv(csv, eta);
  CHECK(csv.str().substr(0, 16) == "vertex,eta_hat\n0");
  std::remove(edges_path.c_str());
  std::remove(labels_path.c_str());
}

TEST_CASE("knn graph builder: symmetric unit weights") {
  Rng rng(9);
  const int n = 30;
  std::vector<double> pts(2 * n);
  for (auto& v : pts) v = rng.uniform();
  const auto g = knn_graph(pts.data(), n, 2, 3);
  const auto z = g.degrees();
  for (int v = 0; v < n; ++v) CHECK(z[v] >= 3.0);
  // Symmetry: every arc has its reverse.
  for (int v = 0; v < n; ++v)
    for (const auto& [u, w] : g.adjacency[v]) {
      CHECK(w == 1.0);
      bool found = false;
      for (const auto& [back, bw] : g.adjacency[u])
        found = found || (back == v && bw == w);
      CHECK(found);
    }
}
