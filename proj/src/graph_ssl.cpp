#include "interp/graph_ssl.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "interp/dataset.hpp"
#include "interp/neighbors.hpp"

namespace interp {

namespace {

constexpr int kDirectSolveLimit = 2000;
constexpr double kJacobiResidual = 1e-10;

std::vector<int> label_map(const LabeledGraph& g) {
  std::vector<int> labeled(g.n, -1);
  for (std::size_t t = 0; t < g.labels.size(); ++t) {
    const auto [v, y] = g.labels[t];
    (void)y;
    if (v < 0 || v >= g.n)
      throw std::invalid_argument("graph: label vertex out of range");
    labeled[v] = static_cast<int>(t);
  }
  return labeled;
}

// Every connected component must contain a labeled vertex for the
// harmonic (kappa = 0) system to be non-singular.
void check_components_labeled(const LabeledGraph& g,
                              const std::vector<int>& labeled) {
  std::vector<char> reached(g.n, 0);
  std::vector<int> queue;
  for (int v = 0; v < g.n; ++v)
    if (labeled[v] >= 0) {
      reached[v] = 1;
      queue.push_back(v);
    }
  while (!queue.empty()) {
    const int v = queue.back();
    queue.pop_back();
    for (const auto& [u, w] : g.adjacency[v])
      if (!reached[u]) {
        reached[u] = 1;
        queue.push_back(u);
      }
  }
  for (int v = 0; v < g.n; ++v)
    if (!reached[v])
      throw SingularSystem(
          "graph: kappa = 0 with an unlabeled connected component");
}

GraphInterpolant solve_direct(const LabeledGraph& g,
                              const std::vector<int>& labeled,
                              const std::vector<double>& z) {
  std::vector<int> unknown_of(g.n, -1);
  std::vector<int> vertex_of;
  for (int v = 0; v < g.n; ++v)
    if (labeled[v] < 0) {
      unknown_of[v] = static_cast<int>(vertex_of.size());
      vertex_of.push_back(v);
    }
  const int m = static_cast<int>(vertex_of.size());
  const double k2 = g.kappa * g.kappa;

  GraphInterpolant eta;
  eta.values.assign(g.n, 0.0);
  for (const auto& [v, y] : g.labels) eta.values[v] = y;
  if (m == 0) return eta;

  // (z_i + kappa^2) eta_i - sum_{j unlabeled} w_ij eta_j
  //   = sum_{j labeled} w_ij y_j.  Symmetric positive definite for
  // kappa > 0 or when every component touches a label.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
  for (int r = 0; r < m; ++r) {
    const int v = vertex_of[r];
    A(r, r) = z[v] + k2;
    for (const auto& [u, w] : g.adjacency[v]) {
      if (unknown_of[u] >= 0)
        A(r, unknown_of[u]) -= w;
      else
        b[r] += w * eta.values[u];
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() != Eigen::Success)
    throw SingularSystem("graph: singular interpolation system");
  const Eigen::VectorXd x = llt.solve(b);
  for (int r = 0; r < m; ++r) eta.values[vertex_of[r]] = x[r];
  return eta;
}

GraphInterpolant solve_jacobi(const LabeledGraph& g,
                              const std::vector<int>& labeled,
                              const std::vector<double>& z) {
  const double k2 = g.kappa * g.kappa;
  GraphInterpolant eta;
  eta.values.assign(g.n, 0.0);
  for (const auto& [v, y] : g.labels) eta.values[v] = y;

  std::vector<double> next(g.n);
  const long max_sweeps = 2000000;
  for (long sweep = 0; sweep < max_sweeps; ++sweep) {
    for (int v = 0; v < g.n; ++v) {
      if (labeled[v] >= 0) {
        next[v] = eta.values[v];
        continue;
      }
      double acc = 0.0;
      for (const auto& [u, w] : g.adjacency[v]) acc += w * eta.values[u];
      next[v] = (z[v] + k2) > 0.0 ? acc / (z[v] + k2) : 0.0;
    }
    eta.values.swap(next);
    if (sweep % 16 == 15 &&
        stationarity_residual(g, eta) <= kJacobiResidual)
      return eta;
  }
  throw NumericalError("graph: Jacobi iteration did not converge");
}

int parse_index(const std::string& tok) {
  std::size_t pos = 0;
  const int v = std::stoi(tok, &pos);
  if (pos != tok.size()) throw std::invalid_argument("graph: bad vertex id");
  return v;
}

}  // namespace

void LabeledGraph::add_edge(int i, int j, double w) {
  if (i < 0 || i >= n || j < 0 || j >= n)
    throw std::invalid_argument("graph: edge vertex out of range");
  if (i == j) throw std::invalid_argument("graph: self-loops not allowed");
  if (!(w >= 0.0) || !std::isfinite(w))
    throw std::invalid_argument("graph: edge weight must be >= 0");
  if (w == 0.0) return;
  adjacency[i].emplace_back(j, w);
  adjacency[j].emplace_back(i, w);
}

void LabeledGraph::add_label(int vertex, double y) {
  if (vertex < 0 || vertex >= n)
    throw std::invalid_argument("graph: label vertex out of range");
  labels.emplace_back(vertex, y);
}

std::vector<double> LabeledGraph::degrees() const {
  std::vector<double> z(n, 0.0);
  for (int v = 0; v < n; ++v)
    for (const auto& [u, w] : adjacency[v]) z[v] += w;
  return z;
}

void LabeledGraph::validate() const {
  if (n < 1) throw std::invalid_argument("graph: needs vertices");
  if (kappa < 0.0) throw NegativeKappa("graph: kappa must be >= 0");
  if (labels.empty()) throw NoLabels("graph: labeled set is empty");
}

GraphInterpolant solve_graph_interpolant(const LabeledGraph& graph,
                                         GraphSolveMethod method) {
  graph.validate();
  const auto labeled = label_map(graph);
  const auto z = graph.degrees();
  if (graph.kappa == 0.0) check_components_labeled(graph, labeled);

  if (method == GraphSolveMethod::Auto)
    method = graph.n <= kDirectSolveLimit ? GraphSolveMethod::Direct
                                          : GraphSolveMethod::Jacobi;
  return method == GraphSolveMethod::Direct ? solve_direct(graph, labeled, z)
                                            : solve_jacobi(graph, labeled, z);
}

double stationarity_residual(const LabeledGraph& graph,
                             const GraphInterpolant& eta) {
  const auto labeled = label_map(graph);
  const double k2 = graph.kappa * graph.kappa;
  double worst = 0.0;
  for (int v = 0; v < graph.n; ++v) {
    if (labeled[v] >= 0) continue;
    double lap = 0.0;
    for (const auto& [u, w] : graph.adjacency[v])
      lap += w * (eta.values[v] - eta.values[u]);
    worst = std::max(worst, std::abs(lap + k2 * eta.values[v]));
  }
  return worst;
}

double fully_connected_eta(int n, int n_plus, int n_minus, double kappa) {
  if (kappa < 0.0) throw NegativeKappa("fully_connected_eta: kappa >= 0");
  const int k = n_plus + n_minus;
  if (k < 1) throw NoLabels("fully_connected_eta: needs labeled vertices");
  if (n <= k)
    throw std::invalid_argument("fully_connected_eta: needs unlabeled vertices");
  return (n_plus - n_minus) / (k + kappa * kappa);
}

double hoeffding_excess_bound(double p, int k) {
  if (p < 0.0 || p > 1.0)
    throw std::invalid_argument("hoeffding: p in [0,1] required");
  if (k < 1) throw std::invalid_argument("hoeffding: k >= 1 required");
  const double gap = p - 0.5;
  return std::exp(-2.0 * gap * gap * k);
}

LabeledGraph fully_connected_graph(int n, int n_plus, int n_minus,
                                   double kappa) {
  LabeledGraph g(n);
  g.kappa = kappa;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.add_edge(i, j, 1.0);
  for (int i = 0; i < n_plus; ++i) g.add_label(i, 1.0);
  for (int i = 0; i < n_minus; ++i) g.add_label(n_plus + i, -1.0);
  return g;
}

LabeledGraph knn_graph(const double* pts, int n, int dim, int k) {
  if (k < 1 || k >= n) throw std::invalid_argument("knn_graph: 1 <= k < n");
  NeighborIndex index(pts, n, dim);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    std::span<const double> q{pts + static_cast<std::size_t>(i) * dim,
                              static_cast<std::size_t>(dim)};
    auto nn = index.query(q, std::min(k + 1, n));
    int added = 0;
    for (const auto& nb : nn.neighbors) {
      if (nb.index == i) continue;  // skip self
      edges.emplace_back(std::min(i, nb.index), std::max(i, nb.index));
      if (++added == k) break;
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  LabeledGraph g(n);
  for (const auto& [i, j] : edges) g.add_edge(i, j, 1.0);
  return g;
}

LabeledGraph read_graph_files(const std::string& edges_path,
                              const std::string& labels_path, double kappa) {
  std::ifstream edges(edges_path);
  if (!edges) throw std::invalid_argument("cannot open " + edges_path);
  std::ifstream labels(labels_path);
  if (!labels) throw std::invalid_argument("cannot open " + labels_path);

  struct Edge { int i, j; double w; };
  std::vector<Edge> edge_list;
  std::vector<std::pair<int, double>> label_list;
  int max_vertex = -1;

  std::string line;
  while (std::getline(edges, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream is(line);
    std::string a, b, c;
    if (!(is >> a >> b)) continue;
    double w = 1.0;
    if (is >> c) w = std::stod(c);
    Edge e{parse_index(a), parse_index(b), w};
    max_vertex = std::max({max_vertex, e.i, e.j});
    edge_list.push_back(e);
  }
  while (std::getline(labels, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream is(line);
    std::string a, b;
    if (!(is >> a >> b)) continue;
    const int v = parse_index(a);
    max_vertex = std::max(max_vertex, v);
    label_list.emplace_back(v, std::stod(b));
  }

  LabeledGraph g(max_vertex + 1);
  g.kappa = kappa;
  for (const auto& e : edge_list) g.add_edge(e.i, e.j, e.w);
  for (const auto& [v, y] : label_list) g.add_label(v, y);
  return g;
}

void write_interpolant_csv(std::ostream& out, const GraphInterpolant& eta) {
  out << "vertex,eta_hat\n";
  for (std::size_t v = 0; v < eta.values.size(); ++v)
    out << v << ',' << format_double(eta.values[v]) << '\n';
}

}  // namespace interp
