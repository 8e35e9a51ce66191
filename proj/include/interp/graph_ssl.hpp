#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "interp/errors.hpp"

namespace interp {

/// Weighted undirected graph with a labeled vertex subset and the
/// interpolation parameter kappa. Labels are +/-1 in the classification
/// setting but any reals are accepted.
struct LabeledGraph {
  int n = 0;
  std::vector<std::vector<std::pair<int, double>>> adjacency;
  std::vector<std::pair<int, double>> labels;  // (vertex, y)
  double kappa = 0.0;

  explicit LabeledGraph(int vertices = 0) : n(vertices), adjacency(vertices) {}

  /// Adds the symmetric edge {i, j} with weight w > 0.
  void add_edge(int i, int j, double w);
  void add_label(int vertex, double y);

  std::vector<double> degrees() const;  // z_i = sum_j w_ij
  void validate() const;
};

/// Values on all vertices: equal to the given labels on labeled vertices,
/// and satisfying (L eta)_i = kappa^2 eta_i on unlabeled vertices, with
/// L = D - W the unnormalized Laplacian. kappa = 0 is the label-propagation
/// (harmonic) limit.
struct GraphInterpolant {
  std::vector<double> values;
};

enum class GraphSolveMethod { Auto, Direct, Jacobi };

/// Direct dense solve for n <= 2000, otherwise Jacobi iteration on the
/// fixed-point form eta_i = z_i / (kappa^2 + z_i) * etabar_i to residual
/// 1e-10. Throws SingularSystem when kappa = 0 and some connected
/// component has no labeled vertex; NegativeKappa; NoLabels.
GraphInterpolant solve_graph_interpolant(
    const LabeledGraph& graph, GraphSolveMethod method = GraphSolveMethod::Auto);

/// Max over unlabeled vertices of |(L eta)_i - kappa^2 eta_i|.
double stationarity_residual(const LabeledGraph& graph,
                             const GraphInterpolant& eta);

/// Closed form on the fully connected unit-weight graph with k = n_plus +
/// n_minus labeled vertices: (n_plus - n_minus) / (k + kappa^2).
double fully_connected_eta(int n, int n_plus, int n_minus, double kappa);

/// exp(-2 (p - 1/2)^2 k): the label-majority excess-risk bound on the
/// fully connected graph.
double hoeffding_excess_bound(double p, int k);

/// Fully connected unit-weight graph with the first n_plus + n_minus
/// vertices labeled (+1 then -1).
LabeledGraph fully_connected_graph(int n, int n_plus, int n_minus,
                                   double kappa);

/// Convenience builder: symmetrized unit-weight k-nearest-neighbor graph
/// over a point cloud.
LabeledGraph knn_graph(const double* pts, int n, int dim, int k);

/// Text formats: edges as lines "i j w", labels as lines "i y";
/// '#' starts a comment. Output CSV has header vertex,eta_hat.
LabeledGraph read_graph_files(const std::string& edges_path,
                              const std::string& labels_path, double kappa);
void write_interpolant_csv(std::ostream& out, const GraphInterpolant& eta);

}  // namespace interp
