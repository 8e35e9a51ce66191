#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

#include "interp/errors.hpp"

namespace interp {

/// Tolerances for the geometric predicates. Absolute, tuned for
/// unit-scale data.
inline constexpr double kTightTol = 1e-9;       // LP constraint tightness
inline constexpr double kContainTol = 1e-9;     // barycentric containment slack
inline constexpr double kMaxSimplexCond = 1e12; // degenerate-simplex cutoff

/// A dense linear program: maximize objective . x subject to
/// constraints . x <= rhs, with x free. Rows are stored contiguously.
struct LinearProgram {
  int num_vars = 0;
  std::vector<double> objective;    // num_vars
  std::vector<double> constraints;  // num_constraints x num_vars, row-major
  std::vector<double> rhs;          // num_constraints

  int num_constraints() const { return static_cast<int>(rhs.size()); }

  void add_constraint(std::span<const double> row, double b) {
    constraints.insert(constraints.end(), row.begin(), row.end());
    rhs.push_back(b);
  }
};

struct LpSolution {
  std::vector<double> point;
  double objective = 0.0;
  std::vector<int> tight;  // ascending; |a_i . x - b_i| <= kTightTol
};

/// Solves a small dense LP (intended for a handful of variables; the
/// constraint count may be large). Returns a vertex-optimal solution when
/// one exists. Throws InfeasibleError / UnboundedError.
LpSolution solve_small_lp(const LinearProgram& lp);

/// View-based variant for solvers that reuse one constraint system with
/// many objectives (the per-query Delaunay LPs). A is n_c x m row-major.
LpSolution solve_inequality_lp(const double* A, const double* b,
                               const double* c, int n_c, int m);

/// d+1 affinely independent dataset points forming a simplex, with the
/// lifted-system factorization cached for barycentric solves.
struct SimplexCell {
  std::vector<int> vertex_indices;             // d+1, ascending
  std::vector<double> vertex_coords;           // (d+1) x d, row-major
  Eigen::PartialPivLU<Eigen::MatrixXd> lifted; // LU of [[1...1],[v_1|...|v_{d+1}]]
  double condition = 0.0;                      // 1-norm condition of the lifted matrix

  int dim() const { return static_cast<int>(vertex_indices.size()) - 1; }
  std::span<const double> vertex(int i) const {
    return {vertex_coords.data() + static_cast<std::size_t>(i) * dim(),
            static_cast<std::size_t>(dim())};
  }
  double diameter() const;  // longest edge
};

/// Builds a cell from dataset rows; throws DegenerateSimplex if the lifted
/// matrix has 1-norm condition above kMaxSimplexCond.
SimplexCell make_simplex_cell(const double* pts, int dim,
                              std::span<const int> indices);
std::optional<SimplexCell> try_make_simplex_cell(const double* pts, int dim,
                                                 std::span<const int> indices);

/// Barycentric coordinates of `query` in the cell: the unique weights with
/// sum 1 and sum_i w_i v_i = query.
std::vector<double> barycentric_coordinates(const SimplexCell& cell,
                                            std::span<const double> query);

/// Value at `query` of the affine function through the labeled vertices
/// (vertex_labels has d+1 entries, ordered like cell.vertex_indices).
double interpolate_simplex(const SimplexCell& cell,
                           std::span<const double> vertex_labels,
                           std::span<const double> query);

/// Per-query point location in the implicit Delaunay triangulation.
///
/// Each query solves the lifted LP: maximize a.q + b over (a, b) subject
/// to a.p_i + b <= |p_i|^2. At the optimum the tight constraints are the
/// vertices of a Delaunay cell containing q. No triangulation is stored.
/// Degenerate (cocircular / shared-face) queries leave more than d+1
/// constraints tight; the lexicographically smallest index subset whose
/// simplex is non-degenerate and contains the query is selected.
class DelaunayLocator {
 public:
  DelaunayLocator(const double* pts, int n, int dim);

  /// nullopt means the query lies outside the convex hull.
  /// Throws DegenerateConfiguration when no valid cell can be formed.
  std::optional<SimplexCell> locate(std::span<const double> query) const;

  int size() const { return n_; }
  int dim() const { return dim_; }
  const double* points() const { return pts_.data(); }

 private:
  int n_, dim_;
  std::vector<double> pts_;  // n x dim copy
  std::vector<double> lifted_rows_;  // n x (dim+1): (p_i, 1)
  std::vector<double> lifted_rhs_;   // |p_i|^2
};

std::optional<SimplexCell> locate_delaunay_cell(const double* pts, int n,
                                                int dim,
                                                std::span<const double> query);

/// Closed convex hull membership, decided by the separating-hyperplane LP:
/// the query is inside iff no hyperplane with unit-box normal separates it
/// from the points by more than kTightTol.
class HullMembership {
 public:
  HullMembership(const double* pts, int n, int dim);
  bool contains(std::span<const double> query) const;

 private:
  int n_, dim_;
  std::vector<double> rows_;  // (n + 2 dim) x (dim + 1)
  std::vector<double> rhs_;
};

bool hull_contains(const double* pts, int n, int dim,
                   std::span<const double> query);

/// Max diameter over the Delaunay cells located at the probe points
/// (probes outside the hull are skipped). Lower-bounds the true maximum
/// simplex diameter of the triangulation.
double max_cell_diameter(const double* pts, int n, int dim,
                         const std::vector<double>& probes);

}  // namespace interp
