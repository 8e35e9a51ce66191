#include "interp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "interp/dataset.hpp"

namespace interp {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kEnterTol = 1e-10;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Standard-form problem: min cost.lambda s.t. M lambda = rhs, lambda >= 0.
// Column j of M lives at cols + j*stride (m contiguous entries). This is
// the dual of the inequality-form LP exposed in the header: its columns
// are the primal constraint rows, its rhs is the primal objective, and
// the simplex multipliers at the optimum are the primal solution.
struct StdFormProblem {
  const double* cols;
  int stride;
  int m;  // rows
  int n;  // columns
  const double* cost;  // n
  const double* rhs;   // m
};

enum class StdStatus { Optimal, Infeasible, Unbounded };

struct StdFormOutcome {
  StdStatus status = StdStatus::Optimal;
  Eigen::VectorXd multipliers;
  double objective = 0.0;
};

// Two-phase revised simplex. Pricing uses Dantzig's rule and switches
// permanently to Bland's rule after a stall window, which guarantees
// termination on degenerate instances. Artificial variables never
// re-enter; in phase 2 a basic artificial is pinned at zero by treating
// any pivot that would raise it as a zero-ratio block.
StdFormOutcome solve_standard_form(const StdFormProblem& p) {
  const int m = p.m;
  const int n = p.n;

  std::vector<int> basis(m);
  std::vector<double> art_sign(m);
  std::vector<char> in_basis(static_cast<std::size_t>(std::max(n, 1)), 0);
  for (int i = 0; i < m; ++i) {
    basis[i] = n + i;
    art_sign[i] = (p.rhs[i] >= 0.0) ? 1.0 : -1.0;
  }

  Eigen::VectorXd r(m);
  for (int i = 0; i < m; ++i) r[i] = p.rhs[i];

  Eigen::MatrixXd B(m, m), Binv(m, m);
  Eigen::VectorXd xB(m), y(m), u(m), costB(m), a_e(m);

  auto load_column = [&](int j, Eigen::VectorXd& out) {
    if (j < n) {
      const double* c = p.cols + static_cast<std::size_t>(j) * p.stride;
      for (int i = 0; i < m; ++i) out[i] = c[i];
    } else {
      out.setZero();
      out[j - n] = art_sign[j - n];
    }
  };

  const long max_iters = 5000 + 5L * std::max(n, 1);

  for (int phase = 1; phase <= 2; ++phase) {
    bool bland = false;
    int stall = 0;
    double last_obj = kInf;
    bool phase_done = false;

    for (long iter = 0; !phase_done; ++iter) {
      if (iter > max_iters) throw NumericalError("simplex: iteration cap hit");

      for (int i = 0; i < m; ++i) {
        load_column(basis[i], a_e);
        B.col(i) = a_e;
      }
      Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
      Binv = lu.inverse();
      if (!Binv.allFinite()) throw NumericalError("simplex: singular basis");
      xB = Binv * r;
      for (int i = 0; i < m; ++i)
        if (xB[i] < 0.0 && xB[i] > -kTightTol) xB[i] = 0.0;

      for (int i = 0; i < m; ++i) {
        const int v = basis[i];
        costB[i] = (phase == 1) ? (v >= n ? 1.0 : 0.0)
                                : (v >= n ? 0.0 : p.cost[v]);
      }
      y.noalias() = Binv.transpose() * costB;
      const double obj = costB.dot(xB);
      if (obj < last_obj - 1e-13 * (1.0 + std::abs(obj))) {
        stall = 0;
        last_obj = obj;
      } else if (!bland && ++stall > 2 * m + 16) {
        bland = true;
      }

      // Pricing over real nonbasic columns.
      int enter = -1;
      double best = -kEnterTol;
      for (int j = 0; j < n; ++j) {
        if (in_basis[j]) continue;
        const double* cj = p.cols + static_cast<std::size_t>(j) * p.stride;
        double dot = 0.0;
        for (int i = 0; i < m; ++i) dot += y[i] * cj[i];
        const double rc = ((phase == 1) ? 0.0 : p.cost[j]) - dot;
        if (rc < best) {
          enter = j;
          if (bland) break;
          best = rc;
        }
      }

      if (enter < 0) {
        if (phase == 1) {
          if (obj > kTightTol) return {StdStatus::Infeasible, y, obj};
          for (int i = 0; i < m; ++i)
            if (basis[i] >= n) xB[i] = 0.0;
          phase_done = true;
          continue;
        }
        return {StdStatus::Optimal, y, obj};
      }

      load_column(enter, a_e);
      u.noalias() = Binv * a_e;

      int leave = -1;
      double best_ratio = kInf;
      for (int i = 0; i < m; ++i) {
        double ratio;
        if (u[i] > kPivotTol) {
          ratio = std::max(xB[i], 0.0) / u[i];
        } else if (phase == 2 && basis[i] >= n && u[i] < -kPivotTol) {
          ratio = 0.0;  // keep the artificial pinned at zero
        } else {
          continue;
        }
        if (leave < 0 || ratio < best_ratio - 1e-12) {
          best_ratio = ratio;
          leave = i;
        } else if (ratio <= best_ratio + 1e-12) {
          bool prefer;
          if (bland) {
            prefer = basis[i] < basis[leave];
          } else {
            const bool i_art = basis[i] >= n;
            const bool l_art = basis[leave] >= n;
            prefer = (i_art != l_art) ? i_art : basis[i] < basis[leave];
          }
          if (prefer) {
            best_ratio = std::min(best_ratio, ratio);
            leave = i;
          }
        }
      }

      if (leave < 0) {
        if (phase == 1) throw NumericalError("simplex: phase-1 ratio failure");
        return {StdStatus::Unbounded, y, -kInf};
      }

      if (basis[leave] < n) in_basis[basis[leave]] = 0;
      basis[leave] = enter;
      in_basis[enter] = 1;
    }
  }
  throw NumericalError("simplex: unreachable");
}

LpSolution assemble_solution(const double* A, const double* b, const double* c,
                             int n_c, int m, const Eigen::VectorXd& x) {
  LpSolution sol;
  sol.point.assign(x.data(), x.data() + m);
  sol.objective = 0.0;
  for (int j = 0; j < m; ++j) sol.objective += c[j] * x[j];
  for (int i = 0; i < n_c; ++i) {
    const double* row = A + static_cast<std::size_t>(i) * m;
    double dot = 0.0;
    for (int j = 0; j < m; ++j) dot += row[j] * x[j];
    if (std::abs(dot - b[i]) <= kTightTol) sol.tight.push_back(i);
  }
  return sol;
}

// Farkas certificate search: min b.lambda s.t. A^T lambda = 0,
// sum lambda = 1, lambda >= 0. A negative optimum certifies primal
// infeasibility of {A x <= b}.
bool primal_infeasible(const double* A, const double* b, int n_c, int m) {
  std::vector<double> cols(static_cast<std::size_t>(n_c) * (m + 1));
  for (int j = 0; j < n_c; ++j) {
    const double* row = A + static_cast<std::size_t>(j) * m;
    double* col = cols.data() + static_cast<std::size_t>(j) * (m + 1);
    std::copy(row, row + m, col);
    col[m] = 1.0;
  }
  std::vector<double> rhs(static_cast<std::size_t>(m) + 1, 0.0);
  rhs[m] = 1.0;
  StdFormProblem farkas{cols.data(), m + 1, m + 1, n_c, b, rhs.data()};
  const auto out = solve_standard_form(farkas);
  if (out.status == StdStatus::Infeasible) return false;
  if (out.status == StdStatus::Unbounded) return true;
  return out.objective < -kTightTol;
}

LpSolution solve_inequality_lp_impl(const double* A, const double* b,
                                    const double* c, int n_c, int m,
                                    bool assume_feasible) {
  if (m < 1) throw std::invalid_argument("lp: needs at least one variable");
  if (n_c == 0) {
    bool zero = true;
    for (int j = 0; j < m; ++j) zero = zero && c[j] == 0.0;
    if (!zero) throw UnboundedError("lp: unconstrained objective");
    LpSolution sol;
    sol.point.assign(m, 0.0);
    return sol;
  }

  StdFormProblem dual{A, m, m, n_c, b, c};
  const auto out = solve_standard_form(dual);
  switch (out.status) {
    case StdStatus::Optimal:
      return assemble_solution(A, b, c, n_c, m, out.multipliers);
    case StdStatus::Unbounded:
      // Dual unbounded below => primal infeasible.
      throw InfeasibleError("lp: infeasible constraint system");
    case StdStatus::Infeasible:
      if (!assume_feasible && primal_infeasible(A, b, n_c, m))
        throw InfeasibleError("lp: infeasible constraint system");
      throw UnboundedError("lp: objective unbounded above");
  }
  throw NumericalError("lp: unreachable");
}

void validate_lp(const LinearProgram& lp) {
  if (lp.num_vars < 1) throw std::invalid_argument("lp: num_vars >= 1 required");
  if (static_cast<int>(lp.objective.size()) != lp.num_vars)
    throw std::invalid_argument("lp: objective size mismatch");
  if (lp.constraints.size() !=
      lp.rhs.size() * static_cast<std::size_t>(lp.num_vars))
    throw std::invalid_argument("lp: constraint matrix size mismatch");
  for (double v : lp.objective)
    if (!std::isfinite(v)) throw std::invalid_argument("lp: non-finite objective");
  for (double v : lp.constraints)
    if (!std::isfinite(v)) throw std::invalid_argument("lp: non-finite constraint");
  for (double v : lp.rhs)
    if (!std::isfinite(v)) throw std::invalid_argument("lp: non-finite rhs");
}

}  // namespace

LpSolution solve_small_lp(const LinearProgram& lp) {
  validate_lp(lp);
  return solve_inequality_lp_impl(lp.constraints.data(), lp.rhs.data(),
                                  lp.objective.data(), lp.num_constraints(),
                                  lp.num_vars, /*assume_feasible=*/false);
}

LpSolution solve_inequality_lp(const double* A, const double* b,
                               const double* c, int n_c, int m) {
  return solve_inequality_lp_impl(A, b, c, n_c, m, /*assume_feasible=*/false);
}

double SimplexCell::diameter() const {
  const int k = static_cast<int>(vertex_indices.size());
  double best = 0.0;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      best = std::max(best, squared_distance(vertex(i), vertex(j)));
  return std::sqrt(best);
}

std::optional<SimplexCell> try_make_simplex_cell(const double* pts, int dim,
                                                 std::span<const int> indices) {
  const int k = dim + 1;
  if (static_cast<int>(indices.size()) != k)
    throw std::invalid_argument("simplex cell needs d+1 vertices");

  SimplexCell cell;
  cell.vertex_indices.assign(indices.begin(), indices.end());
  cell.vertex_coords.resize(static_cast<std::size_t>(k) * dim);

  Eigen::MatrixXd lifted(k, k);
  for (int j = 0; j < k; ++j) {
    const double* v = pts + static_cast<std::size_t>(indices[j]) * dim;
    std::copy(v, v + dim, cell.vertex_coords.begin() +
                              static_cast<std::size_t>(j) * dim);
    lifted(0, j) = 1.0;
    for (int i = 0; i < dim; ++i) lifted(i + 1, j) = v[i];
  }

  cell.lifted = Eigen::PartialPivLU<Eigen::MatrixXd>(lifted);
  const Eigen::MatrixXd inv = cell.lifted.inverse();
  if (!inv.allFinite()) return std::nullopt;
  const double cond = lifted.cwiseAbs().colwise().sum().maxCoeff() *
                      inv.cwiseAbs().colwise().sum().maxCoeff();
  if (!(cond <= kMaxSimplexCond)) return std::nullopt;
  cell.condition = cond;
  return cell;
}

SimplexCell make_simplex_cell(const double* pts, int dim,
                              std::span<const int> indices) {
  auto cell = try_make_simplex_cell(pts, dim, indices);
  if (!cell)
    throw DegenerateSimplex("simplex cell: lifted matrix condition > 1e12");
  return std::move(*cell);
}

std::vector<double> barycentric_coordinates(const SimplexCell& cell,
                                            std::span<const double> query) {
  const int d = cell.dim();
  if (static_cast<int>(query.size()) != d)
    throw std::invalid_argument("barycentric: query dimension mismatch");
  if (!(cell.condition <= kMaxSimplexCond) || cell.condition == 0.0)
    throw DegenerateSimplex("barycentric: degenerate cell");
  Eigen::VectorXd rhs(d + 1);
  rhs[0] = 1.0;
  for (int i = 0; i < d; ++i) rhs[i + 1] = query[i];
  const Eigen::VectorXd w = cell.lifted.solve(rhs);
  return {w.data(), w.data() + d + 1};
}

double interpolate_simplex(const SimplexCell& cell,
                           std::span<const double> vertex_labels,
                           std::span<const double> query) {
  if (vertex_labels.size() != cell.vertex_indices.size())
    throw std::invalid_argument("interpolate: needs d+1 vertex labels");
  const auto w = barycentric_coordinates(cell, query);
  double value = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) value += w[i] * vertex_labels[i];
  return value;
}

DelaunayLocator::DelaunayLocator(const double* pts, int n, int dim)
    : n_(n), dim_(dim) {
  if (n < dim + 1)
    throw std::invalid_argument("delaunay locator: needs at least d+1 points");
  pts_.assign(pts, pts + static_cast<std::size_t>(n) * dim);
  lifted_rows_.resize(static_cast<std::size_t>(n) * (dim + 1));
  lifted_rhs_.resize(n);
  for (int i = 0; i < n; ++i) {
    const double* p = pts + static_cast<std::size_t>(i) * dim;
    double* row = lifted_rows_.data() + static_cast<std::size_t>(i) * (dim + 1);
    double sq = 0.0;
    for (int j = 0; j < dim; ++j) {
      row[j] = p[j];
      sq += p[j] * p[j];
    }
    row[dim] = 1.0;
    lifted_rhs_[i] = sq;
  }
}

std::optional<SimplexCell> DelaunayLocator::locate(
    std::span<const double> query) const {
  if (static_cast<int>(query.size()) != dim_)
    throw std::invalid_argument("locate: query dimension mismatch");

  std::vector<double> objective(dim_ + 1);
  std::copy(query.begin(), query.end(), objective.begin());
  objective[dim_] = 1.0;

  LpSolution sol;
  try {
    sol = solve_inequality_lp_impl(lifted_rows_.data(), lifted_rhs_.data(),
                                   objective.data(), n_, dim_ + 1,
                                   /*assume_feasible=*/true);
  } catch (const UnboundedError&) {
    return std::nullopt;  // outside the convex hull
  }

  const auto& tight = sol.tight;
  const int k = dim_ + 1;
  if (static_cast<int>(tight.size()) < k)
    throw DegenerateConfiguration(
        "locate: fewer than d+1 tight constraints at LP optimum");

  // Lexicographically smallest tight subset that forms a valid containing
  // simplex. On generic queries the tight set has exactly d+1 members.
  std::vector<int> pos(k);
  std::iota(pos.begin(), pos.end(), 0);
  std::vector<int> idx(k);
  const int t = static_cast<int>(tight.size());
  while (true) {
    for (int j = 0; j < k; ++j) idx[j] = tight[pos[j]];
    if (auto cell = try_make_simplex_cell(pts_.data(), dim_, idx)) {
      const auto w = barycentric_coordinates(*cell, query);
      if (*std::min_element(w.begin(), w.end()) >= -kContainTol)
        return cell;
    }
    int j = k - 1;
    while (j >= 0 && pos[j] == t - k + j) --j;
    if (j < 0) break;
    ++pos[j];
    for (int l = j + 1; l < k; ++l) pos[l] = pos[l - 1] + 1;
  }
  throw DegenerateConfiguration("locate: no non-degenerate containing cell");
}

std::optional<SimplexCell> locate_delaunay_cell(const double* pts, int n,
                                                int dim,
                                                std::span<const double> query) {
  return DelaunayLocator(pts, n, dim).locate(query);
}

HullMembership::HullMembership(const double* pts, int n, int dim)
    : n_(n), dim_(dim) {
  if (n < 1) throw std::invalid_argument("hull: needs at least one point");
  const int m = dim + 1;
  rows_.assign(static_cast<std::size_t>(n + 2 * dim) * m, 0.0);
  rhs_.assign(n + 2 * dim, 0.0);
  for (int i = 0; i < n; ++i) {
    const double* p = pts + static_cast<std::size_t>(i) * dim;
    double* row = rows_.data() + static_cast<std::size_t>(i) * m;
    std::copy(p, p + dim, row);
    row[dim] = -1.0;  // a.p_i - c <= 0
  }
  for (int j = 0; j < dim; ++j) {
    rows_[static_cast<std::size_t>(n + 2 * j) * m + j] = 1.0;
    rhs_[n + 2 * j] = 1.0;
    rows_[static_cast<std::size_t>(n + 2 * j + 1) * m + j] = -1.0;
    rhs_[n + 2 * j + 1] = 1.0;
  }
}

bool HullMembership::contains(std::span<const double> query) const {
  if (static_cast<int>(query.size()) != dim_)
    throw std::invalid_argument("hull: query dimension mismatch");
  std::vector<double> objective(dim_ + 1);
  std::copy(query.begin(), query.end(), objective.begin());
  objective[dim_] = -1.0;  // maximize a.q - c
  const auto sol =
      solve_inequality_lp_impl(rows_.data(), rhs_.data(), objective.data(),
                               n_ + 2 * dim_, dim_ + 1,
                               /*assume_feasible=*/true);
  return sol.objective <= kTightTol;
}

bool hull_contains(const double* pts, int n, int dim,
                   std::span<const double> query) {
  return HullMembership(pts, n, dim).contains(query);
}

double max_cell_diameter(const double* pts, int n, int dim,
                         const std::vector<double>& probes) {
  const DelaunayLocator locator(pts, n, dim);
  const int np = static_cast<int>(probes.size()) / dim;
  double best = 0.0;
  for (int i = 0; i < np; ++i) {
    std::span<const double> q{probes.data() + static_cast<std::size_t>(i) * dim,
                              static_cast<std::size_t>(dim)};
    if (auto cell = locator.locate(q)) best = std::max(best, cell->diameter());
  }
  return best;
}

}  // namespace interp
