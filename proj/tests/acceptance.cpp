// Acceptance suite: one pass/fail line per criterion. Each criterion pins
// its tolerances in code; the process exit status is the number of
// failures. Run `acceptance --help` for the flags.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "interp/dataset.hpp"
#include "interp/estimators.hpp"
#include "interp/geometry.hpp"
#include "interp/graph_ssl.hpp"
#include "interp/harness.hpp"
#include "interp/rng.hpp"
#include "interp/synthetic.hpp"
#include "oracles.hpp"

using namespace interp;

namespace {

int g_threads = 0;
std::string g_cli_path;

// --- 1. barycentric interpolation equals the affine system solve ----------
bool criterion_1(std::ostream& log) {
  Rng rng(101);
  double worst = 0.0;
  int done = 0;
  while (done < 1000) {
    const int d = 1 + done % 5;
    std::vector<double> pts(static_cast<std::size_t>(d + 1) * d);
    for (auto& v : pts) v = rng.uniform();
    std::vector<int> idx(d + 1);
    std::iota(idx.begin(), idx.end(), 0);
    const auto cell = try_make_simplex_cell(pts.data(), d, idx);
    if (!cell) continue;  // redraw degenerate simplices
    std::vector<double> labels(d + 1);
    for (auto& y : labels) y = rng.uniform(-1.0, 2.0);
    std::vector<double> w(d + 1), q(d, 0.0);
    double tot = 0.0;
    for (auto& v : w) tot += (v = -std::log(1.0 - rng.uniform()));
    for (int i = 0; i <= d; ++i)
      for (int j = 0; j < d; ++j)
        q[j] += (w[i] / tot) * pts[static_cast<std::size_t>(i) * d + j];
    const auto expect = oracle::affine_fit_eval(pts, labels, d, q);
    if (!expect) continue;
    worst = std::max(worst,
                     std::abs(interpolate_simplex(*cell, labels, q) - *expect));
    ++done;
  }
  log << "max |simplex - affine fit| = " << worst << " over 1000 simplices";
  return worst <= 1e-8;
}

// --- 2. training labels are reproduced -------------------------------------
bool criterion_2(std::ostream& log) {
  Rng rng(202);
  double worst_simplicial = 0.0;
  bool winn_exact = true;
  for (int rep = 0; rep < 100; ++rep) {
    const int d = 1 + static_cast<int>(rng.below(4));
    const int n = d + 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(200 - d - 1)));
    LabeledDataset ds;
    ds.dim = d;
    ds.points.resize(static_cast<std::size_t>(n) * d);
    for (auto& v : ds.points) v = rng.uniform();
    ds.labels.resize(n);
    for (auto& y : ds.labels) y = rng.uniform();

    const auto simplicial = fit_estimator(EstimatorConfig::simplicial(), ds);
    const int k = std::min(5, n - 1);
    const auto winn = fit_estimator(
        EstimatorConfig::winn(k, WeightFunction::power_law(d / 4.0)), ds);
    for (int i = 0; i < n; ++i) {
      worst_simplicial = std::max(
          worst_simplicial, std::abs(simplicial.predict(ds.point(i)) - ds.labels[i]));
      winn_exact = winn_exact && winn.predict(ds.point(i)) == ds.labels[i];
    }
  }
  log << "simplicial max error " << worst_simplicial << ", wiNN exact "
      << (winn_exact ? "yes" : "no");
  return worst_simplicial <= 1e-9 && winn_exact;
}

// --- 3. LP locator against the empty-circumcircle oracle -------------------
bool criterion_3(std::ostream& log) {
  Rng rng(303);
  long compared = 0, inside = 0;
  double worst = 0.0;
  for (int config = 0; config < 5; ++config) {
    const int n = 12 + static_cast<int>(rng.below(19));  // n <= 30
    std::vector<double> pts(static_cast<std::size_t>(n) * 2);
    for (auto& v : pts) v = rng.uniform();
    std::vector<double> labels(n);
    for (auto& y : labels) y = rng.uniform();
    const oracle::BruteDelaunay2D brute(pts.data(), n);
    const DelaunayLocator locator(pts.data(), n, 2);
    for (int qi = 0; qi < 500; ++qi) {
      const std::vector<double> q = {rng.uniform(), rng.uniform()};
      const auto expect = brute.interpolate(q, labels);
      if (!expect) continue;
      ++inside;
      if (!expect->clean) continue;  // degenerate per the oracle
      const auto cell = locator.locate(q);
      if (!cell) return false;
      std::vector<double> cl(cell->vertex_indices.size());
      for (std::size_t i = 0; i < cl.size(); ++i)
        cl[i] = labels[cell->vertex_indices[i]];
      worst = std::max(worst,
                       std::abs(interpolate_simplex(*cell, cl, q) - expect->value));
      ++compared;
    }
  }
  log << compared << "/" << inside
      << " in-hull queries compared, max |lp - oracle| = " << worst;
  return worst <= 1e-8 && compared > inside * 9 / 10 && compared > 1000;
}

// --- 4. epsilon-grid cell diameters stay below 2 epsilon -------------------
bool criterion_4(std::ostream& log) {
  bool ok = true;
  std::ostringstream detail;
  for (const double eps : {0.1, 0.05}) {
    const int cells = static_cast<int>(std::lround(1.0 / eps));
    std::vector<double> pts;
    for (int i = 0; i <= cells; ++i)
      for (int j = 0; j <= cells; ++j) {
        pts.push_back(i * eps);
        pts.push_back(j * eps);
      }
    // Probes on a finer grid, three per cell edge.
    std::vector<double> probes;
    for (int i = 0; i < 3 * cells; ++i)
      for (int j = 0; j < 3 * cells; ++j) {
        probes.push_back((i + 0.5) * eps / 3.0);
        probes.push_back((j + 0.5) * eps / 3.0);
      }
    const double diam = max_cell_diameter(
        pts.data(), static_cast<int>(pts.size() / 2), 2, probes);
    detail << "eps=" << eps << ": " << diam << "  ";
    ok = ok && diam <= 2.0 * eps && diam > 0.0;
  }
  log << detail.str();
  return ok;
}

// --- 5. 1-NN tends to the Cover-Hart limit while wiNN reaches Bayes --------
bool criterion_5(std::ostream& log) {
  ExperimentSpec spec;
  spec.problem = SyntheticProblem::constant(2, 0.2);
  spec.n_list = {2000};
  spec.trials = 200;
  spec.test_points = 500;
  spec.master_seed = 505;
  spec.threads = g_threads;

  spec.estimator = EstimatorConfig::unweighted_knn(1);
  const double nn_risk = mc_disagreement(spec).risk.rows[0].mean;

  spec.estimator = EstimatorConfig::winn(45, WeightFunction::power_law(0.5));
  const double winn_risk = mc_disagreement(spec).risk.rows[0].mean;

  log << "1-NN risk " << nn_risk << " (limit 0.32), wiNN risk " << winn_risk
      << " (Bayes 0.2)";
  return std::abs(nn_risk - 0.32) <= 0.02 && std::abs(winn_risk - 0.2) <= 0.02;
}

// --- 6. wiNN log-log rate near -1/2 on the Lipschitz problem ----------------
bool criterion_6(std::ostream& log) {
  ExperimentSpec spec;
  spec.problem = SyntheticProblem::lipschitz_sine(2, 0.3, 1.0);
  spec.estimator = EstimatorConfig::winn(0, WeightFunction::power_law(0.5));
  spec.n_list = {256, 512, 1024, 2048, 4096, 8192, 16384};
  spec.trials = 50;
  spec.test_points = 256;
  spec.master_seed = 606;
  spec.threads = g_threads;
  const auto result = mc_mse(spec);
  const auto fit = fit_rate(result);
  log << "fitted slope " << fit.slope << " (theory -0.5), r2 " << fit.r_squared;
  return fit.slope >= -0.65 && fit.slope <= -0.35;
}

// --- 7. simplicial MSE against the asymptotic noise bound ------------------
bool criterion_7(std::ostream& log) {
  const auto problem = SyntheticProblem::constant(4, 0.2);
  ExperimentSpec spec;
  spec.problem = problem;
  spec.estimator = EstimatorConfig::simplicial();
  spec.n_list = {20000};
  spec.trials = 20;
  spec.test_points = 150;
  spec.master_seed = 707;
  spec.threads = g_threads;
  const double mse = mc_mse(spec).rows[0].mean;

  const double miss = hull_miss_mass(problem, 20000, 10, 7070, 200);
  const double bound = 1.25 * (2.0 / 6.0) * 0.16 + 0.25 * miss;
  log << "mse " << mse << " vs bound " << bound << " (hull miss " << miss << ")";
  return mse <= bound;
}

// --- 8. noisy-simplex fractions: 2^-d for interpolation, worse for 1-NN ----
bool criterion_8(std::ostream& log) {
  bool ok = true;
  std::ostringstream detail;
  for (int d : {2, 3, 4}) {
    const auto demo = simplex_noise_demo(d, 1000000, 808 + d);
    detail << "d=" << d << ": " << demo.simplicial_fraction << "/"
           << demo.nn_fraction << "  ";
    ok = ok && std::abs(demo.simplicial_fraction - std::pow(2.0, -d)) <= 0.01 &&
         demo.simplicial_fraction < demo.nn_fraction;
  }
  log << detail.str() << "(simplicial/nn)";
  return ok;
}

// --- 9. adversarial set: dense in the cover sense yet small in mass --------
bool criterion_9(std::ostream& log) {
  const auto problem = SyntheticProblem::constant(2, 0.9);
  const auto cfg = EstimatorConfig::winn(71, WeightFunction::power_law(0.5));
  double covered = 0.0, mass = 0.0;
  const int seeds = 20;
  std::vector<double> cov(seeds), ms(seeds);
  parallel_for(seeds, g_threads, [&](int s) {
    Rng stream(909, 1, static_cast<std::uint64_t>(s));
    const auto out =
        adversarial_density(problem, cfg, 5000, 0.05, 50, stream.next_u64());
    cov[s] = out.covered_fraction;
    ms[s] = out.adversarial_mass;
  });
  for (int s = 0; s < seeds; ++s) {
    covered += cov[s] / seeds;
    mass += ms[s] / seeds;
  }
  log << "mean covered " << covered << " (>= 0.99), mean mass " << mass
      << " (<= 0.15)";
  return covered >= 0.99 && mass <= 0.15;
}

// --- 10. fully connected closed form ----------------------------------------
bool criterion_10(std::ostream& log) {
  const auto g = fully_connected_graph(100, 7, 3, 1.0);
  const auto eta = solve_graph_interpolant(g);
  const double expect = fully_connected_eta(100, 7, 3, 1.0);
  double worst = 0.0;
  for (int v = 10; v < 100; ++v)
    worst = std::max(worst, std::abs(eta.values[v] - expect));
  log << "closed form " << expect << " (= 4/11), max deviation " << worst;
  return std::abs(expect - 4.0 / 11.0) <= 1e-12 && worst <= 1e-9;
}

// --- 11. Hoeffding bound on the label majority ------------------------------
bool criterion_11(std::ostream& log) {
  Rng rng(1111);
  const int trials = 100000, k = 50;
  long below = 0;
  for (int t = 0; t < trials; ++t) {
    int plus = 0;
    for (int i = 0; i < k; ++i) plus += rng.bernoulli(0.7) ? 1 : 0;
    below += (2 * plus - k) < 0 ? 1 : 0;
  }
  const double freq = static_cast<double>(below) / trials;
  const double bound = hoeffding_excess_bound(0.7, k);
  const double se = std::sqrt(std::max(freq, 1e-12) * (1.0 - freq) / trials);
  log << "empirical " << freq << " vs bound " << bound << " + 3se ("
      << 3.0 * se << ")";
  return freq <= bound + 3.0 * se;
}

// --- 12. kappa -> 0 Laplace limit and the PERT stump --------------------------
bool criterion_12(std::ostream& log) {
  Rng rng(1212);
  std::vector<double> xs(10);
  for (auto& v : xs) v = rng.uniform();
  std::sort(xs.begin(), xs.end());
  std::vector<double> ys(10);
  const int cut = 4;  // threshold-consistent labels
  for (int i = 0; i < 10; ++i) ys[i] = i <= cut ? 0.0 : 1.0;

  auto piecewise_linear = [&](double q) {
    if (q <= xs.front()) return ys.front();
    if (q >= xs.back()) return ys.back();
    for (std::size_t i = 1; i < xs.size(); ++i)
      if (q <= xs[i])
        return ys[i - 1] +
               (ys[i] - ys[i - 1]) * (q - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return ys.back();
  };

  // 200 grid points spread between adjacent data points.
  std::vector<double> grid;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    for (int j = 1; j <= 22; ++j)
      grid.push_back(xs[i] + (xs[i + 1] - xs[i]) * j / 23.0);

  const auto lap = laplace1d_interpolant(xs, ys, 1e-3, grid);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    worst = std::max(worst, std::abs(lap[i] - piecewise_linear(grid[i])));

  bool pert_exact = true;
  for (double q : grid)
    pert_exact =
        pert_exact && pert1d_expectation(xs, ys, q) == piecewise_linear(q);
  pert_exact = pert_exact && pert1d_expectation(xs, ys, -1.0) == 0.0 &&
               pert1d_expectation(xs, ys, 2.0) == 1.0;

  log << "laplace sup error " << worst << " (<= 0.01), pert exact "
      << (pert_exact ? "yes" : "no");
  return worst <= 0.01 && pert_exact;
}

// --- 13. rates CSV is byte-identical across thread counts -------------------
bool criterion_13(std::ostream& log) {
  if (g_cli_path.empty()) {
    log << "no --cli path given";
    return false;
  }
  auto run = [&](int threads, const std::string& out) {
    std::ostringstream cmd;
    cmd << '"' << g_cli_path << '"'
        << " rates --problem sine --dim 2 --scheme winn --n-list 128,256"
        << " --trials 6 --test-points 48 --seed 777 --threads " << threads
        << " --out " << out << " >/dev/null 2>&1";
    return std::system(cmd.str().c_str());
  };
  const std::string a = "acceptance_rates_t1.csv";
  const std::string b = "acceptance_rates_t8.csv";
  if (run(1, a) != 0 || run(8, b) != 0) {
    log << "cli invocation failed";
    return false;
  }
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  std::stringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  const bool same = fa && fb && sa.str() == sb.str() && !sa.str().empty();
  log << "-threads 1 vs 8: " << (same ? "identical" : "DIFFER") << " ("
      << sa.str().size() << " bytes)";
  std::remove(a.c_str());
  std::remove(b.c_str());
  return same;
}

struct Criterion {
  int id;
  const char* name;
  std::function<bool(std::ostream&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) only = std::atoi(argv[++i]);
    else if (arg == "--threads" && i + 1 < argc) g_threads = std::atoi(argv[++i]);
    else if (arg == "--cli" && i + 1 < argc) g_cli_path = argv[++i];
    else if (arg == "--help") {
      std::printf(
          "acceptance [--only N] [--threads T] [--cli PATH]\n"
          "Runs the acceptance criteria and prints one line per criterion.\n");
      return 0;
    }
  }

  const std::vector<Criterion> criteria = {
      {1, "simplex interpolation equals the affine-fit oracle", criterion_1},
      {2, "estimators interpolate the training data", criterion_2},
      {3, "LP point location matches brute-force Delaunay", criterion_3},
      {4, "epsilon-grid cell diameters bounded by 2 epsilon", criterion_4},
      {5, "1-NN at the Cover-Hart limit, wiNN at Bayes risk", criterion_5},
      {6, "wiNN MSE rate n^(-1/2) on the Lipschitz problem", criterion_6},
      {7, "simplicial MSE within the dimension-damped noise bound", criterion_7},
      {8, "noisy-simplex fractions: 2^-d and below nearest neighbor", criterion_8},
      {9, "adversarial set is 2eps-dense with small mass", criterion_9},
      {10, "fully connected graph interpolant closed form", criterion_10},
      {11, "Hoeffding bound on majority-vote excess risk", criterion_11},
      {12, "Laplace kernel kappa->0 limit and PERT stump", criterion_12},
      {13, "rates CSV byte-identical across thread counts", criterion_13},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    std::ostringstream detail;
    bool ok = false;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail << "exception: " << e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::printf("[%s] criterion %2d: %s -- %s [%.1fs]\n", ok ? "PASS" : "FAIL",
                c.id, c.name, detail.str().c_str(), secs);
    std::fflush(stdout);
    failures += ok ? 0 : 1;
  }
  return failures;
}
