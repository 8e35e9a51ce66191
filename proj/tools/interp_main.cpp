// Experiment CLI: dataset generation, prediction, Monte Carlo risk/MSE
// studies, rate fits, the adversarial-density measurement, and the 1-D
// kernel/stump demos. See README.md for usage examples.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "interp/dataset.hpp"
#include "interp/errors.hpp"
#include "interp/estimators.hpp"
#include "interp/graph_ssl.hpp"
#include "interp/harness.hpp"
#include "interp/synthetic.hpp"

namespace {

using namespace interp;

struct GlobalOpts {
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out;
  std::string svg;
};

struct ProblemOpts {
  std::string kind = "constant";
  std::string domain = "cube";
  int dim = 2;
  double p = 0.2;
  double margin = 0.1;
  double amp = 0.3;
  double freq = 1.0;
  bool noiseless = false;

  SyntheticProblem build() const {
    Domain dom = Domain::UnitCube;
    if (domain == "ball") dom = Domain::UnitBall;
    else if (domain == "simplex") dom = Domain::Simplex;
    else if (domain != "cube")
      throw std::invalid_argument("--domain expects cube|ball|simplex");

    SyntheticProblem pr;
    if (kind == "constant") pr = SyntheticProblem::constant(dim, p, dom);
    else if (kind == "linear") pr = SyntheticProblem::linear_boundary(dim, margin);
    else if (kind == "sine") pr = SyntheticProblem::lipschitz_sine(dim, amp, freq, dom);
    else throw std::invalid_argument("--problem expects constant|linear|sine");
    pr.binary = !noiseless;
    return pr;
  }
};

void add_problem_options(CLI::App* cmd, ProblemOpts& o) {
  cmd->add_option("--problem", o.kind, "constant|linear|sine");
  cmd->add_option("--domain", o.domain, "cube|ball|simplex");
  cmd->add_option("--dim", o.dim, "ambient dimension d");
  cmd->add_option("--p", o.p, "constant eta level");
  cmd->add_option("--margin", o.margin, "hard margin h for linear");
  cmd->add_option("--amp", o.amp, "sine amplitude");
  cmd->add_option("--freq", o.freq, "sine frequency");
  cmd->add_flag("--noiseless", o.noiseless, "labels carry eta(x) exactly");
}

struct EstimatorOpts {
  std::string scheme = "winn";
  int k = 0;
  double delta = 0.0;
  std::string phi = "power";
  double outside = 0.5;

  EstimatorConfig build() const {
    if (phi != "neglog" && phi != "power")
      throw std::invalid_argument("--phi expects power|neglog");
    const WeightFunction w = phi == "neglog" ? WeightFunction::neg_log()
                                             : WeightFunction::power_law(delta);
    EstimatorConfig cfg;
    if (scheme == "simplicial") cfg = EstimatorConfig::simplicial(outside);
    else if (scheme == "winn") cfg = EstimatorConfig::winn(k, w);
    else if (scheme == "hilbert") cfg = EstimatorConfig::hilbert();
    else if (scheme == "knn") cfg = EstimatorConfig::unweighted_knn(std::max(k, 1));
    else throw std::invalid_argument("--scheme expects simplicial|winn|hilbert|knn");
    return cfg;
  }
};

void add_estimator_options(CLI::App* cmd, EstimatorOpts& o) {
  cmd->add_option("--scheme", o.scheme, "simplicial|winn|hilbert|knn");
  cmd->add_option("--k", o.k, "neighbor count (0 = rate-optimal schedule)");
  cmd->add_option("--delta", o.delta, "power-law exponent (0 = d/4)");
  cmd->add_option("--phi", o.phi, "power|neglog");
  cmd->add_option("--outside-value", o.outside, "simplicial value outside hull");
}

// Writes `text` to --out, or stdout when no path was given.
void emit(const GlobalOpts& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open output file " + g.out);
  f << text;
}

// Status lines go to stderr when the CSV occupies stdout.
std::ostream& status(const GlobalOpts& g) {
  return g.out.empty() ? std::cerr : std::cout;
}

LabeledDataset load_dataset(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open dataset file " + path);
  return read_dataset_csv(f);
}

ExperimentSpec make_spec(const GlobalOpts& g, const ProblemOpts& po,
                         const EstimatorOpts& eo, std::vector<long> n_list,
                         int trials, int test_points) {
  ExperimentSpec spec;
  spec.problem = po.build();
  spec.estimator = eo.build();
  spec.n_list = std::move(n_list);
  spec.trials = trials;
  spec.test_points = test_points;
  spec.master_seed = g.seed;
  spec.threads = g.threads;
  return spec;
}

void maybe_svg(const GlobalOpts& g, const ExperimentResult& result,
               const std::string& title) {
  if (!g.svg.empty()) write_svg_plot(g.svg, result, title);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"interpolating predictors: estimators and experiment harness"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOpts global;
  app.add_option("--seed", global.seed, "master seed");
  app.add_option("--threads", global.threads, "worker threads (0 = hardware)");
  app.add_option("--out", global.out, "output file (default stdout)");
  app.add_option("--svg", global.svg, "write a line plot of the result CSV");
  app.set_config("--config", "", "key=value config file; flags override");

  // ---- gen ----------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "sample a dataset and emit CSV");
  ProblemOpts gen_problem;
  long gen_n = 1000;
  add_problem_options(gen, gen_problem);
  gen->add_option("--n", gen_n, "sample size");

  // ---- predict ------------------------------------------------------------
  auto* predict = app.add_subcommand("predict", "fit on a dataset, predict queries");
  EstimatorOpts predict_est;
  std::string predict_data, predict_queries;
  add_estimator_options(predict, predict_est);
  predict->add_option("--data", predict_data, "training dataset CSV")->required();
  predict->add_option("--queries", predict_queries, "query points CSV")->required();

  // ---- mse / risk / rates ---------------------------------------------------
  ProblemOpts mc_problem;
  EstimatorOpts mc_est;
  std::vector<long> mc_n_list = {1000};
  int mc_trials = 20, mc_test_points = 200;
  std::string rates_metric = "mse";

  auto add_mc_options = [&](CLI::App* cmd) {
    add_problem_options(cmd, mc_problem);
    add_estimator_options(cmd, mc_est);
    cmd->add_option("--n-list", mc_n_list, "sample sizes")->delimiter(',');
    cmd->add_option("--trials", mc_trials, "trials per n");
    cmd->add_option("--test-points", mc_test_points, "test points per trial");
  };
  auto* mse = app.add_subcommand("mse", "Monte Carlo regression MSE");
  add_mc_options(mse);
  auto* risk = app.add_subcommand("risk", "Monte Carlo classification risk");
  add_mc_options(risk);
  risk->add_option("--metric", rates_metric, "risk|disagreement");
  auto* rates = app.add_subcommand("rates", "MSE/risk over n_list plus log-log slope");
  add_mc_options(rates);
  rates->add_option("--metric", rates_metric, "mse|risk|disagreement");

  // ---- adversarial ----------------------------------------------------------
  auto* adv = app.add_subcommand("adversarial", "grid density of the adversarial set");
  ProblemOpts adv_problem;
  adv_problem.p = 0.9;
  EstimatorOpts adv_est;
  adv_est.delta = 0.5;
  long adv_n = 5000;
  double adv_eps = 0.05;
  int adv_grid = 50, adv_seeds = 20;
  add_problem_options(adv, adv_problem);
  add_estimator_options(adv, adv_est);
  adv->add_option("--n", adv_n, "training sample size");
  adv->add_option("--epsilon", adv_eps, "cover radius parameter");
  adv->add_option("--grid", adv_grid, "grid resolution per axis");
  adv->add_option("--seeds", adv_seeds, "number of independent seeds");

  // ---- simplex-demo ---------------------------------------------------------
  auto* demo = app.add_subcommand("simplex-demo", "noisy-simplex volume fractions");
  int demo_dim = 2;
  long demo_samples = 1000000;
  demo->add_option("--dim", demo_dim, "simplex dimension");
  demo->add_option("--samples", demo_samples, "Monte Carlo samples");

  // ---- hull-miss ------------------------------------------------------------
  auto* hull = app.add_subcommand("hull-miss", "mass outside the sample hull");
  ProblemOpts hull_problem;
  std::vector<long> hull_n_list = {250, 1000, 4000};
  int hull_trials = 20, hull_probes = 256;
  add_problem_options(hull, hull_problem);
  hull->add_option("--n-list", hull_n_list, "sample sizes")->delimiter(',');
  hull->add_option("--trials", hull_trials, "trials per n");
  hull->add_option("--probes", hull_probes, "fresh probes per trial");

  // ---- ssl -------------------------------------------------------------------
  auto* ssl = app.add_subcommand("ssl", "graph-Laplacian interpolation");
  std::string ssl_edges, ssl_labels;
  double ssl_kappa = 0.0;
  ssl->add_option("--edges", ssl_edges, "edge list file: i j w")->required();
  ssl->add_option("--labels", ssl_labels, "labels file: i y")->required();
  ssl->add_option("--kappa", ssl_kappa, "interpolation parameter");

  // ---- laplace1d --------------------------------------------------------------
  auto* laplace = app.add_subcommand("laplace1d", "1-d Laplace-kernel interpolant");
  std::string laplace_data;
  double laplace_kappa = 1e-3;
  int laplace_grid = 200;
  laplace->add_option("--data", laplace_data, "dataset CSV (d=1)")->required();
  laplace->add_option("--kappa", laplace_kappa, "kernel width parameter");
  laplace->add_option("--grid-points", laplace_grid, "evaluation grid size");

  // ---- pert1d ------------------------------------------------------------------
  auto* pert = app.add_subcommand("pert1d", "random-threshold stump expectation");
  std::string pert_data;
  int pert_grid = 200;
  pert->add_option("--data", pert_data, "dataset CSV (d=1, {0,1} labels)")->required();
  pert->add_option("--grid-points", pert_grid, "evaluation grid size");

  try {
    app.parse(argc, argv);

    if (*gen) {
      const auto ds = sample_dataset(gen_problem.build(), gen_n, global.seed);
      std::ostringstream os;
      write_dataset_csv(os, ds);
      emit(global, os.str());
    } else if (*predict) {
      const auto ds = load_dataset(predict_data);
      std::ifstream qf(predict_queries);
      if (!qf) throw std::invalid_argument("cannot open " + predict_queries);
      int qdim = 0;
      const auto queries = read_points_csv(qf, qdim);
      if (qdim != ds.dim)
        throw std::invalid_argument("query dimension differs from dataset");
      const auto fitted = fit_estimator(predict_est.build(), ds);
      std::ostringstream os;
      for (int j = 0; j < qdim; ++j) os << 'x' << j << ',';
      os << "eta_hat\n";
      const int nq = static_cast<int>(queries.size()) / qdim;
      for (int i = 0; i < nq; ++i) {
        std::span<const double> q{queries.data() + static_cast<std::size_t>(i) * qdim,
                                  static_cast<std::size_t>(qdim)};
        for (int j = 0; j < qdim; ++j) os << format_double(q[j]) << ',';
        os << format_double(fitted.predict(q)) << '\n';
      }
      emit(global, os.str());
    } else if (*mse) {
      const auto spec = make_spec(global, mc_problem, mc_est, mc_n_list,
                                  mc_trials, mc_test_points);
      const auto result = mc_mse(spec);
      emit(global, experiment_csv(result));
      maybe_svg(global, result, "mse");
    } else if (*risk) {
      const auto spec = make_spec(global, mc_problem, mc_est, mc_n_list,
                                  mc_trials, mc_test_points);
      const auto both = mc_disagreement(spec);
      const auto& series =
          rates_metric == "disagreement" ? both.disagreement : both.risk;
      emit(global, experiment_csv(series));
      maybe_svg(global, series, rates_metric);
    } else if (*rates) {
      const auto spec = make_spec(global, mc_problem, mc_est, mc_n_list,
                                  mc_trials, mc_test_points);
      ExperimentResult series;
      if (rates_metric == "mse") {
        series = mc_mse(spec);
      } else if (rates_metric == "disagreement" || rates_metric == "risk") {
        const auto both = mc_disagreement(spec);
        series = rates_metric == "disagreement" ? both.disagreement : both.risk;
      } else {
        throw std::invalid_argument("--metric expects mse|risk|disagreement");
      }
      emit(global, experiment_csv(series));
      const auto fit = fit_rate(series);
      status(global) << "fitted slope " << fit.slope << " (intercept "
                     << fit.intercept << ", r2 " << fit.r_squared << ")\n";
      maybe_svg(global, series, "rates: " + rates_metric);
    } else if (*adv) {
      const auto problem = adv_problem.build();
      const auto cfg = adv_est.build();
      std::ostringstream os;
      os << "seed,covered_fraction,adversarial_mass\n";
      double covered = 0.0, mass = 0.0;
      for (int s = 0; s < adv_seeds; ++s) {
        Rng stream(global.seed, 1, static_cast<std::uint64_t>(s));
        const auto out = adversarial_density(problem, cfg, adv_n, adv_eps,
                                             adv_grid, stream.next_u64());
        os << s << ',' << format_double(out.covered_fraction) << ','
           << format_double(out.adversarial_mass) << '\n';
        covered += out.covered_fraction;
        mass += out.adversarial_mass;
      }
      emit(global, os.str());
      status(global) << "mean covered_fraction " << covered / adv_seeds
                     << ", mean adversarial_mass " << mass / adv_seeds << '\n';
    } else if (*demo) {
      const auto out = simplex_noise_demo(demo_dim, demo_samples, global.seed);
      std::ostringstream os;
      os << "dim,simplicial_fraction,nn_fraction\n"
         << demo_dim << ',' << format_double(out.simplicial_fraction) << ','
         << format_double(out.nn_fraction) << '\n';
      emit(global, os.str());
    } else if (*hull) {
      const auto problem = hull_problem.build();
      std::ostringstream os;
      os << "n,estimate\n";
      for (long n : hull_n_list)
        os << n << ','
           << format_double(hull_miss_mass(problem, n, hull_trials, global.seed,
                                           hull_probes))
           << '\n';
      emit(global, os.str());
    } else if (*ssl) {
      const auto graph = read_graph_files(ssl_edges, ssl_labels, ssl_kappa);
      const auto eta = solve_graph_interpolant(graph);
      std::ostringstream os;
      write_interpolant_csv(os, eta);
      emit(global, os.str());
    } else if (*laplace) {
      const auto ds = load_dataset(laplace_data);
      if (ds.dim != 1) throw std::invalid_argument("laplace1d needs d=1 data");
      const auto& xs = ds.points;
      double lo = xs[0], hi = xs[0];
      for (double v : xs) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      std::vector<double> grid(laplace_grid);
      for (int i = 0; i < laplace_grid; ++i)
        grid[i] = lo + (hi - lo) * i / std::max(1, laplace_grid - 1);
      const auto values = laplace1d_interpolant(xs, ds.labels, laplace_kappa, grid);
      std::ostringstream os;
      os << "x,value\n";
      for (int i = 0; i < laplace_grid; ++i)
        os << format_double(grid[i]) << ',' << format_double(values[i]) << '\n';
      emit(global, os.str());
    } else if (*pert) {
      const auto ds = load_dataset(pert_data);
      if (ds.dim != 1) throw std::invalid_argument("pert1d needs d=1 data");
      double lo = ds.points[0], hi = ds.points[0];
      for (double v : ds.points) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      std::ostringstream os;
      os << "x,value\n";
      for (int i = 0; i < pert_grid; ++i) {
        const double x = lo + (hi - lo) * i / std::max(1, pert_grid - 1);
        os << format_double(x) << ','
           << format_double(pert1d_expectation(ds.points, ds.labels, x)) << '\n';
      }
      emit(global, os.str());
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return 2;
  } catch (const interp::Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
