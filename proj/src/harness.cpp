#include "interp/harness.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "interp/geometry.hpp"

namespace interp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

ExperimentRow summarize(long n, const std::vector<double>& trial_values,
                        double elapsed) {
  ExperimentRow row;
  row.n = n;
  row.trials = static_cast<int>(trial_values.size());
  row.elapsed_seconds = elapsed;
  double mean = 0.0;
  for (double v : trial_values) mean += v;
  mean /= row.trials;
  row.mean = mean;
  if (row.trials > 1) {
    double ss = 0.0;
    for (double v : trial_values) ss += (v - mean) * (v - mean);
    row.stderr_ = std::sqrt(ss / (row.trials - 1)) /
                  std::sqrt(static_cast<double>(row.trials));
  }
  return row;
}

}  // namespace

void ExperimentSpec::validate() const {
  problem.validate();
  if (n_list.empty()) throw std::invalid_argument("spec: n_list is empty");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 1) throw std::invalid_argument("spec: n >= 1 required");
    if (i > 0 && n_list[i] <= n_list[i - 1])
      throw std::invalid_argument("spec: n_list must be strictly increasing");
  }
  if (trials < 1) throw std::invalid_argument("spec: trials >= 1 required");
  if (test_points < 1)
    throw std::invalid_argument("spec: test_points >= 1 required");
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  if (threads <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    threads = hw > 0 ? static_cast<int>(hw) : 1;
  }
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (int i = 0; i < count; ++i)
    if (errors[i]) std::rethrow_exception(errors[i]);
}

PredictorFactory make_predictor_factory(const ExperimentSpec& spec) {
  const EstimatorConfig base = spec.estimator;
  const double alpha = spec.problem.smoothness_alpha();
  return [base, alpha](const LabeledDataset& ds) -> Predictor {
    EstimatorConfig cfg = base;
    cfg.smoothness_alpha = alpha;
    auto fitted = std::make_shared<FittedEstimator>(cfg, ds);
    return [fitted](std::span<const double> q) { return fitted->predict(q); };
  };
}

ExperimentResult mc_mse(const ExperimentSpec& spec,
                        const PredictorFactory& factory) {
  spec.validate();
  ExperimentResult out;
  for (std::size_t ni = 0; ni < spec.n_list.size(); ++ni) {
    const long n = spec.n_list[ni];
    std::vector<double> stat(spec.trials);
    const auto t0 = Clock::now();
    parallel_for(spec.trials, spec.threads, [&](int t) {
      Rng rng(spec.master_seed, ni, static_cast<std::uint64_t>(t));
      const auto ds = sample_dataset_rng(spec.problem, n, rng);
      const auto predict = factory(ds);
      std::vector<double> x(spec.problem.dim);
      double acc = 0.0;
      for (int j = 0; j < spec.test_points; ++j) {
        sample_point(spec.problem, rng, x.data());
        const double diff = predict(x) - eta_eval(spec.problem, x);
        acc += diff * diff;
      }
      stat[t] = acc / spec.test_points;
    });
    out.rows.push_back(summarize(n, stat, seconds_since(t0)));
  }
  return out;
}

ExperimentResult mc_mse(const ExperimentSpec& spec) {
  return mc_mse(spec, make_predictor_factory(spec));
}

ClassificationResult mc_disagreement(const ExperimentSpec& spec,
                                     const PredictorFactory& factory) {
  spec.validate();
  if (!spec.problem.binary)
    throw std::invalid_argument("mc_disagreement: binary problems only");
  ClassificationResult out;
  for (std::size_t ni = 0; ni < spec.n_list.size(); ++ni) {
    const long n = spec.n_list[ni];
    std::vector<double> disagree(spec.trials), risk(spec.trials);
    const auto t0 = Clock::now();
    parallel_for(spec.trials, spec.threads, [&](int t) {
      Rng rng(spec.master_seed, ni, static_cast<std::uint64_t>(t));
      const auto ds = sample_dataset_rng(spec.problem, n, rng);
      const auto predict = factory(ds);
      std::vector<double> x(spec.problem.dim);
      int n_disagree = 0, n_wrong = 0;
      for (int j = 0; j < spec.test_points; ++j) {
        sample_point(spec.problem, rng, x.data());
        const double eta = eta_eval(spec.problem, x);
        const int f_star = plugin_classify(eta);
        const int y = rng.bernoulli(eta) ? 1 : 0;
        const int f_hat = plugin_classify(predict(x));
        n_disagree += (f_hat != f_star);
        n_wrong += (f_hat != y);
      }
      disagree[t] = static_cast<double>(n_disagree) / spec.test_points;
      risk[t] = static_cast<double>(n_wrong) / spec.test_points;
    });
    const double elapsed = seconds_since(t0);
    out.disagreement.rows.push_back(summarize(n, disagree, elapsed));
    out.risk.rows.push_back(summarize(n, risk, elapsed));
  }
  return out;
}

ClassificationResult mc_disagreement(const ExperimentSpec& spec) {
  return mc_disagreement(spec, make_predictor_factory(spec));
}

RateFit fit_rate(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2)
    throw std::invalid_argument("fit_rate: needs at least two points");
  double sx = 0.0, sy = 0.0;
  for (const auto& [n, err] : points) {
    if (!(n > 0.0) || !(err > 0.0))
      throw NonPositiveValue("fit_rate: points must be positive");
    sx += std::log(n);
    sy += std::log(err);
  }
  const double mx = sx / points.size(), my = sy / points.size();
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [n, err] : points) {
    const double dx = std::log(n) - mx, dy = std::log(err) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_rate: degenerate abscissae");
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  const double ss_res = syy - fit.slope * sxy;
  fit.r_squared = syy > 0.0 ? 1.0 - std::max(0.0, ss_res) / syy : 1.0;
  return fit;
}

RateFit fit_rate(const ExperimentResult& result) {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(result.rows.size());
  for (const auto& row : result.rows)
    pts.emplace_back(static_cast<double>(row.n), row.mean);
  return fit_rate(pts);
}

AdversarialDensity adversarial_density(const SyntheticProblem& problem,
                                       const EstimatorConfig& estimator,
                                       long n, double epsilon,
                                       int grid_resolution,
                                       std::uint64_t seed) {
  if (!problem.binary)
    throw std::invalid_argument("adversarial_density: binary problems only");
  if (grid_resolution < 1 || epsilon <= 0.0)
    throw std::invalid_argument("adversarial_density: bad grid/epsilon");
  const int d = problem.dim;
  double cells = 1.0;
  for (int j = 0; j < d; ++j) cells *= grid_resolution;
  if (cells > 1e7)
    throw std::invalid_argument("adversarial_density: grid too large");

  Rng rng(seed);
  const auto ds = sample_dataset_rng(problem, n, rng);
  EstimatorConfig cfg = estimator;
  cfg.smoothness_alpha = problem.smoothness_alpha();
  const FittedEstimator fitted(cfg, ds);

  const double lo = (problem.domain == Domain::UnitBall) ? -1.0 : 0.0;
  const double step = (1.0 - lo) / grid_resolution;

  // Cell-center grid restricted to the domain.
  std::vector<double> grid;
  std::vector<double> x(d);
  std::vector<int> idx(d, 0);
  for (;;) {
    for (int j = 0; j < d; ++j) x[j] = lo + (idx[j] + 0.5) * step;
    if (problem.in_domain(x)) grid.insert(grid.end(), x.begin(), x.end());
    int j = d - 1;
    while (j >= 0 && ++idx[j] == grid_resolution) idx[j--] = 0;
    if (j < 0) break;
  }
  const int g = static_cast<int>(grid.size()) / d;

  std::vector<double> witnesses;  // adversarial grid points + training points
  int mass_count = 0;
  for (int i = 0; i < g; ++i) {
    std::span<const double> q{grid.data() + static_cast<std::size_t>(i) * d,
                              static_cast<std::size_t>(d)};
    const int f_star = plugin_classify(eta_eval(problem, q));
    if (fitted.classify(q) != f_star) {
      ++mass_count;
      witnesses.insert(witnesses.end(), q.begin(), q.end());
    }
  }
  // Interpolation plants an adversarial point at every training example
  // whose label disagrees with the Bayes class; these witness points carry
  // the 2-epsilon cover of the density theorem.
  for (int i = 0; i < ds.size(); ++i) {
    const auto xi = ds.point(i);
    const int f_star = plugin_classify(eta_eval(problem, xi));
    if (fitted.classify(xi) != f_star)
      witnesses.insert(witnesses.end(), xi.begin(), xi.end());
  }

  const int w = static_cast<int>(witnesses.size()) / d;
  int covered = 0;
  const double limit = 4.0 * epsilon * epsilon;  // (2 eps)^2
  for (int i = 0; i < g; ++i) {
    std::span<const double> q{grid.data() + static_cast<std::size_t>(i) * d,
                              static_cast<std::size_t>(d)};
    for (int t = 0; t < w; ++t) {
      std::span<const double> a{
          witnesses.data() + static_cast<std::size_t>(t) * d,
          static_cast<std::size_t>(d)};
      if (squared_distance(q, a) <= limit) {
        ++covered;
        break;
      }
    }
  }

  AdversarialDensity out;
  out.adversarial_mass = static_cast<double>(mass_count) / g;
  out.covered_fraction = static_cast<double>(covered) / g;
  return out;
}

SimplexNoiseDemo simplex_noise_demo(int dim, long samples,
                                    std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("simplex_demo: dim >= 1 required");
  if (samples < 1) throw std::invalid_argument("simplex_demo: samples >= 1");

  // Regular d-simplex: e_1..e_d plus beta * (1,...,1), all edges sqrt(2).
  const int k = dim + 1;
  std::vector<double> vertices(static_cast<std::size_t>(k) * dim, 0.0);
  for (int i = 0; i < dim; ++i)
    vertices[static_cast<std::size_t>(i) * dim + i] = 1.0;
  const double beta = (1.0 + std::sqrt(dim + 1.0)) / dim;
  for (int j = 0; j < dim; ++j)
    vertices[static_cast<std::size_t>(dim) * dim + j] = beta;

  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  const SimplexCell cell = make_simplex_cell(vertices.data(), dim, idx);
  std::vector<double> labels(k, 0.0);
  labels[k - 1] = 1.0;

  Rng rng(seed);
  std::vector<double> w(k), x(dim);
  long simplicial = 0, nn = 0;
  for (long s = 0; s < samples; ++s) {
    // Dirichlet(1,...,1) via normalized exponentials: uniform on the simplex.
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
      w[i] = -std::log(1.0 - rng.uniform());
      total += w[i];
    }
    std::fill(x.begin(), x.end(), 0.0);
    for (int i = 0; i < k; ++i) {
      w[i] /= total;
      for (int j = 0; j < dim; ++j)
        x[j] += w[i] * vertices[static_cast<std::size_t>(i) * dim + j];
    }
    if (interpolate_simplex(cell, labels, x) > 0.5) ++simplicial;

    int best = 0;
    double best_d2 = squared_distance(x, cell.vertex(0));
    for (int i = 1; i < k; ++i) {
      const double d2 = squared_distance(x, cell.vertex(i));
      if (d2 < best_d2) {
        best_d2 = d2;
        best = i;
      }
    }
    nn += (best == k - 1);
  }
  SimplexNoiseDemo out;
  out.simplicial_fraction = static_cast<double>(simplicial) / samples;
  out.nn_fraction = static_cast<double>(nn) / samples;
  return out;
}

double hull_miss_mass(const SyntheticProblem& problem, long n, int trials,
                      std::uint64_t seed, int probes_per_trial) {
  if (trials < 1 || probes_per_trial < 1)
    throw std::invalid_argument("hull_miss_mass: trials and probes >= 1");
  double total = 0.0;
  for (int t = 0; t < trials; ++t) {
    Rng rng(seed, 0, static_cast<std::uint64_t>(t));
    const auto ds = sample_dataset_rng(problem, n, rng);
    const HullMembership hull(ds.points.data(), ds.size(), ds.dim);
    std::vector<double> x(problem.dim);
    int misses = 0;
    for (int j = 0; j < probes_per_trial; ++j) {
      sample_point(problem, rng, x.data());
      misses += hull.contains(x) ? 0 : 1;
    }
    total += static_cast<double>(misses) / probes_per_trial;
  }
  return total / trials;
}

std::vector<double> laplace1d_interpolant(const std::vector<double>& xs,
                                          const std::vector<double>& ys,
                                          double kappa,
                                          const std::vector<double>& grid) {
  const int n = static_cast<int>(xs.size());
  if (n < 1 || ys.size() != xs.size())
    throw std::invalid_argument("laplace1d: xs/ys size mismatch");
  if (!(kappa > 0.0)) throw std::invalid_argument("laplace1d: kappa > 0");
  {
    std::vector<double> sorted(xs);
    std::sort(sorted.begin(), sorted.end());
    for (int i = 1; i < n; ++i)
      if (sorted[i] == sorted[i - 1])
        throw SingularKernelMatrix("laplace1d: duplicate data points");
  }

  Eigen::MatrixXd K(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      K(i, j) = std::exp(-kappa * std::abs(xs[i] - xs[j]));
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) y[i] = ys[i];
  const Eigen::VectorXd alpha = Eigen::PartialPivLU<Eigen::MatrixXd>(K).solve(y);
  if (!alpha.allFinite() || (K * alpha - y).cwiseAbs().maxCoeff() > 1e-6)
    throw SingularKernelMatrix("laplace1d: kernel system not solvable");

  std::vector<double> out(grid.size());
  for (std::size_t q = 0; q < grid.size(); ++q) {
    double v = 0.0;
    for (int i = 0; i < n; ++i)
      v += alpha[i] * std::exp(-kappa * std::abs(xs[i] - grid[q]));
    out[q] = v;
  }
  return out;
}

double pert1d_expectation(const std::vector<double>& xs,
                          const std::vector<double>& ys, double query) {
  const int n = static_cast<int>(xs.size());
  if (n < 1 || ys.size() != xs.size())
    throw std::invalid_argument("pert1d: xs/ys size mismatch");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return xs[a] < xs[b]; });

  double last0 = 0.0, first1 = 0.0;
  bool seen0 = false, seen1 = false;
  for (int r = 0; r < n; ++r) {
    const double y = ys[order[r]];
    if (y != 0.0 && y != 1.0)
      throw std::invalid_argument("pert1d: labels must be in {0,1}");
    if (y == 0.0) {
      if (seen1) throw NonMonotoneLabels("pert1d: label 0 after label 1");
      last0 = xs[order[r]];
      seen0 = true;
    } else {
      if (!seen1) first1 = xs[order[r]];
      seen1 = true;
    }
  }
  if (!seen1) return 0.0;  // all stumps threshold beyond the data
  if (!seen0) return 1.0;
  if (query <= last0) return 0.0;
  if (query >= first1) return 1.0;
  return (query - last0) / (first1 - last0);
}

std::string experiment_csv(const ExperimentResult& result) {
  std::ostringstream os;
  os << "n,mean,stderr,trials\n";
  for (const auto& row : result.rows)
    os << row.n << ',' << format_double(row.mean) << ','
       << format_double(row.stderr_) << ',' << row.trials << '\n';
  return os.str();
}

void write_svg_plot(const std::string& path, const ExperimentResult& result,
                    const std::string& title) {
  if (result.rows.empty())
    throw std::invalid_argument("svg plot: empty result");
  const double width = 640, height = 440;
  const double ml = 70, mr = 20, mt = 40, mb = 50;

  double x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 0;
  bool first = true;
  for (const auto& row : result.rows) {
    if (row.n <= 0 || row.mean <= 0.0) continue;  // log-log plot
    const double lx = std::log10(static_cast<double>(row.n));
    const double ly = std::log10(row.mean);
    if (first) {
      x_lo = x_hi = lx;
      y_lo = y_hi = ly;
      first = false;
    } else {
      x_lo = std::min(x_lo, lx);
      x_hi = std::max(x_hi, lx);
      y_lo = std::min(y_lo, ly);
      y_hi = std::max(y_hi, ly);
    }
  }
  if (first) throw std::invalid_argument("svg plot: no positive points");
  if (x_hi - x_lo < 1e-9) x_hi = x_lo + 1.0;
  if (y_hi - y_lo < 1e-9) y_hi = y_lo + 1.0;

  auto px = [&](double lx) {
    return ml + (lx - x_lo) / (x_hi - x_lo) * (width - ml - mr);
  };
  auto py = [&](double ly) {
    return height - mb - (ly - y_lo) / (y_hi - y_lo) * (height - mt - mb);
  };

  std::ofstream out(path);
  if (!out) throw std::invalid_argument("svg plot: cannot open " + path);
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width
      << "' height='" << height << "'>\n"
      << "<rect width='100%' height='100%' fill='white'/>\n"
      << "<text x='" << width / 2 << "' y='24' text-anchor='middle' "
      << "font-family='sans-serif' font-size='15'>" << title << "</text>\n"
      << "<line x1='" << ml << "' y1='" << height - mb << "' x2='"
      << width - mr << "' y2='" << height - mb << "' stroke='black'/>\n"
      << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='"
      << height - mb << "' stroke='black'/>\n";

  out << "<polyline fill='none' stroke='steelblue' stroke-width='1.5' points='";
  for (const auto& row : result.rows) {
    if (row.n <= 0 || row.mean <= 0.0) continue;
    out << px(std::log10(static_cast<double>(row.n))) << ','
        << py(std::log10(row.mean)) << ' ';
  }
  out << "'/>\n";
  for (const auto& row : result.rows) {
    if (row.n <= 0 || row.mean <= 0.0) continue;
    out << "<circle cx='" << px(std::log10(static_cast<double>(row.n)))
        << "' cy='" << py(std::log10(row.mean))
        << "' r='3' fill='steelblue'/>\n";
  }
  for (const auto& row : result.rows) {
    if (row.n <= 0 || row.mean <= 0.0) continue;
    out << "<text x='" << px(std::log10(static_cast<double>(row.n))) << "' y='"
        << height - mb + 16
        << "' text-anchor='middle' font-family='sans-serif' font-size='10'>"
        << row.n << "</text>\n";
  }
  out << "<text x='" << ml - 8 << "' y='" << py(y_hi)
      << "' text-anchor='end' font-family='sans-serif' font-size='10'>"
      << format_double(std::pow(10.0, y_hi)) << "</text>\n"
      << "<text x='" << ml - 8 << "' y='" << py(y_lo)
      << "' text-anchor='end' font-family='sans-serif' font-size='10'>"
      << format_double(std::pow(10.0, y_lo)) << "</text>\n"
      << "</svg>\n";
}

}  // namespace interp
