#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "interp/dataset.hpp"
#include "interp/errors.hpp"
#include "interp/estimators.hpp"
#include "interp/synthetic.hpp"

namespace interp {

/// A Monte Carlo experiment: for each n in n_list, `trials` independent
/// trials, each drawing a fresh dataset and fresh test points. Trial (n, t)
/// uses the RNG stream keyed by (master_seed, n index, t), so results are
/// bit-identical for any thread count.
struct ExperimentSpec {
  SyntheticProblem problem;
  EstimatorConfig estimator;
  std::vector<long> n_list;
  int trials = 20;
  int test_points = 200;
  std::uint64_t master_seed = 0;
  int threads = 0;  // 0 = hardware concurrency

  void validate() const;
};

struct ExperimentRow {
  long n = 0;
  double mean = 0.0;
  double stderr_ = 0.0;  // std dev of per-trial means / sqrt(trials)
  int trials = 0;
  double elapsed_seconds = 0.0;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
};

using Predictor = std::function<double(std::span<const double>)>;
using PredictorFactory = std::function<Predictor(const LabeledDataset&)>;

/// Factory producing the spec'd estimator fitted on each trial dataset.
PredictorFactory make_predictor_factory(const ExperimentSpec& spec);

/// Mean squared error E[(eta_hat(X) - eta(X))^2].
ExperimentResult mc_mse(const ExperimentSpec& spec);
ExperimentResult mc_mse(const ExperimentSpec& spec,
                        const PredictorFactory& factory);

/// Disagreement P(f_hat != f*) and empirical risk R(f_hat) against freshly
/// drawn labels, estimated together.
struct ClassificationResult {
  ExperimentResult disagreement;
  ExperimentResult risk;
};
ClassificationResult mc_disagreement(const ExperimentSpec& spec);
ClassificationResult mc_disagreement(const ExperimentSpec& spec,
                                     const PredictorFactory& factory);

/// Ordinary least squares on (ln n, ln error).
/// Throws NonPositiveValue unless all inputs are positive.
struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
RateFit fit_rate(const std::vector<std::pair<double, double>>& points);
RateFit fit_rate(const ExperimentResult& result);

/// Grid measurement of the adversarial set A_n = {x : f_hat(x) != f*(x)}.
/// adversarial_mass is the fraction of grid points in A_n. The 2-epsilon
/// cover is measured against the witness set of the density theorem: grid
/// points in A_n plus training points interpolated to the wrong class.
struct AdversarialDensity {
  double covered_fraction = 0.0;
  double adversarial_mass = 0.0;
};
AdversarialDensity adversarial_density(const SyntheticProblem& problem,
                                       const EstimatorConfig& estimator,
                                       long n, double epsilon,
                                       int grid_resolution, std::uint64_t seed);

/// Volume fractions on the regular d-simplex with labels (0,...,0,1):
/// where simplicial interpolation exceeds 1/2, and where the 1-labeled
/// vertex is the nearest one.
struct SimplexNoiseDemo {
  double simplicial_fraction = 0.0;
  double nn_fraction = 0.0;
};
SimplexNoiseDemo simplex_noise_demo(int dim, long samples, std::uint64_t seed);

/// Monte Carlo estimate of the probability that a fresh uniform point
/// falls outside the convex hull of n samples.
double hull_miss_mass(const SyntheticProblem& problem, long n, int trials,
                      std::uint64_t seed, int probes_per_trial = 256);

/// Minimum-norm Laplace-kernel interpolant in one dimension: solves
/// K alpha = y with K_ij = exp(-kappa |x_i - x_j|) and evaluates
/// sum_i alpha_i exp(-kappa |x_i - q|) on the grid.
/// Throws SingularKernelMatrix on duplicate abscissae.
std::vector<double> laplace1d_interpolant(const std::vector<double>& xs,
                                          const std::vector<double>& ys,
                                          double kappa,
                                          const std::vector<double>& grid);

/// Expectation of a uniformly random decision stump consistent with
/// threshold data: the piecewise-linear interpolant of the (x, y) pairs,
/// clamped to the outer labels beyond the data range.
/// Throws NonMonotoneLabels unless the {0,1} labels are monotone in x.
double pert1d_expectation(const std::vector<double>& xs,
                          const std::vector<double>& ys, double query);

/// CSV with header n,mean,stderr,trials (elapsed time intentionally
/// excluded so identical specs give byte-identical files).
std::string experiment_csv(const ExperimentResult& result);

/// Minimal static SVG line plot (log-log) of a result CSV's (n, mean).
void write_svg_plot(const std::string& path, const ExperimentResult& result,
                    const std::string& title);

/// Deterministic parallel map: fn(i) for i in [0, count) on a worker pool.
/// Exceptions are collected and the lowest-index one is rethrown.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

}  // namespace interp
