#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "interp/dataset.hpp"
#include "interp/errors.hpp"
#include "interp/rng.hpp"

namespace interp {

enum class Domain { UnitCube, UnitBall, Simplex };

/// A synthetic distribution with uniform marginal on the domain and an
/// analytically known regression function eta. Binary problems draw
/// Y ~ Bernoulli(eta(X)); otherwise Y = eta(X) (noiseless regression).
///
/// Eta kinds:
///   Constant(p):            eta = p everywhere.
///   LinearBoundary(h):      eta = 1/2 + h for x1 >= 1/2, 1/2 - h below;
///                           realizes the h-hard-margin condition.
///   LipschitzSine(a, w):    eta = 1/2 + a sin(2 pi w x1); Lipschitz with
///                           constant A = 2 pi w a (alpha = 1).
struct SyntheticProblem {
  enum class Eta { Constant, LinearBoundary, LipschitzSine };

  Domain domain = Domain::UnitCube;
  int dim = 1;
  Eta eta_kind = Eta::Constant;
  double p = 0.5;      // Constant
  double h = 0.1;      // LinearBoundary
  double amp = 0.25;   // LipschitzSine
  double freq = 1.0;   // LipschitzSine
  bool binary = true;

  // Smoothness/margin/regularity metadata (documentation only, no runtime
  // checks).
  double smoothness_A() const;
  double smoothness_alpha() const { return 1.0; }
  double hard_margin() const;
  double regularity_c0() const;
  double regularity_r0() const;

  static SyntheticProblem constant(int dim, double p,
                                   Domain domain = Domain::UnitCube);
  static SyntheticProblem linear_boundary(int dim, double h);
  static SyntheticProblem lipschitz_sine(int dim, double amp, double freq,
                                         Domain domain = Domain::UnitCube);

  void validate() const;
  bool in_domain(std::span<const double> x) const;
  std::string describe() const;
};

struct BayesQuantities {
  double bayes_risk = 0.0;     // E[min(eta, 1-eta)]
  double nn_limit_risk = 0.0;  // E[2 eta (1-eta)], the 1-NN asymptotic risk
  double noise_mse = 0.0;      // E[eta (1-eta)] = E[(Y - eta(X))^2]
};

/// eta(x); throws OutsideDomain when x is not in the problem's domain.
double eta_eval(const SyntheticProblem& problem, std::span<const double> x);

/// Draws one point uniformly from the domain (rejection sampling for ball
/// and simplex domains).
void sample_point(const SyntheticProblem& problem, Rng& rng, double* out);

/// n iid examples. Identical (problem, n, seed) gives a bit-identical
/// dataset; the harness derives per-trial seeds so parallel and serial
/// runs coincide.
LabeledDataset sample_dataset(const SyntheticProblem& problem, long n,
                              std::uint64_t seed);
LabeledDataset sample_dataset_rng(const SyntheticProblem& problem, long n,
                                  Rng& rng);

/// Closed form for Constant and LinearBoundary; adaptive quadrature over
/// the first-coordinate marginal (tolerance 1e-6) for LipschitzSine.
BayesQuantities bayes_quantities(const SyntheticProblem& problem);

}  // namespace interp
