#include "interp/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace interp {

namespace {

constexpr double kDomainTol = 1e-12;

double eta_of_x1(const SyntheticProblem& pr, double x1) {
  switch (pr.eta_kind) {
    case SyntheticProblem::Eta::Constant:
      return pr.p;
    case SyntheticProblem::Eta::LinearBoundary:
      return 0.5 + (x1 >= 0.5 ? pr.h : -pr.h);
    case SyntheticProblem::Eta::LipschitzSine:
      return 0.5 + pr.amp * std::sin(2.0 * std::numbers::pi * pr.freq * x1);
  }
  throw std::invalid_argument("unknown eta kind");
}

// First-coordinate marginal density of the uniform law on the domain,
// up to the normalizer handled by the caller.
double marginal_shape(const SyntheticProblem& pr, double t) {
  switch (pr.domain) {
    case Domain::UnitCube:
      return 1.0;
    case Domain::UnitBall:
      return std::pow(std::max(0.0, 1.0 - t * t), (pr.dim - 1) / 2.0);
    case Domain::Simplex:
      return std::pow(std::max(0.0, 1.0 - t), pr.dim - 1);
  }
  throw std::invalid_argument("unknown domain");
}

void x1_range(const SyntheticProblem& pr, double& lo, double& hi) {
  lo = (pr.domain == Domain::UnitBall) ? -1.0 : 0.0;
  hi = 1.0;
}

template <typename F>
double simpson_rec(const F& f, double a, double b, double fa, double fm,
                   double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

// Bootstrapped with uniform panels: a periodic integrand can alias to a
// polynomial on the initial Simpson nodes, so refine each panel separately.
template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol) {
  const int panels = 32;
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double lo = a + i * h, hi = lo + h;
    const double m = 0.5 * (lo + hi);
    const double fa = f(lo), fm = f(m), fb = f(hi);
    const double whole = h / 6.0 * (fa + 4.0 * fm + fb);
    total += simpson_rec(f, lo, hi, fa, fm, fb, whole, tol / panels, 24);
  }
  return total;
}

}  // namespace

double SyntheticProblem::smoothness_A() const {
  switch (eta_kind) {
    case Eta::Constant:
      return 0.0;
    case Eta::LinearBoundary:
      return 0.0;  // Lipschitz away from the boundary; jump at x1 = 1/2
    case Eta::LipschitzSine:
      return 2.0 * std::numbers::pi * freq * amp;
  }
  return 0.0;
}

double SyntheticProblem::hard_margin() const {
  switch (eta_kind) {
    case Eta::Constant:
      return std::abs(p - 0.5);
    case Eta::LinearBoundary:
      return h;
    case Eta::LipschitzSine:
      return 0.0;
  }
  return 0.0;
}

double SyntheticProblem::regularity_c0() const {
  // Worst case is a corner of the domain: a 2^-d orthant of any small ball
  // stays inside the cube and simplex, roughly half of it inside the ball.
  switch (domain) {
    case Domain::UnitCube:
    case Domain::Simplex:
      return std::pow(2.0, -dim);
    case Domain::UnitBall:
      return 0.5;
  }
  return 0.0;
}

double SyntheticProblem::regularity_r0() const {
  return domain == Domain::Simplex ? 1.0 / (1.0 + dim) : 1.0;
}

SyntheticProblem SyntheticProblem::constant(int dim, double p, Domain domain) {
  SyntheticProblem pr;
  pr.domain = domain;
  pr.dim = dim;
  pr.eta_kind = Eta::Constant;
  pr.p = p;
  pr.validate();
  return pr;
}

SyntheticProblem SyntheticProblem::linear_boundary(int dim, double h) {
  SyntheticProblem pr;
  pr.dim = dim;
  pr.eta_kind = Eta::LinearBoundary;
  pr.h = h;
  pr.validate();
  return pr;
}

SyntheticProblem SyntheticProblem::lipschitz_sine(int dim, double amp,
                                                  double freq, Domain domain) {
  SyntheticProblem pr;
  pr.domain = domain;
  pr.dim = dim;
  pr.eta_kind = Eta::LipschitzSine;
  pr.amp = amp;
  pr.freq = freq;
  pr.validate();
  return pr;
}

void SyntheticProblem::validate() const {
  if (dim < 1) throw std::invalid_argument("problem: dim >= 1 required");
  switch (eta_kind) {
    case Eta::Constant:
      if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("Constant: 0 < p < 1 required");
      break;
    case Eta::LinearBoundary:
      if (!(h > 0.0 && h <= 0.5))
        throw std::invalid_argument("LinearBoundary: 0 < h <= 1/2 required");
      break;
    case Eta::LipschitzSine:
      if (!(amp > 0.0 && amp <= 0.5))
        throw std::invalid_argument("LipschitzSine: 0 < amp <= 1/2 required");
      if (!(freq > 0.0))
        throw std::invalid_argument("LipschitzSine: freq > 0 required");
      break;
  }
}

bool SyntheticProblem::in_domain(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim) return false;
  switch (domain) {
    case Domain::UnitCube: {
      for (double v : x)
        if (v < -kDomainTol || v > 1.0 + kDomainTol) return false;
      return true;
    }
    case Domain::UnitBall: {
      double sq = 0.0;
      for (double v : x) sq += v * v;
      return sq <= 1.0 + kDomainTol;
    }
    case Domain::Simplex: {
      double sum = 0.0;
      for (double v : x) {
        if (v < -kDomainTol) return false;
        sum += v;
      }
      return sum <= 1.0 + kDomainTol;
    }
  }
  return false;
}

std::string SyntheticProblem::describe() const {
  std::ostringstream os;
  switch (eta_kind) {
    case Eta::Constant:
      os << "Constant(p=" << p << ")";
      break;
    case Eta::LinearBoundary:
      os << "LinearBoundary(h=" << h << ")";
      break;
    case Eta::LipschitzSine:
      os << "LipschitzSine(amp=" << amp << ", freq=" << freq << ")";
      break;
  }
  os << " on ";
  switch (domain) {
    case Domain::UnitCube: os << "cube"; break;
    case Domain::UnitBall: os << "ball"; break;
    case Domain::Simplex: os << "simplex"; break;
  }
  os << "(d=" << dim << ")" << (binary ? ", binary" : ", noiseless");
  return os.str();
}

double eta_eval(const SyntheticProblem& problem, std::span<const double> x) {
  if (!problem.in_domain(x))
    throw OutsideDomain("eta: point outside the problem domain");
  return eta_of_x1(problem, x[0]);
}

void sample_point(const SyntheticProblem& problem, Rng& rng, double* out) {
  const int d = problem.dim;
  switch (problem.domain) {
    case Domain::UnitCube:
      for (int j = 0; j < d; ++j) out[j] = rng.uniform();
      return;
    case Domain::UnitBall:
      for (;;) {
        double sq = 0.0;
        for (int j = 0; j < d; ++j) {
          out[j] = rng.uniform(-1.0, 1.0);
          sq += out[j] * out[j];
        }
        if (sq <= 1.0) return;
      }
    case Domain::Simplex:
      for (;;) {
        double sum = 0.0;
        for (int j = 0; j < d; ++j) {
          out[j] = rng.uniform();
          sum += out[j];
        }
        if (sum <= 1.0) return;
      }
  }
}

LabeledDataset sample_dataset_rng(const SyntheticProblem& problem, long n,
                                  Rng& rng) {
  if (n < 1) throw std::invalid_argument("sample_dataset: n >= 1 required");
  problem.validate();
  LabeledDataset ds;
  ds.dim = problem.dim;
  ds.binary = problem.binary;
  ds.points.resize(static_cast<std::size_t>(n) * problem.dim);
  ds.labels.resize(n);
  for (long i = 0; i < n; ++i) {
    double* x = ds.points.data() + static_cast<std::size_t>(i) * problem.dim;
    sample_point(problem, rng, x);
    const double eta = eta_of_x1(problem, x[0]);
    ds.labels[i] = problem.binary ? (rng.bernoulli(eta) ? 1.0 : 0.0) : eta;
  }
  return ds;
}

LabeledDataset sample_dataset(const SyntheticProblem& problem, long n,
                              std::uint64_t seed) {
  Rng rng(seed);
  return sample_dataset_rng(problem, n, rng);
}

BayesQuantities bayes_quantities(const SyntheticProblem& problem) {
  if (!problem.binary)
    throw std::invalid_argument("bayes_quantities: binary problems only");
  BayesQuantities q;
  switch (problem.eta_kind) {
    case SyntheticProblem::Eta::Constant: {
      const double p = problem.p;
      q.bayes_risk = std::min(p, 1.0 - p);
      q.nn_limit_risk = 2.0 * p * (1.0 - p);
      q.noise_mse = p * (1.0 - p);
      return q;
    }
    case SyntheticProblem::Eta::LinearBoundary: {
      const double h = problem.h;
      q.bayes_risk = 0.5 - h;
      q.nn_limit_risk = 2.0 * (0.25 - h * h);
      q.noise_mse = 0.25 - h * h;
      return q;
    }
    case SyntheticProblem::Eta::LipschitzSine: {
      double lo, hi;
      x1_range(problem, lo, hi);
      const double z = adaptive_simpson(
          [&](double t) { return marginal_shape(problem, t); }, lo, hi, 1e-8);
      auto expect = [&](auto g) {
        return adaptive_simpson(
                   [&](double t) {
                     return g(eta_of_x1(problem, t)) * marginal_shape(problem, t);
                   },
                   lo, hi, 1e-6) /
               z;
      };
      q.bayes_risk = expect([](double e) { return std::min(e, 1.0 - e); });
      q.nn_limit_risk = expect([](double e) { return 2.0 * e * (1.0 - e); });
      q.noise_mse = expect([](double e) { return e * (1.0 - e); });
      return q;
    }
  }
  throw std::invalid_argument("unknown eta kind");
}

}  // namespace interp
