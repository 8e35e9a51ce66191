#include "interp/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace interp {

double phi_eval(const WeightFunction& w, double t) {
  if (!(t > 0.0))
    throw NonPositiveArgument("phi: argument must be positive");
  if (w.kind == WeightFunction::Kind::PowerLaw) return std::pow(t, -w.delta);
  return -std::log(t);
}

EstimatorConfig EstimatorConfig::simplicial(double outside_value) {
  EstimatorConfig c;
  c.scheme = Scheme::Simplicial;
  c.outside_hull_value = outside_value;
  return c;
}

EstimatorConfig EstimatorConfig::winn(int k, WeightFunction phi) {
  EstimatorConfig c;
  c.scheme = Scheme::WiNN;
  c.k = k;
  c.phi = phi;
  return c;
}

EstimatorConfig EstimatorConfig::hilbert() {
  EstimatorConfig c;
  c.scheme = Scheme::Hilbert;
  return c;
}

EstimatorConfig EstimatorConfig::unweighted_knn(int k) {
  EstimatorConfig c;
  c.scheme = Scheme::UnweightedKNN;
  c.k = k;
  return c;
}

int auto_k(long n, double alpha, int dim) {
  const double exponent = 2.0 * alpha / (2.0 * alpha + dim);
  const int k = static_cast<int>(std::ceil(std::pow(static_cast<double>(n), exponent)));
  return std::max(1, std::min<int>(k, static_cast<int>(n) - 1));
}

double winn_predict(const LabeledDataset& ds, const NeighborIndex& index,
                    int k, const WeightFunction& phi,
                    std::span<const double> query) {
  const auto nn = knn_query(index, query, k);
  if (nn.neighbors.front().distance <= kExactHitTol)
    return ds.labels[nn.neighbors.front().index];

  // Normalize by the largest weight so the power law cannot overflow.
  const double r_next = nn.r_next;
  double max_w = 0.0;
  std::vector<double> weights(nn.neighbors.size());
  for (std::size_t i = 0; i < nn.neighbors.size(); ++i) {
    const double t = std::min(nn.neighbors[i].distance / r_next, 1.0);
    weights[i] = phi_eval(phi, t);
    if (std::isinf(weights[i]))
      return ds.labels[nn.neighbors[i].index];  // singular weight dominates
    max_w = std::max(max_w, weights[i]);
  }

  double num = 0.0, den = 0.0;
  double lo = ds.labels[nn.neighbors.front().index], hi = lo;
  for (std::size_t i = 0; i < nn.neighbors.size(); ++i) {
    const double y = ds.labels[nn.neighbors[i].index];
    lo = std::min(lo, y);
    hi = std::max(hi, y);
    if (max_w > 0.0) {
      const double w = weights[i] / max_w;
      num += w * y;
      den += w;
    }
  }
  if (den <= 0.0) {
    // All weights vanished (NegLog with every neighbor at r_next):
    // fall back to the unweighted mean.
    double sum = 0.0;
    for (const auto& nb : nn.neighbors) sum += ds.labels[nb.index];
    return sum / static_cast<double>(nn.neighbors.size());
  }
  return std::clamp(num / den, lo, hi);
}

double simplicial_predict(const LabeledDataset& ds,
                          const DelaunayLocator& locator, double outside_value,
                          std::span<const double> query) {
  const auto cell = locator.locate(query);
  if (!cell) return outside_value;
  std::vector<double> labels(cell->vertex_indices.size());
  for (std::size_t i = 0; i < labels.size(); ++i)
    labels[i] = ds.labels[cell->vertex_indices[i]];
  return interpolate_simplex(*cell, labels, query);
}

double knn_baseline_predict(const LabeledDataset& ds,
                            const NeighborIndex& index, int k,
                            std::span<const double> query) {
  if (k > index.size()) throw KTooLarge("knn baseline: k exceeds dataset size");
  const auto nn = index.query(query, k);
  double sum = 0.0;
  for (const auto& nb : nn.neighbors) sum += ds.labels[nb.index];
  return sum / static_cast<double>(nn.neighbors.size());
}

FittedEstimator::FittedEstimator(const EstimatorConfig& config,
                                 const LabeledDataset& ds)
    : config_(config), data_(ds) {
  data_.validate();
  const int n = data_.size();
  const int d = data_.dim;

  const bool from_hilbert = config_.scheme == Scheme::Hilbert;
  if (from_hilbert) {
    // The non-adaptive special case: k = n - 1, delta = d.
    config_.scheme = Scheme::WiNN;
    config_.k = n - 1;
    config_.phi = WeightFunction::power_law(static_cast<double>(d));
  }

  switch (config_.scheme) {
    case Scheme::Simplicial:
      locator_ = std::make_shared<DelaunayLocator>(data_.points.data(), n, d);
      break;
    case Scheme::WiNN: {
      if (config_.k <= 0) config_.k = auto_k(n, config_.smoothness_alpha, d);
      if (config_.phi.kind == WeightFunction::Kind::PowerLaw) {
        if (config_.phi.delta <= 0.0)
          config_.phi.delta = d / 4.0;
        else if (config_.phi.delta >= d / 2.0 && !from_hilbert)
          std::fprintf(stderr,
                       "warning: wiNN delta=%g outside (0, d/2) for d=%d\n",
                       config_.phi.delta, d);
      }
      if (config_.k + 1 > n)
        throw KTooLarge("wiNN: k+1 must not exceed the sample size");
      index_ = std::make_shared<NeighborIndex>(data_);
      break;
    }
    case Scheme::UnweightedKNN:
      if (config_.k <= 0) config_.k = 1;
      if (config_.k > n) throw KTooLarge("kNN: k exceeds dataset size");
      index_ = std::make_shared<NeighborIndex>(data_);
      break;
    case Scheme::Hilbert:
      break;  // unreachable, expanded above
  }
}

double FittedEstimator::predict(std::span<const double> query) const {
  switch (config_.scheme) {
    case Scheme::Simplicial:
      return simplicial_predict(data_, *locator_, config_.outside_hull_value,
                                query);
    case Scheme::WiNN:
      return winn_predict(data_, *index_, config_.k, config_.phi, query);
    case Scheme::UnweightedKNN:
      return knn_baseline_predict(data_, *index_, config_.k, query);
    case Scheme::Hilbert:
      break;
  }
  throw NumericalError("predict: unresolved scheme");
}

FittedEstimator fit_estimator(const EstimatorConfig& config,
                              const LabeledDataset& ds) {
  return FittedEstimator(config, ds);
}

}  // namespace interp
