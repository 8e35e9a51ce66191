#pragma once

#include <memory>
#include <optional>
#include <span>

#include "interp/dataset.hpp"
#include "interp/errors.hpp"
#include "interp/geometry.hpp"
#include "interp/neighbors.hpp"

namespace interp {

/// Distance below which a query is treated as coinciding with a training
/// point, routing around the weight-function singularity.
inline constexpr double kExactHitTol = 1e-12;

/// Singular radial weight profile phi. PowerLaw(delta) is t^(-delta);
/// NegLog is -log(t). Both diverge at t = 0, which forces interpolation.
struct WeightFunction {
  enum class Kind { PowerLaw, NegLog };
  Kind kind = Kind::PowerLaw;
  double delta = 0.0;

  static WeightFunction power_law(double delta) {
    return {Kind::PowerLaw, delta};
  }
  static WeightFunction neg_log() { return {Kind::NegLog, 0.0}; }
};

/// phi(t); t must be positive (and <= 1 for NegLog to stay nonnegative).
/// Throws NonPositiveArgument at t <= 0: callers route exact hits around
/// the singularity.
double phi_eval(const WeightFunction& w, double t);

enum class Scheme { Simplicial, WiNN, Hilbert, UnweightedKNN };

struct EstimatorConfig {
  Scheme scheme = Scheme::WiNN;
  int k = 0;  // 0 = resolve with auto_k at fit time
  WeightFunction phi = WeightFunction::power_law(0.0);  // delta 0 = d/4 default
  double outside_hull_value = 0.5;
  double smoothness_alpha = 1.0;  // used only when k is auto-resolved

  static EstimatorConfig simplicial(double outside_value = 0.5);
  static EstimatorConfig winn(int k, WeightFunction phi);
  static EstimatorConfig hilbert();
  static EstimatorConfig unweighted_knn(int k);
};

/// k = ceil(n^(2 alpha / (2 alpha + d))), the rate-optimal schedule.
int auto_k(long n, double alpha, int dim);

/// Weighted & interpolated nearest neighbor estimate at `query`:
/// sum_i phi(d_i / r_next) y_i / sum_i phi(d_i / r_next) over the k nearest
/// neighbors. A query within kExactHitTol of a training point returns that
/// point's label (lowest index when several coincide). If every weight is
/// zero (NegLog with all k neighbors at distance r_next) the unweighted
/// mean of the k labels is returned.
double winn_predict(const LabeledDataset& ds, const NeighborIndex& index,
                    int k, const WeightFunction& phi,
                    std::span<const double> query);

/// Simplicial interpolation: barycentric interpolation over the Delaunay
/// cell containing the query, `outside_value` outside the convex hull.
double simplicial_predict(const LabeledDataset& ds,
                          const DelaunayLocator& locator, double outside_value,
                          std::span<const double> query);

/// k = 1 nearest-label rule; k > 1 unweighted mean of the k nearest labels.
double knn_baseline_predict(const LabeledDataset& ds,
                            const NeighborIndex& index, int k,
                            std::span<const double> query);

/// Plug-in classifier: 1 iff eta_hat is strictly greater than 1/2.
inline int plugin_classify(double eta_hat) { return eta_hat > 0.5 ? 1 : 0; }

/// A fitted predictor: owns a copy of the training data plus whichever
/// acceleration structure the scheme needs. Immutable; predict is pure and
/// safe to call concurrently.
class FittedEstimator {
 public:
  FittedEstimator(const EstimatorConfig& config, const LabeledDataset& ds);

  double predict(std::span<const double> query) const;
  int classify(std::span<const double> query) const {
    return plugin_classify(predict(query));
  }

  /// Config after fit-time resolution (Hilbert expansion, auto k/delta).
  const EstimatorConfig& config() const { return config_; }
  const LabeledDataset& data() const { return data_; }

 private:
  EstimatorConfig config_;
  LabeledDataset data_;
  std::shared_ptr<const NeighborIndex> index_;
  std::shared_ptr<const DelaunayLocator> locator_;
};

FittedEstimator fit_estimator(const EstimatorConfig& config,
                              const LabeledDataset& ds);

}  // namespace interp
