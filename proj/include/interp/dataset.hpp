#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace interp {

/// A labeled training sample: n points in d dimensions, one real label each.
/// Binary problems keep labels in {0, 1} and set `binary`.
struct LabeledDataset {
  int dim = 0;
  std::vector<double> points;  // n x dim, row-major
  std::vector<double> labels;  // n
  bool binary = false;

  int size() const { return static_cast<int>(labels.size()); }

  std::span<const double> point(int i) const {
    return {points.data() + static_cast<std::size_t>(i) * dim,
            static_cast<std::size_t>(dim)};
  }

  void add(std::span<const double> x, double y) {
    points.insert(points.end(), x.begin(), x.end());
    labels.push_back(y);
  }

  /// Throws std::invalid_argument on inconsistent sizes or non-finite data.
  void validate() const;
};

/// CSV with header x0,...,x{d-1},y; one row per example.
void write_dataset_csv(std::ostream& out, const LabeledDataset& ds);
LabeledDataset read_dataset_csv(std::istream& in);

/// Query matrix CSV: header x0,...,x{d-1}, coordinates only.
void write_points_csv(std::ostream& out, const std::vector<double>& pts, int dim);
std::vector<double> read_points_csv(std::istream& in, int& dim);

/// Shortest round-trippable decimal form of a double.
std::string format_double(double v);

double squared_distance(std::span<const double> a, std::span<const double> b);
double euclidean_distance(std::span<const double> a, std::span<const double> b);

}  // namespace interp
