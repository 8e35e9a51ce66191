#include "interp/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace interp {

void LabeledDataset::validate() const {
  if (dim < 1) throw std::invalid_argument("dataset dimension must be >= 1");
  if (labels.empty()) throw std::invalid_argument("dataset must be non-empty");
  if (points.size() != labels.size() * static_cast<std::size_t>(dim))
    throw std::invalid_argument("points/labels size mismatch");
  for (double v : points)
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite coordinate");
  for (double y : labels) {
    if (!std::isfinite(y)) throw std::invalid_argument("non-finite label");
    if (binary && y != 0.0 && y != 1.0)
      throw std::invalid_argument("binary dataset with label outside {0,1}");
  }
}

std::string format_double(double v) {
  char buf[40];
  // Shortest form that round-trips: try increasing precision.
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == v) return buf;
  }
  return buf;
}

void write_dataset_csv(std::ostream& out, const LabeledDataset& ds) {
  for (int j = 0; j < ds.dim; ++j) out << 'x' << j << ',';
  out << "y\n";
  for (int i = 0; i < ds.size(); ++i) {
    auto x = ds.point(i);
    for (int j = 0; j < ds.dim; ++j) out << format_double(x[j]) << ',';
    out << format_double(ds.labels[i]) << '\n';
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

LabeledDataset read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty CSV");
  auto header = split_csv_line(line);
  if (header.size() < 2 || header.back() != "y")
    throw std::invalid_argument("dataset CSV header must be x0,...,y");
  LabeledDataset ds;
  ds.dim = static_cast<int>(header.size()) - 1;
  bool all_binary = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw std::invalid_argument("CSV row width mismatch");
    for (int j = 0; j < ds.dim; ++j) ds.points.push_back(std::stod(fields[j]));
    double y = std::stod(fields.back());
    all_binary = all_binary && (y == 0.0 || y == 1.0);
    ds.labels.push_back(y);
  }
  ds.binary = all_binary && !ds.labels.empty();
  ds.validate();
  return ds;
}

void write_points_csv(std::ostream& out, const std::vector<double>& pts, int dim) {
  for (int j = 0; j < dim; ++j) out << 'x' << j << (j + 1 < dim ? "," : "");
  out << '\n';
  const int n = static_cast<int>(pts.size()) / dim;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < dim; ++j)
      out << format_double(pts[static_cast<std::size_t>(i) * dim + j])
          << (j + 1 < dim ? "," : "");
    out << '\n';
  }
}

std::vector<double> read_points_csv(std::istream& in, int& dim) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty CSV");
  auto header = split_csv_line(line);
  dim = static_cast<int>(header.size());
  // Tolerate a trailing y column so dataset files work as query files too.
  bool has_labels = !header.empty() && header.back() == "y";
  if (has_labels) --dim;
  if (dim < 1) throw std::invalid_argument("points CSV needs x columns");
  std::vector<double> pts;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) != dim + (has_labels ? 1 : 0))
      throw std::invalid_argument("CSV row width mismatch");
    for (int j = 0; j < dim; ++j) pts.push_back(std::stod(fields[j]));
  }
  return pts;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    s += diff * diff;
  }
  return s;
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_distance(a, b));
}

}  // namespace interp
