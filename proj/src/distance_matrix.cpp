#include "phdim/distance_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "phdim/errors.hpp"

namespace phdim {

DistanceMatrix::DistanceMatrix(std::size_t n, std::vector<double> lower_triangle)
    : n_(n), lower_(std::move(lower_triangle)) {
  const std::size_t expected = n == 0 ? 0 : n * (n - 1) / 2;
  if (lower_.size() != expected) {
    throw ParameterError("distance matrix: expected " + std::to_string(expected) +
                         " lower-triangular entries, got " + std::to_string(lower_.size()));
  }
  for (double d : lower_) {
    if (!std::isfinite(d) || d < 0.0) {
      throw ParameterError("distance matrix: entries must be finite and nonnegative");
    }
  }
}

DistanceMatrix DistanceMatrix::scaled(double factor) const {
  if (!(factor > 0.0)) throw ParameterError("distance matrix: scale factor must be positive");
  std::vector<double> l(lower_);
  for (double& d : l) d *= factor;
  return DistanceMatrix(n_, std::move(l));
}

DistanceMatrix DistanceMatrix::permuted(const std::vector<std::size_t>& perm) const {
  if (perm.size() != n_) throw ParameterError("distance matrix: permutation has wrong size");
  std::vector<double> l;
  l.reserve(lower_.size());
  for (std::size_t i = 1; i < n_; ++i) {
    for (std::size_t j = 0; j < i; ++j) l.push_back((*this)(perm[i], perm[j]));
  }
  return DistanceMatrix(n_, std::move(l));
}

double DistanceMatrix::enclosing_radius() const {
  if (n_ <= 1) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_; ++i) {
    double worst = 0.0;
    for (std::size_t j = 0; j < n_; ++j) worst = std::max(worst, (*this)(i, j));
    best = std::min(best, worst);
  }
  return best;
}

DistanceMatrix distance_matrix(const PointCloud& cloud) {
  const std::size_t n = cloud.size();
  if (n == 0) throw ParameterError("distance matrix: empty point cloud");
  std::vector<double> l;
  l.reserve(n * (n - 1) / 2);
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) l.push_back(euclidean_distance(cloud.point(i), cloud.point(j)));
  }
  return DistanceMatrix(n, std::move(l));
}

DistanceMatrix read_lower_triangular(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    std::istringstream ls(line);
    std::vector<double> row;
    double v;
    while (ls >> v) row.push_back(v);
    if (!ls.eof()) throw ParameterError("distance matrix: malformed number in line '" + line + "'");
    // An empty first data line stands for row 0; otherwise rows start at row 1.
    if (first) {
      first = false;
      if (!row.empty()) rows.emplace_back();
    }
    rows.push_back(std::move(row));
  }
  while (rows.size() > 1 && rows.back().empty()) rows.pop_back();
  const std::size_t n = rows.size();
  std::vector<double> l;
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != i) {
      throw ParameterError("distance matrix: row " + std::to_string(i) + " has " +
                           std::to_string(rows[i].size()) + " entries, expected " +
                           std::to_string(i));
    }
    l.insert(l.end(), rows[i].begin(), rows[i].end());
  }
  return DistanceMatrix(n, std::move(l));
}

void write_lower_triangular(std::ostream& out, const DistanceMatrix& d) {
  const auto old = out.precision(17);
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) out << (j ? " " : "") << d(i, j);
    out << '\n';
  }
  out.precision(old);
}

}  // namespace phdim
