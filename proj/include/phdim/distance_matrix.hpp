#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "phdim/point_cloud.hpp"

namespace phdim {

/// Symmetric matrix of pairwise distances with zero diagonal, stored as the
/// strict lower triangle (row i holds d(i,0..i-1)).
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  /// Takes the strict lower triangle in row order; n(n-1)/2 entries.
  /// Throws ParameterError on negative or non-finite entries.
  DistanceMatrix(std::size_t n, std::vector<double> lower_triangle);

  std::size_t size() const { return n_; }

  double operator()(std::size_t i, std::size_t j) const {
    if (i == j) return 0.0;
    if (i < j) std::swap(i, j);
    return lower_[i * (i - 1) / 2 + j];
  }

  const std::vector<double>& lower_triangle() const { return lower_; }

  /// Copy with every entry multiplied by factor > 0.
  DistanceMatrix scaled(double factor) const;
  /// Copy with points relabelled: result(i,j) = this(perm[i], perm[j]).
  DistanceMatrix permuted(const std::vector<std::size_t>& perm) const;

  /// min over i of max over j of d(i,j); 0 for n <= 1.
  double enclosing_radius() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> lower_;
};

/// Euclidean distances between the points of a nonempty cloud.
DistanceMatrix distance_matrix(const PointCloud& cloud);

/// Parses the plain-text lower-triangular format: line i (0-based) holds the
/// i space-separated entries d(i,0) .. d(i,i-1). The first line may be empty.
/// Blank trailing lines and lines starting with '#' are ignored.
DistanceMatrix read_lower_triangular(std::istream& in);
void write_lower_triangular(std::ostream& out, const DistanceMatrix& d);

}  // namespace phdim
