#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace phdim {

/// Ordered list of points in R^m, stored row-major in one buffer.
class PointCloud {
 public:
  PointCloud() = default;
  /// Throws ParameterError if ambient_dim is 0, if the buffer length is not a
  /// multiple of ambient_dim, or if any coordinate is not finite.
  PointCloud(std::size_t ambient_dim, std::vector<double> coords);

  std::size_t ambient_dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  bool empty() const { return coords_.empty(); }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  std::span<const double> coords() const { return coords_; }

  /// Copy with every coordinate multiplied by factor.
  PointCloud scaled(double factor) const;

  friend bool operator==(const PointCloud&, const PointCloud&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
};

/// Euclidean distance. Every distance in the library goes through this
/// function so that all routes produce bit-identical values.
inline double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double t = a[k] - b[k];
    s += t * t;
  }
  return std::sqrt(s);
}

}  // namespace phdim
