#include "phdim/point_cloud.hpp"

#include <cmath>
#include <string>

#include "phdim/errors.hpp"

namespace phdim {

PointCloud::PointCloud(std::size_t ambient_dim, std::vector<double> coords)
    : dim_(ambient_dim), coords_(std::move(coords)) {
  if (dim_ == 0) throw ParameterError("point cloud: ambient dimension must be positive");
  if (coords_.size() % dim_ != 0) {
    throw ParameterError("point cloud: " + std::to_string(coords_.size()) +
                         " coordinates is not a multiple of dimension " + std::to_string(dim_));
  }
  for (double c : coords_) {
    if (!std::isfinite(c)) throw ParameterError("point cloud: non-finite coordinate");
  }
}

PointCloud PointCloud::scaled(double factor) const {
  std::vector<double> c(coords_);
  for (double& x : c) x *= factor;
  return PointCloud(dim_, std::move(c));
}

}  // namespace phdim
