#pragma once

#include <cstddef>
#include <vector>

#include "phdim/distance_matrix.hpp"
#include "phdim/point_cloud.hpp"

namespace phdim {

/// Disjoint-set forest with union by rank and path halving.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n);

  std::size_t find(std::size_t x);
  /// Returns false if a and b were already in the same set.
  bool unite(std::size_t a, std::size_t b);
  std::size_t components() const { return components_; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<unsigned char> rank_;
  std::size_t components_;
};

/// Sorted edge lengths of a minimal spanning tree (Kruskal). n-1 values for
/// n >= 1, zeros included. These are the reduced H0 interval lengths.
std::vector<double> mst_interval_lengths(const DistanceMatrix& d);

/// Same multiset computed directly from coordinates with dense Prim, in
/// O(n^2) time and O(n) memory. Used for large clouds where an n x n matrix
/// does not fit.
std::vector<double> mst_interval_lengths(const PointCloud& cloud);

}  // namespace phdim
