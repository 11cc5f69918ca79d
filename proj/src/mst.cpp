#include "phdim/mst.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <utility>

#include "phdim/errors.hpp"

namespace phdim {

UnionFind::UnionFind(std::size_t n) : parent_(n), rank_(n, 0), components_(n) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t UnionFind::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool UnionFind::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (rank_[a] < rank_[b]) std::swap(a, b);
  parent_[b] = a;
  if (rank_[a] == rank_[b]) ++rank_[a];
  --components_;
  return true;
}

std::vector<double> mst_interval_lengths(const DistanceMatrix& d) {
  const std::size_t n = d.size();
  if (n == 0) throw ParameterError("mst: empty distance matrix");
  struct Edge {
    double length;
    std::size_t i, j;
  };
  std::vector<Edge> edges;
  edges.reserve(n * (n - 1) / 2);
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) edges.push_back({d(i, j), i, j});
  }
  std::sort(edges.begin(), edges.end(),
            [](const Edge& a, const Edge& b) { return a.length < b.length; });
  UnionFind uf(n);
  std::vector<double> lengths;
  lengths.reserve(n - 1);
  for (const Edge& e : edges) {
    if (uf.unite(e.i, e.j)) {
      lengths.push_back(e.length);
      if (lengths.size() == n - 1) break;
    }
  }
  return lengths;
}

namespace {

template <std::size_t Dim>
std::vector<double> prim_fixed(const PointCloud& cloud) {
  const std::size_t n = cloud.size();
  const double* xs = cloud.coords().data();
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<double> work(xs, xs + n * Dim);
  // `work` holds the coordinates of points not yet in the tree, compacted so
  // the inner loop runs over a contiguous prefix.
  std::vector<std::size_t> ids(n);
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  std::vector<double> lengths;
  lengths.reserve(n - 1);

  std::size_t remaining = n;
  std::size_t current = 0;  // position in the compacted arrays
  while (true) {
    double cur[Dim];
    for (std::size_t k = 0; k < Dim; ++k) cur[k] = work[current * Dim + k];
    // remove `current` by swapping with the last live slot
    --remaining;
    for (std::size_t k = 0; k < Dim; ++k) work[current * Dim + k] = work[remaining * Dim + k];
    best[current] = best[remaining];
    ids[current] = ids[remaining];
    if (remaining == 0) break;

    std::size_t arg = 0;
    double arg_val = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < remaining; ++p) {
      double s = 0.0;
      for (std::size_t k = 0; k < Dim; ++k) {
        const double t = work[p * Dim + k] - cur[k];
        s += t * t;
      }
      if (s < best[p]) best[p] = s;
      if (best[p] < arg_val) {
        arg_val = best[p];
        arg = p;
      }
    }
    lengths.push_back(std::sqrt(arg_val));
    current = arg;
  }
  std::sort(lengths.begin(), lengths.end());
  return lengths;
}

}  // namespace

std::vector<double> mst_interval_lengths(const PointCloud& cloud) {
  if (cloud.empty()) throw ParameterError("mst: empty point cloud");
  switch (cloud.ambient_dim()) {
    case 1:
      return prim_fixed<1>(cloud);
    case 2:
      return prim_fixed<2>(cloud);
    case 3:
      return prim_fixed<3>(cloud);
    default:
      return mst_interval_lengths(distance_matrix(cloud));
  }
}

}  // namespace phdim
