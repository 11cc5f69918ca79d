#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "phdim/barcode.hpp"
#include "phdim/distance_matrix.hpp"
#include "phdim/point_cloud.hpp"

namespace phdim {

inline constexpr int kMaxHomDim = 2;
inline constexpr std::size_t kBruteForceMaxPoints = 25;

struct PersistenceOptions {
  /// Cap on the simplex count estimate C(n, max_hom_dim + 2).
  std::uint64_t max_simplices = 4'000'000'000ULL;
  /// Truncate the filtration at the enclosing radius. Barcodes are unaffected.
  bool use_enclosing_radius = true;
  /// Abort with ResourceError once this time point has passed.
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

/// Vietoris-Rips barcodes over Z/2 for homological dimensions 0..max_hom_dim.
///
/// H0 is reduced (no infinite bar) and intervals of length zero are not
/// reported. The result holds one Barcode per dimension, each canonicalized.
///
/// Dimension 0 is computed by Kruskal's algorithm; higher dimensions by
/// reducing the coboundary matrix column by column in reverse filtration
/// order, with coboundaries enumerated on demand from the combinatorial
/// number system, pivots of the previous dimension cleared, and emergent
/// pairs short-circuited.
///
/// Throws UnsupportedError for max_hom_dim > 2 and ResourceError when the
/// simplex estimate exceeds options.max_simplices or the deadline passes.
std::vector<Barcode> vr_barcode(const DistanceMatrix& d, int max_hom_dim,
                                const PersistenceOptions& options = {});

/// Textbook reduction of the full boundary matrix, filtration ordered by
/// (diameter, dimension, lexicographic vertex tuple). Same output contract as
/// vr_barcode. Throws ResourceError for more than kBruteForceMaxPoints points.
std::vector<Barcode> brute_force_barcode(const DistanceMatrix& d, int max_hom_dim);

/// Number of k-element subsets of n items, saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Reduced H0 barcode of a point cloud via the MST of its Euclidean distances,
/// without building a distance matrix.
Barcode reduced_h0_barcode(const PointCloud& cloud);

}  // namespace phdim
