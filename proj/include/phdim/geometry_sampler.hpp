#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "phdim/point_cloud.hpp"
#include "phdim/rng.hpp"

namespace phdim {

enum class Shape {
  disk,
  square,
  triangle,
  cube,
  torus,
  interval,
  beta_square,
  cantor_set,
  cantor_cross_interval,
  cantor_dust_2d,
  cantor_dust_3d,
  sierpinski,
  arrowhead,
};

std::string_view shape_name(Shape s);
/// Inverse of shape_name; throws ParameterError on unknown names.
Shape shape_from_name(std::string_view name);

/// A measure to sample from. Only the fields relevant to `variant` are read.
struct ShapeSpec {
  Shape variant = Shape::square;
  /// Truncation depth of digit expansions (Cantor and Sierpinski variants).
  int digit_depth = 64;
  double torus_major = 5.0;
  double torus_minor = 3.0;
  double beta_a = 2.0;
  double beta_b = 2.0;
  /// Separation of the Sierpinski triangle; 0 is the classical one.
  double delta = 0.0;
  /// Arrowhead curve level.
  int level = 0;

  /// Throws ParameterError when a parameter is out of range.
  void validate() const;
  std::size_t ambient_dim() const;
  /// Short human-readable label, e.g. "sierpinski(delta=2)".
  std::string describe() const;

  friend bool operator==(const ShapeSpec&, const ShapeSpec&) = default;
};

using Point2 = std::array<double, 2>;

/// Highest arrowhead level that sample() and arrowhead_polyline() accept by default.
inline constexpr int kMaxArrowheadLevel = 14;

/// n i.i.d. points from the measure named by spec.
PointCloud sample(const ShapeSpec& spec, std::size_t n, SeededRng& rng);

/// sum_{i>=1} 2 a_i / 3^i for binary digits a_i.
double cantor_digit_point(std::span<const std::uint8_t> digits);

/// sum_{i>=1} (1/(2+delta))^i v_{a_i} with v_0 = (0,0), v_1 = (1,0),
/// v_2 = (1/2, sqrt(3)/2).
Point2 sierpinski_digit_point(std::span<const std::uint8_t> digits, double delta);

/// Level-l Sierpinski arrowhead curve as 3^l + 1 vertices from (0,0) to (1,0).
/// Generated by the L-system A -> B-A-B, B -> A+B+A with 60 degree turns.
std::vector<Point2> arrowhead_polyline(int level, int max_level = kMaxArrowheadLevel);

/// n points uniform with respect to arc length on the polyline.
PointCloud sample_polyline_uniform(std::span<const Point2> polyline, std::size_t n,
                                   SeededRng& rng);

}  // namespace phdim
