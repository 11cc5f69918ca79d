#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"

#include "phdim/distributions.hpp"
#include "phdim/errors.hpp"
#include "phdim/geometry_sampler.hpp"
#include "phdim/rng.hpp"

using namespace phdim;

namespace {

ShapeSpec shape(Shape s) {
  ShapeSpec spec;
  spec.variant = s;
  return spec;
}

double dist_to_segment(Point2 p, Point2 a, Point2 b) {
  const double vx = b[0] - a[0], vy = b[1] - a[1];
  double t = ((p[0] - a[0]) * vx + (p[1] - a[1]) * vy) / (vx * vx + vy * vy);
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p[0] - a[0] - t * vx, p[1] - a[1] - t * vy);
}

}  // namespace

TEST_SUITE("sampler") {

TEST_CASE("rng is reproducible and streams differ") {
  SeededRng a(42, 7), b(42, 7), c(42, 8);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    CHECK(x == b.next());
    differs = differs || x != c.next();
  }
  CHECK(differs);
  SeededRng u(1);
  for (int i = 0; i < 10000; ++i) {
    const double v = u.uniform();
    REQUIRE(v >= 0.0);
    REQUIRE(v < 1.0);
    REQUIRE(u.uniform_int(7) < 7);
  }
}

TEST_CASE("normal and beta moments") {
  SeededRng rng(3);
  const int n = 200000;
  double s = 0, s2 = 0, b = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s += z;
    s2 += z * z;
    b += rng.beta(2.0, 5.0);
  }
  CHECK(std::abs(s / n) < 0.01);
  CHECK(std::abs(s2 / n - 1.0) < 0.02);
  CHECK(std::abs(b / n - 2.0 / 7.0) < 0.003);
}

TEST_CASE("ambient dimensions per shape") {
  SeededRng rng(5);
  const std::pair<Shape, std::size_t> expect[] = {
      {Shape::interval, 1}, {Shape::cantor_set, 1}, {Shape::disk, 2}, {Shape::square, 2},
      {Shape::triangle, 2}, {Shape::beta_square, 2}, {Shape::cantor_cross_interval, 2},
      {Shape::cantor_dust_2d, 2}, {Shape::sierpinski, 2}, {Shape::arrowhead, 2},
      {Shape::cube, 3}, {Shape::torus, 3}, {Shape::cantor_dust_3d, 3}};
  for (const auto& [s, dim] : expect) {
    const auto cloud = sample(shape(s), 17, rng);
    CHECK(cloud.ambient_dim() == dim);
    CHECK(cloud.size() == 17);
    CHECK(shape_from_name(shape_name(s)) == s);
  }
}

TEST_CASE("invalid parameters are rejected") {
  SeededRng rng(1);
  CHECK_THROWS_AS(sample(shape(Shape::square), 0, rng), ParameterError);
  ShapeSpec t = shape(Shape::torus);
  t.torus_major = 2;
  t.torus_minor = 3;
  CHECK_THROWS_AS(sample(t, 5, rng), ParameterError);
  ShapeSpec b = shape(Shape::beta_square);
  b.beta_a = 0;
  CHECK_THROWS_AS(sample(b, 5, rng), ParameterError);
  ShapeSpec s = shape(Shape::sierpinski);
  s.delta = -0.5;
  CHECK_THROWS_AS(sample(s, 5, rng), ParameterError);
  ShapeSpec a = shape(Shape::arrowhead);
  a.level = -1;
  CHECK_THROWS_AS(sample(a, 5, rng), ParameterError);
  CHECK_THROWS_AS(shape_from_name("hexagon"), ParameterError);
  CHECK_THROWS_AS(PointCloud(2, {0.0, NAN}), ParameterError);
  CHECK_THROWS_AS(PointCloud(2, {0.0, 1.0, 2.0}), ParameterError);
}

TEST_CASE("sampling is deterministic") {
  for (Shape s : {Shape::torus, Shape::sierpinski, Shape::arrowhead, Shape::beta_square}) {
    ShapeSpec spec = shape(s);
    spec.level = 4;
    SeededRng a(99, 1), b(99, 1);
    CHECK(sample(spec, 500, a) == sample(spec, 500, b));
  }
}

TEST_CASE("square coordinate means") {
  SeededRng rng(11);
  const auto cloud = sample(shape(Shape::square), 10000, rng);
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    mx += cloud.point(i)[0];
    my += cloud.point(i)[1];
  }
  CHECK(mx / 1e4 >= 0.48);
  CHECK(mx / 1e4 <= 0.52);
  CHECK(my / 1e4 >= 0.48);
  CHECK(my / 1e4 <= 0.52);
}

TEST_CASE("supports of the continuous shapes") {
  SeededRng rng(12);
  const double r_disk = 1.0 / std::sqrt(std::numbers::pi);
  const auto disk = sample(shape(Shape::disk), 5000, rng);
  for (std::size_t i = 0; i < disk.size(); ++i) {
    CHECK(std::hypot(disk.point(i)[0], disk.point(i)[1]) <= r_disk);
  }

  const auto tri = sample(shape(Shape::triangle), 5000, rng);
  const double side = 2.0 / std::pow(3.0, 0.25);
  CHECK(side * side * std::sqrt(3.0) / 4.0 == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t i = 0; i < tri.size(); ++i) {
    const auto p = tri.point(i);
    CHECK(p[1] >= 0.0);
    CHECK(p[1] <= std::sqrt(3.0) * p[0] + 1e-12);
    CHECK(p[1] <= std::sqrt(3.0) * (side - p[0]) + 1e-12);
  }

  const auto torus = sample(shape(Shape::torus), 5000, rng);
  for (std::size_t i = 0; i < torus.size(); ++i) {
    const auto p = torus.point(i);
    const double ring = std::hypot(p[0], p[1]) - 5.0;
    CHECK(ring * ring + p[2] * p[2] == doctest::Approx(9.0).epsilon(1e-9));
  }

  const auto beta = sample(shape(Shape::beta_square), 5000, rng);
  for (double v : beta.coords()) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("torus is area-uniform in the minor angle") {
  // density of phi is (R + r cos phi) / (2 pi R): P(cos phi > 0) = 1/2 + r/(pi R)
  SeededRng rng(13);
  const auto torus = sample(shape(Shape::torus), 40000, rng);
  int outer = 0;
  for (std::size_t i = 0; i < torus.size(); ++i) {
    const auto p = torus.point(i);
    if (std::hypot(p[0], p[1]) > 5.0) ++outer;
  }
  const double expect = 0.5 + 3.0 / (std::numbers::pi * 5.0);
  const double sigma = std::sqrt(expect * (1 - expect) / 40000.0);
  CHECK(std::abs(outer / 40000.0 - expect) < 4 * sigma);
}

TEST_CASE("cantor samples are finite ternary sums with digits 0 and 2") {
  SeededRng rng(21);
  ShapeSpec spec = shape(Shape::cantor_set);
  spec.digit_depth = 12;
  const auto cloud = sample(spec, 2000, rng);
  for (double x : cloud.coords()) {
    REQUIRE(x >= 0.0);
    REQUIRE(x <= 1.0);
    // x * 3^12 is an integer whose base-3 digits avoid 1
    long long k = std::llround(x * 531441.0);
    CHECK(std::abs(x * 531441.0 - static_cast<double>(k)) < 1e-6);
    for (int i = 0; i < 12; ++i, k /= 3) CHECK(k % 3 != 1);
  }
  const std::vector<std::uint8_t> digits{1, 0, 1};
  CHECK(cantor_digit_point(digits) == doctest::Approx(2.0 / 3 + 2.0 / 27));
  const std::vector<std::uint8_t> bad{2};
  CHECK_THROWS_AS(cantor_digit_point(bad), ParameterError);
}

TEST_CASE("sierpinski digit points") {
  const std::vector<std::uint8_t> zeros(30, 0);
  const auto p0 = sierpinski_digit_point(zeros, 0.0);
  CHECK(p0[0] == 0.0);
  CHECK(p0[1] == 0.0);

  const std::vector<std::uint8_t> one{1};
  CHECK(sierpinski_digit_point(one, 0.0)[0] == 0.5);
  CHECK(sierpinski_digit_point(one, 2.0)[0] == 0.25);
  CHECK(sierpinski_digit_point(one, 2.0)[1] == 0.0);

  const std::vector<std::uint8_t> twos(50, 2);
  const auto p2 = sierpinski_digit_point(twos, 0.0);
  CHECK(std::abs(p2[0] - 0.5) <= std::ldexp(1.0, -50));
  CHECK(std::abs(p2[1] - std::sqrt(3.0) / 2) <= std::ldexp(1.0, -50));

  const std::vector<std::uint8_t> bad{3};
  CHECK_THROWS_AS(sierpinski_digit_point(bad, 0.0), ParameterError);
}

TEST_CASE("sierpinski support shrinks with separation") {
  for (double delta : {0.0, 0.5, 2.0}) {
    ShapeSpec spec = shape(Shape::sierpinski);
    spec.delta = delta;
    SeededRng rng(31);
    const auto cloud = sample(spec, 3000, rng);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const auto p = cloud.point(i);
      CHECK(p[0] >= 0.0);
      CHECK(p[1] >= 0.0);
      CHECK(p[0] <= 1.0 / (1.0 + delta) + 1e-12);
      CHECK(p[1] <= std::sqrt(3.0) / 2 / (1.0 + delta) + 1e-12);
    }
  }
}

TEST_CASE("digit truncation beyond depth 64 is invisible") {
  SeededRng rng(41);
  for (int t = 0; t < 200; ++t) {
    std::vector<std::uint8_t> ter(100), bin(100);
    for (auto& d : ter) d = static_cast<std::uint8_t>(rng.uniform_int(3));
    for (auto& d : bin) d = static_cast<std::uint8_t>(rng.uniform_int(2));
    const std::span<const std::uint8_t> t64(ter.data(), 64), b64(bin.data(), 64);
    CHECK(sierpinski_digit_point(ter, 2.0) == sierpinski_digit_point(t64, 2.0));
    CHECK(sierpinski_digit_point(ter, 0.0) == sierpinski_digit_point(t64, 0.0));
    CHECK(cantor_digit_point(bin) == cantor_digit_point(b64));
  }
}

TEST_CASE("sierpinski self-similarity: first sub-triangle is the whole scaled by 1/2") {
  SeededRng rng(51);
  const auto cloud = sample(shape(Shape::sierpinski), 30000, rng);
  std::vector<double> all_x, all_y, sub_x, sub_y;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud.point(i);
    all_x.push_back(p[0]);
    all_y.push_back(p[1]);
    if (p[0] + p[1] / std::sqrt(3.0) < 0.5) {
      sub_x.push_back(2 * p[0]);
      sub_y.push_back(2 * p[1]);
    }
  }
  const double na = static_cast<double>(all_x.size()), ns = static_cast<double>(sub_x.size());
  CHECK(std::abs(ns / na - 1.0 / 3) < 0.02);
  // two-sample KS critical value at level 1e-3
  const double crit = 1.95 * std::sqrt((na + ns) / (na * ns));
  CHECK(ks_distance(empirical_cdf(all_x, 0, 1), empirical_cdf(sub_x, 0, 1)) < crit);
  CHECK(ks_distance(empirical_cdf(all_y, 0, 1), empirical_cdf(sub_y, 0, 1)) < crit);
}

TEST_CASE("arrowhead polyline geometry") {
  const auto l0 = arrowhead_polyline(0);
  REQUIRE(l0.size() == 2);
  CHECK(l0[0] == Point2{0, 0});
  CHECK(l0[1] == Point2{1, 0});

  for (int level = 1; level <= 7; ++level) {
    const auto poly = arrowhead_polyline(level);
    REQUIRE(poly.size() == static_cast<std::size_t>(std::pow(3, level)) + 1);
    CHECK(poly.front()[0] == 0.0);
    CHECK(poly.front()[1] == 0.0);
    CHECK(poly.back()[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(poly.back()[1]) < 1e-12);
    double total = 0;
    const double seg = std::ldexp(1.0, -level);
    for (std::size_t i = 0; i + 1 < poly.size(); ++i) {
      const double len = std::hypot(poly[i + 1][0] - poly[i][0], poly[i + 1][1] - poly[i][1]);
      CHECK(len == doctest::Approx(seg).epsilon(1e-12));
      total += len;
    }
    CHECK(total == doctest::Approx(std::pow(1.5, level)).epsilon(1e-10));
  }
  const auto l1 = arrowhead_polyline(1);
  for (const auto& p : l1) CHECK(p[1] >= 0.0);
  CHECK_THROWS_AS(arrowhead_polyline(kMaxArrowheadLevel + 1), ResourceError);
}

TEST_CASE("arrowhead curve lies on the sierpinski triangle") {
  // every vertex of the level-l curve is a vertex of the level-l triangle subdivision
  const auto poly = arrowhead_polyline(5);
  for (const auto& p : poly) {
    const double b = p[1] / (std::sqrt(3.0) / 2) * 32;
    const double a = p[0] * 32 - 0.5 * b;
    const long long ai = std::llround(a), bi = std::llround(b);
    CHECK(std::abs(a - ai) < 1e-9);
    CHECK(std::abs(b - bi) < 1e-9);
    // corner of a kept cell of the level-5 gasket (cell (a,b) kept iff a & b == 0)
    bool corner = false;
    for (auto [ca, cb] : {std::pair{ai, bi}, std::pair{ai - 1, bi}, std::pair{ai, bi - 1}}) {
      corner = corner || (ca >= 0 && cb >= 0 && ca + cb < 32 && (ca & cb) == 0);
    }
    CHECK(corner);
  }
}

TEST_CASE("polyline sampling is uniform in arc length") {
  SeededRng rng(61);
  const std::vector<Point2> line{{0, 0}, {1, 0}};
  const auto pts = sample_polyline_uniform(line, 1000, rng);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(pts.point(i)[1] == 0.0);
    CHECK(pts.point(i)[0] >= 0.0);
    CHECK(pts.point(i)[0] <= 1.0);
  }

  const std::vector<Point2> two{{0, 0}, {1, 0}, {1, 3}};
  const std::size_t n = 100000;
  const auto cloud = sample_polyline_uniform(two, n, rng);
  std::size_t second = 0;
  for (std::size_t i = 0; i < n; ++i) second += cloud.point(i)[1] > 0.0 ? 1 : 0;
  const double sigma = std::sqrt(0.75 * 0.25 / static_cast<double>(n));
  CHECK(std::abs(static_cast<double>(second) / n - 0.75) < 4 * sigma);

  const auto l1 = arrowhead_polyline(1);
  const std::size_t m = 30000;
  const auto arrow = sample_polyline_uniform(l1, m, rng);
  std::array<std::size_t, 3> counts{};
  for (std::size_t i = 0; i < m; ++i) {
    const Point2 p{arrow.point(i)[0], arrow.point(i)[1]};
    std::size_t best = 0;
    for (std::size_t s = 1; s < 3; ++s) {
      if (dist_to_segment(p, l1[s], l1[s + 1]) < dist_to_segment(p, l1[best], l1[best + 1])) best = s;
    }
    ++counts[best];
  }
  const double sd = std::sqrt(m * (1.0 / 3) * (2.0 / 3));
  for (auto c : counts) CHECK(std::abs(static_cast<double>(c) - m / 3.0) <= 3 * sd);
}

TEST_CASE("unit area normalisation: hit fractions match areas") {
  // fraction of disk points within radius 0.3 is pi 0.3^2, independent Monte Carlo oracle
  SeededRng rng(71);
  const auto disk = sample(shape(Shape::disk), 40000, rng);
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> unif(-1, 1);
  int oracle = 0, hits = 0;
  const int trials = 400000;
  const double R = 1.0 / std::sqrt(std::numbers::pi);
  int inside = 0;
  for (int i = 0; i < trials; ++i) {
    const double x = unif(gen) * R, y = unif(gen) * R;
    if (x * x + y * y <= R * R) {
      ++inside;
      if (x * x + y * y <= 0.09) ++oracle;
    }
  }
  for (std::size_t i = 0; i < disk.size(); ++i) {
    const auto p = disk.point(i);
    if (p[0] * p[0] + p[1] * p[1] <= 0.09) ++hits;
  }
  const double want = static_cast<double>(oracle) / inside;
  CHECK(std::abs(hits / 40000.0 - want) < 0.01);
}

}  // TEST_SUITE
