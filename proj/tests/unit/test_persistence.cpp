#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "phdim/barcode.hpp"
#include "phdim/distance_matrix.hpp"
#include "phdim/errors.hpp"
#include "phdim/geometry_sampler.hpp"
#include "phdim/mst.hpp"
#include "phdim/rng.hpp"
#include "phdim/vr_persistence.hpp"

using namespace phdim;

namespace {

PointCloud unit_square() { return PointCloud(2, {0, 0, 1, 0, 1, 1, 0, 1}); }

PointCloud random_cloud(SeededRng& rng, std::size_t n, bool three_d) {
  ShapeSpec spec;
  spec.variant = three_d ? Shape::cube : Shape::square;
  return sample(spec, n, rng);
}

// Prim on the full matrix, O(n^2): independent of both library MST routes
std::vector<double> prim_oracle(const DistanceMatrix& d) {
  const std::size_t n = d.size();
  std::vector<double> best(n, INFINITY), out;
  std::vector<bool> in(n, false);
  if (n == 0) return out;
  best[0] = 0;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t u = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (!in[v] && (u == n || best[v] < best[u])) u = v;
    }
    in[u] = true;
    if (step > 0) out.push_back(best[u]);
    for (std::size_t v = 0; v < n; ++v) {
      if (!in[v]) best[v] = std::min(best[v], d(u, v));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> positive(std::vector<double> v) {
  v.erase(std::remove(v.begin(), v.end(), 0.0), v.end());
  return v;
}

}  // namespace

TEST_SUITE("persistence") {

TEST_CASE("distance matrix examples") {
  const auto d = distance_matrix(PointCloud(2, {0, 0, 3, 4}));
  CHECK(d(0, 1) == 5.0);
  CHECK(d(1, 0) == 5.0);
  CHECK(d(1, 1) == 0.0);

  const auto one = distance_matrix(PointCloud(2, {0.3, 0.7}));
  CHECK(one.size() == 1);
  CHECK(one(0, 0) == 0.0);

  const auto sq = distance_matrix(unit_square());
  std::vector<double> all(sq.lower_triangle());
  std::sort(all.begin(), all.end());
  CHECK(all == std::vector<double>{1, 1, 1, 1, std::sqrt(2.0), std::sqrt(2.0)});
  CHECK_THROWS_AS(DistanceMatrix(3, {1.0, 2.0}), ParameterError);
  CHECK_THROWS_AS(DistanceMatrix(2, {-1.0}), ParameterError);
}

TEST_CASE("lower triangular text format round trip") {
  SeededRng rng(1);
  const auto d = distance_matrix(random_cloud(rng, 9, false));
  std::stringstream ss;
  write_lower_triangular(ss, d);
  const auto back = read_lower_triangular(ss);
  CHECK(back.size() == 9);
  CHECK(back.lower_triangle() == d.lower_triangle());

  std::istringstream hand("\n1\n2 3\n");
  const auto h = read_lower_triangular(hand);
  CHECK(h.size() == 3);
  CHECK(h(2, 1) == 3.0);
  std::istringstream ragged("1\n2\n");
  CHECK_THROWS_AS(read_lower_triangular(ragged), ParameterError);
}

TEST_CASE("mst examples") {
  const auto line = distance_matrix(PointCloud(1, {0, 1, 3}));
  CHECK(mst_interval_lengths(line) == std::vector<double>{1, 2});
  CHECK(mst_interval_lengths(distance_matrix(unit_square())) == std::vector<double>{1, 1, 1});
  CHECK(mst_interval_lengths(distance_matrix(PointCloud(2, {1, 1}))).empty());
  CHECK(mst_interval_lengths(PointCloud(2, {1, 1})).empty());
}

TEST_CASE("prim and kruskal give bit-identical lengths, matching an independent oracle") {
  SeededRng rng(2);
  for (int t = 0; t < 40; ++t) {
    for (Shape s : {Shape::interval, Shape::square, Shape::cube, Shape::torus, Shape::cantor_dust_3d}) {
      ShapeSpec spec;
      spec.variant = s;
      const auto cloud = sample(spec, 2 + rng.uniform_int(200), rng);
      const auto d = distance_matrix(cloud);
      const auto kruskal = mst_interval_lengths(d);
      CHECK(mst_interval_lengths(cloud) == kruskal);
      CHECK(prim_oracle(d) == kruskal);
    }
  }
}

TEST_CASE("unit square barcode") {
  const auto bars = vr_barcode(distance_matrix(unit_square()), 1);
  REQUIRE(bars.size() == 2);
  CHECK(bars[1].intervals == std::vector<Interval>{{1.0, std::sqrt(2.0)}});
  CHECK(bars[0].lengths() == std::vector<double>{1, 1, 1});
  CHECK(total_length(bars[1]) == doctest::Approx(std::sqrt(2.0) - 1));
}

TEST_CASE("three point spaces") {
  // distances a <= b <= c
  const auto d = DistanceMatrix(3, {2.0, 3.0, 4.0});
  const auto bars = vr_barcode(d, 2);
  CHECK(bars[0].lengths() == std::vector<double>{2, 3});
  CHECK(bars[1].intervals.empty());
  CHECK(bars[2].intervals.empty());
  CHECK(brute_force_barcode(d, 2) == bars);
}

TEST_CASE("two points and one point") {
  const auto two = vr_barcode(DistanceMatrix(2, {1.0}), 1);
  CHECK(two[0].intervals == std::vector<Interval>{{0, 1}});
  CHECK(brute_force_barcode(DistanceMatrix(2, {1.0}), 1) == two);
  const auto one = vr_barcode(DistanceMatrix(1, {}), 2);
  for (const auto& b : one) CHECK(b.intervals.empty());
}

TEST_CASE("total length") {
  const auto line = vr_barcode(distance_matrix(PointCloud(1, {0, 1, 3})), 0);
  CHECK(total_length(line[0]) == 3.0);
  CHECK(total_length(Barcode{}) == 0.0);
}

TEST_CASE("errors: unsupported dimension, budget, oracle size") {
  SeededRng rng(3);
  const auto d = distance_matrix(random_cloud(rng, 30, false));
  CHECK_THROWS_AS(vr_barcode(d, 3), UnsupportedError);
  PersistenceOptions small;
  small.max_simplices = 1000;
  try {
    vr_barcode(d, 1, small);
    FAIL("expected resource error");
  } catch (const ResourceError& e) {
    CHECK(std::string(e.what()).find("4060") != std::string::npos);  // C(30, 3)
  }
  CHECK_THROWS_AS(brute_force_barcode(d, 1), ResourceError);
  CHECK(binomial(30, 3) == 4060);
  CHECK(binomial(5, 7) == 0);
}

TEST_CASE("expired deadline aborts the reduction") {
  SeededRng rng(4);
  const auto d = distance_matrix(random_cloud(rng, 300, true));
  PersistenceOptions o;
  o.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
  CHECK_THROWS_AS(vr_barcode(d, 2, o), ResourceError);
}

TEST_CASE("engine equals brute-force oracle on random clouds") {
  SeededRng rng(5);
  for (int t = 0; t < 150; ++t) {
    const std::size_t n = 2 + rng.uniform_int(19);
    const auto d = distance_matrix(random_cloud(rng, n, t % 2 == 1));
    REQUIRE(vr_barcode(d, 2) == brute_force_barcode(d, 2));
  }
}

TEST_CASE("engine equals oracle with heavy ties") {
  // integer grids: many equal filtration values
  SeededRng rng(6);
  for (int t = 0; t < 60; ++t) {
    std::vector<double> coords;
    const std::size_t n = 4 + rng.uniform_int(12);
    for (std::size_t i = 0; i < 2 * n; ++i) coords.push_back(static_cast<double>(rng.uniform_int(4)));
    const auto d = distance_matrix(PointCloud(2, coords));
    REQUIRE(vr_barcode(d, 2) == brute_force_barcode(d, 2));
  }
}

TEST_CASE("octahedron has one H2 class") {
  const PointCloud oct(3, {1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1});
  const auto d = distance_matrix(oct);
  const auto bars = vr_barcode(d, 2);
  CHECK(bars[2].intervals == std::vector<Interval>{{std::sqrt(2.0), 2.0}});
  CHECK(bars[1].intervals.empty());
  CHECK(brute_force_barcode(d, 2) == bars);
}

TEST_CASE("H0 lengths equal MST lengths") {
  SeededRng rng(7);
  for (int t = 0; t < 20; ++t) {
    const auto cloud = random_cloud(rng, 2 + rng.uniform_int(200), t % 2 == 0);
    const auto d = distance_matrix(cloud);
    const auto bars = vr_barcode(d, 0);
    CHECK(bars[0].lengths() == positive(mst_interval_lengths(d)));
    CHECK(reduced_h0_barcode(cloud) == bars[0]);
    CHECK(bars[0].intervals.size() == cloud.size() - 1);
    for (const auto& i : bars[0].intervals) CHECK(i.birth == 0.0);
  }
}

TEST_CASE("scale equivariance") {
  SeededRng rng(8);
  const auto cloud = random_cloud(rng, 40, true);
  const auto d = distance_matrix(cloud);
  const auto base = vr_barcode(d, 2);
  // a power of two scales exactly
  const auto twice = vr_barcode(d.scaled(2.0), 2);
  for (int k = 0; k <= 2; ++k) {
    REQUIRE(base[k].intervals.size() == twice[k].intervals.size());
    for (std::size_t i = 0; i < base[k].intervals.size(); ++i) {
      CHECK(twice[k].intervals[i].birth == 2.0 * base[k].intervals[i].birth);
      CHECK(twice[k].intervals[i].death == 2.0 * base[k].intervals[i].death);
    }
  }
  const auto third = vr_barcode(distance_matrix(cloud.scaled(3.0)), 1);
  CHECK(total_length(third[1]) == doctest::Approx(3.0 * total_length(base[1])).epsilon(1e-12));
  CHECK(total_length(third[0]) == doctest::Approx(3.0 * total_length(base[0])).epsilon(1e-12));
}

TEST_CASE("permutation invariance") {
  SeededRng rng(9);
  const auto d = distance_matrix(random_cloud(rng, 45, false));
  std::vector<std::size_t> perm(d.size());
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = perm.size() - 1; i > 0; --i) std::swap(perm[i], perm[rng.uniform_int(i + 1)]);
  CHECK(vr_barcode(d.permuted(perm), 2) == vr_barcode(d, 2));
}

TEST_CASE("enclosing radius threshold does not change barcodes") {
  SeededRng rng(10);
  PersistenceOptions full;
  full.use_enclosing_radius = false;
  for (int t = 0; t < 10; ++t) {
    const auto d = distance_matrix(random_cloud(rng, 30, t % 2 == 0));
    CHECK(vr_barcode(d, 2) == vr_barcode(d, 2, full));
  }
}

TEST_CASE("barcode invariants and csv") {
  SeededRng rng(11);
  const auto bars = vr_barcode(distance_matrix(random_cloud(rng, 60, false)), 1);
  for (const auto& b : bars) {
    for (const auto& i : b.intervals) {
      CHECK(i.death > i.birth);
      CHECK(i.birth >= 0.0);
    }
  }
  std::ostringstream out;
  write_barcodes_csv(out, bars);
  const std::string text = out.str();
  CHECK(text.rfind("hom_dim,birth,death\n", 0) == 0);
  CHECK(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) ==
        1 + bars[0].intervals.size() + bars[1].intervals.size());
}

TEST_CASE("duplicate points are tolerated") {
  const PointCloud dup(2, {0, 0, 0, 0, 1, 0, 1, 0, 0, 1});
  const auto d = distance_matrix(dup);
  const auto bars = vr_barcode(d, 2);
  CHECK(bars == brute_force_barcode(d, 2));
  CHECK(bars[0].lengths() == std::vector<double>{1, 1});
  CHECK(mst_interval_lengths(d) == std::vector<double>{0, 0, 1, 1});
}

}  // TEST_SUITE
