#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"

#include "phdim/errors.hpp"
#include "phdim/geometry_sampler.hpp"
#include "phdim/rng.hpp"
#include "phdim/scaling.hpp"

using namespace phdim;

namespace {

ScalingSeries power_series(double c, double a, std::vector<double> ns, std::size_t trials = 1) {
  ScalingSeries s;
  s.n_schedule = ns;
  s.trials = trials;
  for (double n : ns) {
    for (std::size_t t = 0; t < trials; ++t) s.samples.push_back({n, c * std::pow(n, a), t, 0});
  }
  return s;
}

std::vector<double> doubling(double from, int count) {
  std::vector<double> v;
  for (int i = 0; i < count; ++i) v.push_back(from * std::ldexp(1.0, i));
  return v;
}

double f_test(double x) { return 100 * x + x * x / 10; }

}  // namespace

TEST_SUITE("scaling") {

TEST_CASE("exact power laws are recovered") {
  const auto half = power_series(1.0, 0.5, doubling(64, 8));
  const auto g = global_loglog_fit(half);
  CHECK(g.alpha == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(g.dimension == doctest::Approx(2.0).epsilon(1e-10));
  const auto flat = power_series(3.0, 0.0, doubling(64, 8));
  CHECK(std::abs(global_loglog_fit(flat).alpha) < 1e-12);
  CHECK(global_loglog_fit(flat).dimension == doctest::Approx(1.0));

  for (double a : {0.0, 0.2, 0.37, 0.5, 0.66, 0.9}) {
    const auto s = power_series(0.7, a, doubling(32, 9), 3);
    for (const auto& e : {global_loglog_fit(s), pooled_loglog_fit(s), asymptotic_alpha(s)}) {
      CHECK(std::abs(e.alpha - a) < 1e-10);
      CHECK(std::abs(e.dimension - 1.0 / (1.0 - a)) < 1e-8);
      CHECK_FALSE(e.diagnostics.fell_back);
    }
  }
}

TEST_CASE("dimension and alpha round trip") {
  for (double d = 1.0; d <= 10.0; d += 0.25) CHECK(std::abs(dimension_from_alpha(alpha_from_dimension(d)) - d) < 1e-12);
  CHECK(std::isinf(dimension_from_alpha(1.0)));
  CHECK(std::isinf(dimension_from_alpha(1.3)));
  const auto steep = power_series(1.0, 1.2, doubling(8, 5));
  CHECK(std::isinf(global_loglog_fit(steep).dimension));
}

TEST_CASE("zero totals are excluded with a warning; too few points is an error") {
  auto s = power_series(1.0, 0.5, {10, 20, 40, 80});
  s.samples[1].ell = 0.0;
  const auto e = global_loglog_fit(s);
  CHECK(e.diagnostics.points_used == 3);
  CHECK_FALSE(e.diagnostics.warnings.empty());
  CHECK(e.alpha == doctest::Approx(0.5));
  s.samples[2].ell = 0.0;
  s.samples[3].ell = 0.0;
  CHECK_THROWS_AS(global_loglog_fit(s), FitError);
}

TEST_CASE("window fits") {
  const auto sq = power_series(2.0, 2.0, doubling(1, 7));
  const auto w = window_fits(sq, 7);
  // p = 1..5 give windows of length >= 3
  REQUIRE(w.size() == 5);
  for (const auto& f : w) {
    CHECK(f.q == 7);
    CHECK(f.q - f.p + 1 >= kMinWindowLength);
    CHECK(f.alpha_pq == doctest::Approx(2.0).epsilon(1e-12));
  }
  CHECK(window_fits(sq, 2).empty());
  CHECK(window_fits(sq, 3).size() == 1);
}

TEST_CASE("asymptotic extrapolation") {
  std::vector<WindowFit> constant, linear;
  for (std::size_t p = 1; p <= 6; ++p) {
    constant.push_back({p, 9, 0.37, 0.0});
    linear.push_back({p, 9, 0.5 - 1.0 / static_cast<double>(p), 0.0});
  }
  CHECK(extrapolate_windows(constant).intercept == doctest::Approx(0.37).epsilon(1e-12));
  CHECK(extrapolate_windows(linear).intercept == doctest::Approx(0.5).epsilon(1e-12));

  const auto s = power_series(1.0, 0.37, doubling(64, 8));
  CHECK(asymptotic_alpha(s).alpha == doctest::Approx(0.37).epsilon(1e-10));
  CHECK(asymptotic_alpha(s).diagnostics.windows.size() == 6);
}

TEST_CASE("fewer than four windows falls back to the global fit") {
  const auto s = power_series(1.0, 0.5, {10, 20, 40, 80, 160});
  const auto e = asymptotic_alpha(s);
  CHECK(e.diagnostics.fell_back);
  CHECK(e.method == FitMethod::asymptotic);
  CHECK(e.alpha == doctest::Approx(global_loglog_fit(s).alpha));
}

TEST_CASE("two-dimensional extrapolation") {
  SeededRng rng(1);
  const auto s = synthetic_test_series(regular_grid(400, 20000, 1400), 0.0, rng);
  const std::vector<std::size_t> one_q{s.n_schedule.size()};
  CHECK(asymptotic_alpha_2d(s, one_q).alpha == doctest::Approx(asymptotic_alpha(s).alpha));
  const std::vector<std::size_t> qs{10, 12, 15};
  const auto e = asymptotic_alpha_2d(s, qs);
  CHECK(e.alpha > global_loglog_fit(s).alpha);
  CHECK(std::abs(e.alpha - 2.0) < 0.1);
  const auto exact = power_series(1.0, 0.4, doubling(16, 10));
  const std::vector<std::size_t> exact_qs{8, 9, 10};
  CHECK(asymptotic_alpha_2d(exact, exact_qs).alpha == doctest::Approx(0.4).epsilon(1e-9));
}

TEST_CASE("synthetic series") {
  SeededRng rng(2);
  const auto grid = regular_grid(400, 20000, 400);
  CHECK(grid.front() == 400);
  CHECK(grid.back() == 20000);
  CHECK(grid.size() == 50);
  const auto s = synthetic_test_series(grid, 0.0, rng);
  for (const auto& smp : s.samples) CHECK(smp.ell == doctest::Approx(f_test(smp.n)).epsilon(1e-14));

  const auto restricted = global_loglog_fit(synthetic_test_series(regular_grid(19000, 20000, 100), 0.0, rng));
  CHECK(std::abs(restricted.alpha - 1.9393) <= 0.02);

  // below 10^3 the linear term dominates
  const auto small = global_loglog_fit(synthetic_test_series(regular_grid(1, 100, 1), 0.0, rng));
  CHECK(std::abs(small.alpha - 1.0) < 0.05);

  // window slopes rise toward 2 as the window moves right
  const auto w = window_fits(s, s.n_schedule.size());
  for (std::size_t i = 1; i < w.size(); ++i) CHECK(w[i].alpha_pq >= w[i - 1].alpha_pq);
  CHECK(w.back().alpha_pq < 2.0);

  // noise: multiplicative, mean zero, increments of a Wiener path
  SeededRng a(3), b(3);
  const auto n1 = synthetic_test_series(grid, 0.1, a);
  CHECK(n1 == synthetic_test_series(grid, 0.1, b));
  double rel2 = 0;
  for (const auto& smp : n1.samples) {
    const double r = smp.ell / f_test(smp.n) - 1.0;
    rel2 += r * r;
  }
  // Var(0.1 * eps) = 0.01 / N
  const double var = rel2 / static_cast<double>(grid.size());
  CHECK(var == doctest::Approx(0.01 / grid.size()).epsilon(0.5));
}

TEST_CASE("trial averaging agrees with pooled fit") {
  SeededRng rng(4);
  ScalingSeries s;
  s.trials = 8;
  for (double n : doubling(64, 8)) {
    s.n_schedule.push_back(n);
    for (std::size_t t = 0; t < s.trials; ++t) {
      s.samples.push_back({n, 2.0 * std::pow(n, 0.45) * std::exp(0.1 * rng.normal()), t, 0});
    }
  }
  const auto g = global_loglog_fit(s);
  const auto p = pooled_loglog_fit(s);
  CHECK(std::abs(g.alpha - p.alpha) <= p.diagnostics.slope_stderr);
  CHECK(std::abs(g.alpha - 0.45) < 0.05);
}

TEST_CASE("collect_series on simple shapes") {
  ShapeSpec interval;
  interval.variant = Shape::interval;
  const std::vector<std::size_t> ns{10, 50, 200};
  const auto s = collect_series(interval, 0, ns, 4, 77);
  REQUIRE(s.samples.size() == 12);
  for (const auto& smp : s.samples) {
    SeededRng rng(smp.seed);
    const auto cloud = sample(interval, static_cast<std::size_t>(smp.n), rng);
    const auto c = cloud.coords();
    const double span = *std::max_element(c.begin(), c.end()) - *std::min_element(c.begin(), c.end());
    CHECK(smp.ell == doctest::Approx(span).epsilon(1e-12));
    CHECK(smp.ell < 1.0);
    CHECK(smp.seed == derive_seed(77, static_cast<std::uint64_t>(smp.n), smp.trial));
  }
  CHECK(collect_series(interval, 0, ns, 4, 77, {}, 3) == s);

  const std::vector<std::size_t> bad{10, 10};
  CHECK_THROWS_AS(collect_series(interval, 0, bad, 1, 1), ParameterError);
  CHECK_THROWS_AS(collect_series(interval, 0, ns, 0, 1), ParameterError);
}

TEST_CASE("cantor totals approach one from below") {
  ShapeSpec c;
  c.variant = Shape::cantor_set;
  const std::vector<std::size_t> ns{50, 200, 1000};
  const auto s = collect_series(c, 0, ns, 5, 5);
  const auto pts = aggregate_loglog(s);
  for (const auto& smp : s.samples) CHECK(smp.ell < 1.0);
  CHECK(pts.log_ell[0] < pts.log_ell[1]);
  CHECK(pts.log_ell[1] < pts.log_ell[2]);
}

TEST_CASE("square totals grow like sqrt(n)") {
  ShapeSpec sq;
  sq.variant = Shape::square;
  const std::vector<std::size_t> ns{2048, 4096};
  const auto s = collect_series(sq, 0, ns, 10, 9);
  const auto pts = aggregate_loglog(s);
  const double ratio = std::exp(pts.log_ell[1] - pts.log_ell[0]);
  CHECK(ratio > 1.35);
  CHECK(ratio < 1.48);
}

TEST_CASE("higher dimensional totals through the engine") {
  ShapeSpec sq;
  sq.variant = Shape::square;
  const std::vector<std::size_t> ns{20, 40, 80};
  const auto h1 = collect_series(sq, 1, ns, 2, 3);
  for (const auto& smp : h1.samples) {
    CHECK(std::isfinite(smp.ell));
    CHECK(smp.ell >= 0.0);
  }
  PersistenceOptions tiny;
  tiny.max_simplices = 100;
  CHECK_THROWS_AS(collect_series(sq, 1, ns, 1, 3, tiny), ResourceError);
}

TEST_CASE("correlation integral and dimension") {
  const PointCloud two(2, {0, 0, 1, 0});
  const std::vector<double> r{0.5, 2.0};
  const auto c = correlation_integral(two, r);
  CHECK(c[0] == 0.0);
  CHECK(c[1] == 0.5);

  ShapeSpec sq;
  sq.variant = Shape::square;
  SeededRng rng(5);
  const auto cloud = sample(sq, 10000, rng);
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(0.01 * std::pow(10.0, i / 10.0));
  const auto nu = correlation_dimension(cloud, grid);
  CHECK(std::abs(nu.alpha - 2.0) < 0.15);
  CHECK(nu.dimension == nu.alpha);

  std::vector<double> scaled_grid;
  for (double g : grid) scaled_grid.push_back(4.0 * g);
  CHECK(correlation_dimension(cloud.scaled(4.0), scaled_grid).alpha == doctest::Approx(nu.alpha).epsilon(1e-12));

  ShapeSpec line;
  line.variant = Shape::interval;
  const auto pts = sample(line, 10000, rng);
  std::vector<double> g1;
  for (int i = 0; i <= 10; ++i) g1.push_back(0.001 * std::pow(10.0, i / 10.0));
  const auto nu1 = correlation_dimension(pts, g1);
  CHECK(nu1.alpha >= 0.9);
  CHECK(nu1.alpha <= 1.1);
}

TEST_CASE("series csv and slope report") {
  const auto s = power_series(1.5, 0.3, doubling(8, 4), 2);
  std::stringstream ss;
  write_series_csv(ss, s);
  CHECK(ss.str().rfind("hom_dim,n,trial,seed,ell\n", 0) == 0);
  const auto back = read_series_csv(ss);
  CHECK(back == s);

  std::ostringstream rep;
  write_slope_report(rep, "demo", asymptotic_alpha(s));
  const std::string text = rep.str();
  for (const char* key : {"[demo]", "method: asymptotic", "alpha: ", "dimension: ", "window: ", "residual_norm: "}) {
    CHECK(text.find(key) != std::string::npos);
  }
}

}  // TEST_SUITE
