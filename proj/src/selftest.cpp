#include "phdim/selftest.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "phdim/distributions.hpp"
#include "phdim/geometry_sampler.hpp"
#include "phdim/mst.hpp"
#include "phdim/rng.hpp"
#include "phdim/scaling.hpp"
#include "phdim/vr_persistence.hpp"

namespace phdim {

std::vector<double> synthetic_restricted_grid() { return regular_grid(19000, 20000, 100); }
std::vector<double> synthetic_full_grid() { return regular_grid(400, 20000, 2800); }

namespace {

void corrupt(std::vector<Barcode>& bars) {
  for (auto& b : bars) {
    if (!b.intervals.empty()) {
      b.intervals.back().death = std::nextafter(b.intervals.back().death, 1e300);
      return;
    }
  }
}

SelftestCase oracle_suite(const SelftestOptions& opt) {
  SelftestCase c{"vr engine matches brute force (200 clouds, dims 0-2)", true, ""};
  SeededRng master(opt.seed, 1);
  for (int t = 0; t < 200; ++t) {
    SeededRng rng = master.split(static_cast<std::uint64_t>(t));
    ShapeSpec spec;
    spec.variant = t % 2 ? Shape::cube : Shape::square;
    const std::size_t n = 3 + rng.uniform_int(12);
    const DistanceMatrix d = distance_matrix(sample(spec, n, rng));
    auto fast = vr_barcode(d, 2);
    if (opt.perturb_engine) corrupt(fast);
    if (fast != brute_force_barcode(d, 2)) {
      c.passed = false;
      c.detail = "mismatch on cloud " + std::to_string(t) + " (n=" + std::to_string(n) + ")";
      return c;
    }
  }
  c.detail = "200/200 equal";
  return c;
}

SelftestCase mst_suite(const SelftestOptions& opt) {
  SelftestCase c{"H0 lengths equal MST edge lengths (50 clouds)", true, ""};
  SeededRng master(opt.seed, 2);
  for (int t = 0; t < 50; ++t) {
    SeededRng rng = master.split(static_cast<std::uint64_t>(t));
    ShapeSpec spec;
    spec.variant = Shape::disk;
    const std::size_t n = 2 + rng.uniform_int(150);
    const PointCloud cloud = sample(spec, n, rng);
    auto bars = vr_barcode(distance_matrix(cloud), 0);
    if (opt.perturb_engine) corrupt(bars);
    const auto mst = mst_interval_lengths(distance_matrix(cloud));
    std::vector<double> positive;
    for (double l : mst) {
      if (l > 0) positive.push_back(l);
    }
    if (bars[0].lengths() != positive) {
      c.passed = false;
      c.detail = "mismatch on cloud " + std::to_string(t);
      return c;
    }
  }
  c.detail = "50/50 equal";
  return c;
}

SelftestCase closed_form_suite(const SelftestOptions& opt) {
  SelftestCase c{"interval H0 lengths follow 1-(1-t)^100", false, ""};
  ShapeSpec spec;
  spec.variant = Shape::interval;
  std::vector<double> pooled;
  SeededRng master(opt.seed, 3);
  for (std::uint64_t t = 0; pooled.size() < 10000; ++t) {
    SeededRng rng = master.split(t);
    const auto l = interval_lengths(sample(spec, 100, rng), 0);
    pooled.insert(pooled.end(), l.begin(), l.end());
  }
  const auto cdf = empirical_cdf(pooled, 100, 0);
  const double ks = ks_distance(cdf, AnalyticCdf([](double t) { return closed_form_interval_cdf(100, t); }));
  const double eps = dkw_epsilon(cdf.count(), 1e-3);
  const double v = closed_form_interval_cdf(10, 0.1);
  c.passed = ks < eps && std::abs(v - (1.0 - std::pow(0.9, 10))) < 1e-12;
  std::ostringstream s;
  s << "ks=" << ks << " band=" << eps << " F_10(0.1)=" << v;
  c.detail = s.str();
  return c;
}

SelftestCase synthetic_suite(const SelftestOptions& opt) {
  SelftestCase c{"synthetic power law recovers restricted and asymptotic exponents", false, ""};
  SeededRng rng(opt.seed, 4);
  const auto restricted_grid = synthetic_restricted_grid();
  const auto full_grid = synthetic_full_grid();
  const double restricted = global_loglog_fit(synthetic_test_series(restricted_grid, 0.0, rng)).alpha;
  const double asymptotic = asymptotic_alpha(synthetic_test_series(full_grid, 0.0, rng)).alpha;
  c.passed = std::abs(restricted - 1.9393) <= 0.02 && std::abs(asymptotic - 2.0) <= 0.03;
  std::ostringstream s;
  s << "restricted=" << restricted << " asymptotic=" << asymptotic;
  c.detail = s.str();
  return c;
}

}  // namespace

std::vector<SelftestCase> run_selftest(const SelftestOptions& options) {
  return {oracle_suite(options), mst_suite(options), closed_form_suite(options), synthetic_suite(options)};
}

bool print_selftest(std::ostream& out, const std::vector<SelftestCase>& cases) {
  bool ok = true;
  for (const auto& c : cases) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    ok = ok && c.passed;
  }
  out << (ok ? "selftest passed\n" : "selftest FAILED\n");
  return ok;
}

}  // namespace phdim
