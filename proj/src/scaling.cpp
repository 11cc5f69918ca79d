#include "phdim/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <set>

#include "phdim/csv.hpp"
#include "phdim/errors.hpp"
#include "phdim/parallel.hpp"

namespace phdim {

std::string_view method_name(FitMethod m) {
  switch (m) {
    case FitMethod::global_fit:
      return "global_fit";
    case FitMethod::pooled_fit:
      return "pooled_fit";
    case FitMethod::asymptotic:
      return "asymptotic";
    case FitMethod::correlation:
      return "correlation";
  }
  return "unknown";
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ParameterError("fit_line: size mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw FitError("fit_line: need at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw FitError("fit_line: abscissae are all equal");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    rss += r * r;
  }
  f.residual_norm = std::sqrt(rss);
  f.slope_stderr = n > 2 ? std::sqrt(rss / static_cast<double>(n - 2) / sxx) : 0.0;
  return f;
}

LogLogPoints aggregate_loglog(const ScalingSeries& series, std::vector<std::string>* warnings) {
  std::map<double, std::vector<double>> by_n;
  for (const auto& s : series.samples) by_n[s.n].push_back(s.ell);
  LogLogPoints pts;
  for (const auto& [n, ells] : by_n) {
    const bool has_zero = std::any_of(ells.begin(), ells.end(), [](double e) { return !(e > 0.0); });
    if (has_zero || !(n > 0.0)) {
      if (warnings) warnings->push_back("n=" + format_double(n) + " excluded: zero total length");
      continue;
    }
    double mean = 0.0;
    for (double e : ells) mean += std::log(e);
    mean /= static_cast<double>(ells.size());
    pts.n.push_back(n);
    pts.log_n.push_back(std::log(n));
    pts.log_ell.push_back(mean);
  }
  return pts;
}

std::vector<double> total_lengths(const PointCloud& cloud, int max_hom_dim,
                                  const PersistenceOptions& options) {
  std::vector<double> out(static_cast<std::size_t>(max_hom_dim + 1), 0.0);
  out[0] = total_length(reduced_h0_barcode(cloud));
  if (max_hom_dim >= 1) {
    const auto bars = vr_barcode(distance_matrix(cloud), max_hom_dim, options);
    for (int k = 1; k <= max_hom_dim; ++k) {
      out[static_cast<std::size_t>(k)] = total_length(bars[static_cast<std::size_t>(k)]);
    }
  }
  return out;
}

ScalingSeries collect_series(const ShapeSpec& spec, int hom_dim, std::span<const std::size_t> n_schedule,
                             std::size_t trials, std::uint64_t master_seed,
                             const PersistenceOptions& options, unsigned threads) {
  spec.validate();
  if (trials == 0) throw ParameterError("collect_series: trials must be >= 1");
  if (n_schedule.empty()) throw ParameterError("collect_series: empty n schedule");
  for (std::size_t i = 0; i < n_schedule.size(); ++i) {
    if (n_schedule[i] == 0 || (i > 0 && n_schedule[i] <= n_schedule[i - 1])) {
      throw ParameterError("collect_series: n schedule must be positive and strictly increasing");
    }
  }
  ScalingSeries series;
  series.hom_dim = hom_dim;
  series.trials = trials;
  for (auto n : n_schedule) series.n_schedule.push_back(static_cast<double>(n));
  series.samples.resize(n_schedule.size() * trials);

  parallel_for(series.samples.size(), threads, [&](std::size_t cell) {
    const std::size_t n = n_schedule[cell / trials];
    const std::size_t trial = cell % trials;
    const std::uint64_t seed = derive_seed(master_seed, n, trial);
    SeededRng rng(seed);
    const PointCloud cloud = sample(spec, n, rng);
    const auto ells = total_lengths(cloud, hom_dim, options);
    series.samples[cell] = {static_cast<double>(n), ells[static_cast<std::size_t>(hom_dim)], trial, seed};
  });
  return series;
}

ScalingSeries restrict_series(const ScalingSeries& series, double n_min, double n_max) {
  ScalingSeries out;
  out.hom_dim = series.hom_dim;
  out.trials = series.trials;
  for (double n : series.n_schedule) {
    if (n >= n_min && n <= n_max) out.n_schedule.push_back(n);
  }
  for (const auto& s : series.samples) {
    if (s.n >= n_min && s.n <= n_max) out.samples.push_back(s);
  }
  return out;
}

namespace {

SlopeEstimate finish(FitMethod method, double alpha, double intercept, FitDiagnostics diag) {
  SlopeEstimate e;
  e.alpha = alpha;
  e.intercept = intercept;
  e.dimension = dimension_from_alpha(alpha);
  e.method = method;
  e.diagnostics = std::move(diag);
  return e;
}

}  // namespace

SlopeEstimate global_loglog_fit(const ScalingSeries& series) {
  FitDiagnostics diag;
  const auto pts = aggregate_loglog(series, &diag.warnings);
  if (pts.n.size() < 2) throw FitError("global fit: fewer than two usable sample sizes");
  const LineFit f = fit_line(pts.log_n, pts.log_ell);
  diag.residual_norm = f.residual_norm;
  diag.slope_stderr = f.slope_stderr;
  diag.points_used = pts.n.size();
  diag.window_n_min = pts.n.front();
  diag.window_n_max = pts.n.back();
  return finish(FitMethod::global_fit, f.slope, f.intercept, std::move(diag));
}

SlopeEstimate pooled_loglog_fit(const ScalingSeries& series) {
  FitDiagnostics diag;
  std::vector<double> x, y;
  double lo = 0.0, hi = 0.0;
  for (const auto& s : series.samples) {
    if (!(s.ell > 0.0) || !(s.n > 0.0)) continue;
    if (x.empty() || s.n < lo) lo = s.n;
    if (x.empty() || s.n > hi) hi = s.n;
    x.push_back(std::log(s.n));
    y.push_back(std::log(s.ell));
  }
  if (x.size() < series.samples.size()) {
    diag.warnings.push_back(std::to_string(series.samples.size() - x.size()) +
                            " samples excluded: zero total length");
  }
  if (x.size() < 2) throw FitError("pooled fit: fewer than two usable samples");
  const LineFit f = fit_line(x, y);
  diag.residual_norm = f.residual_norm;
  diag.slope_stderr = f.slope_stderr;
  diag.points_used = x.size();
  diag.window_n_min = lo;
  diag.window_n_max = hi;
  return finish(FitMethod::pooled_fit, f.slope, f.intercept, std::move(diag));
}

std::vector<WindowFit> window_fits(const LogLogPoints& points, std::size_t q) {
  if (q == 0 || q > points.n.size()) {
    throw ParameterError("window_fits: q=" + std::to_string(q) + " outside 1.." +
                         std::to_string(points.n.size()));
  }
  std::vector<WindowFit> out;
  for (std::size_t p = 1; p + kMinWindowLength <= q + 1; ++p) {
    std::span<const double> x(points.log_n.data() + (p - 1), q - p + 1);
    std::span<const double> y(points.log_ell.data() + (p - 1), q - p + 1);
    const LineFit f = fit_line(x, y);
    out.push_back({p, q, f.slope, f.intercept});
  }
  return out;
}

std::vector<WindowFit> window_fits(const ScalingSeries& series, std::size_t q) {
  return window_fits(aggregate_loglog(series), q);
}

LineFit extrapolate_windows(std::span<const WindowFit> windows) {
  std::vector<double> xi, alpha;
  for (const auto& w : windows) {
    xi.push_back(1.0 / static_cast<double>(w.p));
    alpha.push_back(w.alpha_pq);
  }
  return fit_line(xi, alpha);
}

namespace {

SlopeEstimate fall_back_to_global(const ScalingSeries& series, std::vector<WindowFit> windows) {
  SlopeEstimate g = global_loglog_fit(series);
  g.method = FitMethod::asymptotic;
  g.diagnostics.fell_back = true;
  g.diagnostics.windows = std::move(windows);
  g.diagnostics.warnings.push_back("asymptotic fit needs " + std::to_string(kMinAsymptoticWindows) +
                                   " windows; returned the global fit");
  return g;
}

// alpha_{p,q} = a + b/p, returns a
SlopeEstimate extrapolate_in_p(const LogLogPoints& pts, std::vector<WindowFit> windows,
                               FitDiagnostics diag) {
  const LineFit f = extrapolate_windows(windows);
  diag.residual_norm = f.residual_norm;
  diag.slope_stderr = f.slope_stderr;
  diag.points_used = pts.n.size();
  diag.window_n_min = pts.n.front();
  diag.window_n_max = pts.n[windows.front().q - 1];
  // the log-log intercept is reported from the widest window
  const double c = windows.front().intercept_pq;
  diag.windows = std::move(windows);
  return finish(FitMethod::asymptotic, f.intercept, c, std::move(diag));
}

}  // namespace

SlopeEstimate asymptotic_alpha(const ScalingSeries& series) {
  FitDiagnostics diag;
  const auto pts = aggregate_loglog(series, &diag.warnings);
  std::vector<WindowFit> windows;
  if (pts.n.size() >= kMinWindowLength) windows = window_fits(pts, pts.n.size());
  if (windows.size() < kMinAsymptoticWindows) return fall_back_to_global(series, std::move(windows));
  return extrapolate_in_p(pts, std::move(windows), std::move(diag));
}

SlopeEstimate asymptotic_alpha_2d(const ScalingSeries& series, std::span<const std::size_t> q_values) {
  const std::set<std::size_t> qs(q_values.begin(), q_values.end());
  if (qs.empty()) return asymptotic_alpha(series);
  FitDiagnostics diag;
  const auto pts = aggregate_loglog(series, &diag.warnings);
  std::vector<WindowFit> windows;
  for (std::size_t q : qs) {
    if (q < kMinWindowLength) continue;
    auto w = window_fits(pts, q);
    windows.insert(windows.end(), w.begin(), w.end());
  }
  if (windows.size() < kMinAsymptoticWindows) return fall_back_to_global(series, std::move(windows));
  // with one q the 1/q column is constant and absorbed into the intercept
  if (qs.size() == 1) return extrapolate_in_p(pts, std::move(windows), std::move(diag));

  // normal equations for alpha = a + b xi + c eta
  double m[3][3] = {};
  double rhs[3] = {};
  for (const auto& w : windows) {
    const double row[3] = {1.0, 1.0 / static_cast<double>(w.p), 1.0 / static_cast<double>(w.q)};
    for (int i = 0; i < 3; ++i) {
      rhs[i] += row[i] * w.alpha_pq;
      for (int j = 0; j < 3; ++j) m[i][j] += row[i] * row[j];
    }
  }
  auto det3 = [](const double a[3][3]) {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  };
  const double det = det3(m);
  if (!(std::abs(det) > 1e-300)) throw FitError("two-variable extrapolation is rank deficient");
  double coef[3];
  for (int c = 0; c < 3; ++c) {
    double mc[3][3];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) mc[i][j] = (j == c) ? rhs[i] : m[i][j];
    }
    coef[c] = det3(mc) / det;
  }
  double rss = 0.0;
  for (const auto& w : windows) {
    const double r = w.alpha_pq - (coef[0] + coef[1] / static_cast<double>(w.p) +
                                   coef[2] / static_cast<double>(w.q));
    rss += r * r;
  }
  diag.residual_norm = std::sqrt(rss);
  diag.points_used = pts.n.size();
  diag.window_n_min = pts.n.front();
  diag.window_n_max = pts.n[*qs.rbegin() - 1];
  const double c = windows.front().intercept_pq;
  diag.windows = std::move(windows);
  return finish(FitMethod::asymptotic, coef[0], c, std::move(diag));
}

std::vector<double> regular_grid(double start, double stop, double step) {
  if (!(step > 0.0) || !(stop >= start)) throw ParameterError("regular_grid: need step > 0 and stop >= start");
  std::vector<double> g;
  for (std::size_t k = 0;; ++k) {
    const double x = start + static_cast<double>(k) * step;
    if (x > stop + 0.5 * step) break;
    g.push_back(x);
  }
  return g;
}

ScalingSeries synthetic_test_series(std::span<const double> x_grid, double noise_amplitude,
                                    SeededRng& rng) {
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    if (!(x_grid[i] > 0.0) || (i > 0 && !(x_grid[i] > x_grid[i - 1]))) {
      throw ParameterError("synthetic_test_series: grid must be positive and increasing");
    }
  }
  ScalingSeries s;
  s.hom_dim = 0;
  s.trials = 1;
  const double step_sd = x_grid.empty() ? 0.0 : std::sqrt(1.0 / static_cast<double>(x_grid.size()));
  for (double x : x_grid) {
    const double eps = noise_amplitude == 0.0 ? 0.0 : step_sd * rng.normal();
    const double f = (100.0 * x + x * x / 10.0) * (1.0 + noise_amplitude * eps);
    s.n_schedule.push_back(x);
    s.samples.push_back({x, std::max(0.0, f), 0, rng.seed()});
  }
  return s;
}

std::vector<double> correlation_integral(const PointCloud& cloud, std::span<const double> r_grid) {
  const std::size_t n = cloud.size();
  if (n < 2) throw ParameterError("correlation integral: need at least two points");
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    if (!(r_grid[i] > 0.0) || (i > 0 && !(r_grid[i] > r_grid[i - 1]))) {
      throw ParameterError("correlation integral: radii must be positive and increasing");
    }
  }
  std::vector<std::uint64_t> bins(r_grid.size() + 1, 0);
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double d = euclidean_distance(cloud.point(i), cloud.point(j));
      const auto b = std::lower_bound(r_grid.begin(), r_grid.end(), d) - r_grid.begin();
      ++bins[static_cast<std::size_t>(b)];
    }
  }
  std::vector<double> c(r_grid.size());
  std::uint64_t cumulative = 0;
  const double denom = static_cast<double>(n) * static_cast<double>(n);
  for (std::size_t k = 0; k < r_grid.size(); ++k) {
    cumulative += bins[k];
    c[k] = 2.0 * static_cast<double>(cumulative) / denom;
  }
  return c;
}

SlopeEstimate correlation_dimension(const PointCloud& cloud, std::span<const double> r_grid) {
  const auto c = correlation_integral(cloud, r_grid);
  FitDiagnostics diag;
  std::vector<double> x, y;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k] > 0.0) {
      if (x.empty()) diag.window_n_min = r_grid[k];
      diag.window_n_max = r_grid[k];
      x.push_back(std::log(r_grid[k]));
      y.push_back(std::log(c[k]));
    } else {
      diag.warnings.push_back("r=" + format_double(r_grid[k]) + " excluded: no pairs");
    }
  }
  if (x.size() < 2) throw FitError("correlation dimension: fewer than two radii with pairs");
  const LineFit f = fit_line(x, y);
  diag.residual_norm = f.residual_norm;
  diag.slope_stderr = f.slope_stderr;
  diag.points_used = x.size();
  SlopeEstimate e;
  e.alpha = f.slope;
  e.intercept = f.intercept;
  e.dimension = f.slope;
  e.method = FitMethod::correlation;
  e.diagnostics = std::move(diag);
  return e;
}

void write_series_csv(std::ostream& out, const ScalingSeries& series) {
  out << "hom_dim,n,trial,seed,ell\n";
  for (const auto& s : series.samples) {
    out << series.hom_dim << ',' << format_double(s.n) << ',' << s.trial << ',' << s.seed << ','
        << format_double(s.ell) << '\n';
  }
}

ScalingSeries read_series_csv(std::istream& in) {
  const CsvTable t = read_csv(in);
  const auto hd = t.column("hom_dim"), nc = t.column("n"), tc = t.column("trial"),
             sc = t.column("seed"), ec = t.column("ell");
  ScalingSeries s;
  std::set<double> ns;
  std::size_t max_trial = 0;
  for (const auto& row : t.rows) {
    if (row.size() < t.header.size()) throw ParameterError("series csv: short row");
    s.hom_dim = std::stoi(row[hd]);
    ScalingSample smp{std::stod(row[nc]), std::stod(row[ec]), std::stoul(row[tc]), std::stoull(row[sc])};
    ns.insert(smp.n);
    max_trial = std::max(max_trial, smp.trial);
    s.samples.push_back(smp);
  }
  s.n_schedule.assign(ns.begin(), ns.end());
  s.trials = s.samples.empty() ? 1 : max_trial + 1;
  return s;
}

void write_slope_report(std::ostream& out, const std::string& label, const SlopeEstimate& est) {
  const auto& d = est.diagnostics;
  out << "[" << label << "]\n";
  out << "method: " << method_name(est.method) << '\n';
  out << "alpha: " << format_double(est.alpha) << '\n';
  out << "dimension: " << format_double(est.dimension) << '\n';
  out << "intercept: " << format_double(est.intercept) << '\n';
  out << "window: " << format_double(d.window_n_min) << ".." << format_double(d.window_n_max) << '\n';
  out << "points_used: " << d.points_used << '\n';
  out << "residual_norm: " << format_double(d.residual_norm) << '\n';
  out << "slope_stderr: " << format_double(d.slope_stderr) << '\n';
  out << "fell_back: " << (d.fell_back ? "true" : "false") << '\n';
  for (const auto& w : d.windows) {
    out << "window_fit: p=" << w.p << " q=" << w.q << " alpha=" << format_double(w.alpha_pq)
        << " intercept=" << format_double(w.intercept_pq) << '\n';
  }
  for (const auto& w : d.warnings) out << "warning: " << w << '\n';
  out << '\n';
}

}  // namespace phdim
