#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "phdim/geometry_sampler.hpp"
#include "phdim/point_cloud.hpp"
#include "phdim/rng.hpp"
#include "phdim/vr_persistence.hpp"

namespace phdim {

/// One measurement L^i(X_n).
struct ScalingSample {
  double n = 0.0;  ///< sample size (the abscissa; real-valued for synthetic data)
  double ell = 0.0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const ScalingSample&, const ScalingSample&) = default;
};

struct ScalingSeries {
  int hom_dim = 0;
  std::vector<ScalingSample> samples;
  std::vector<double> n_schedule;
  std::size_t trials = 1;

  friend bool operator==(const ScalingSeries&, const ScalingSeries&) = default;
};

enum class FitMethod { global_fit, pooled_fit, asymptotic, correlation };
std::string_view method_name(FitMethod m);

/// Least-squares slope/intercept on the log-log points with 1-based indices p..q.
struct WindowFit {
  std::size_t p = 0;
  std::size_t q = 0;
  double alpha_pq = 0.0;
  double intercept_pq = 0.0;
};

struct FitDiagnostics {
  double residual_norm = 0.0;
  double slope_stderr = 0.0;
  std::size_t points_used = 0;
  double window_n_min = 0.0;
  double window_n_max = 0.0;
  std::vector<WindowFit> windows;
  /// asymptotic_alpha could not extrapolate and returned the global fit.
  bool fell_back = false;
  std::vector<std::string> warnings;
};

struct SlopeEstimate {
  double alpha = 0.0;
  double intercept = 0.0;
  /// 1/(1 - alpha); +infinity when alpha >= 1.
  double dimension = 0.0;
  FitMethod method = FitMethod::global_fit;
  FitDiagnostics diagnostics;
};

inline double dimension_from_alpha(double alpha) {
  return alpha < 1.0 ? 1.0 / (1.0 - alpha) : std::numeric_limits<double>::infinity();
}
inline double alpha_from_dimension(double d) { return (d - 1.0) / d; }

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_norm = 0.0;
  double slope_stderr = 0.0;
};

/// Ordinary least squares y = intercept + slope x. Needs two distinct x values.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// (log n, mean over trials of log ell) in increasing n. Sizes where some
/// trial has ell = 0 are dropped and reported in `warnings`.
struct LogLogPoints {
  std::vector<double> n;
  std::vector<double> log_n;
  std::vector<double> log_ell;
};
LogLogPoints aggregate_loglog(const ScalingSeries& series, std::vector<std::string>* warnings = nullptr);

/// L^{hom_dim} of fresh samples for every (n, trial). The cell seed is
/// derive_seed(master_seed, n, trial), and the cloud is drawn from
/// SeededRng(cell_seed). Cells may run on several threads; the result does
/// not depend on the thread count.
ScalingSeries collect_series(const ShapeSpec& spec, int hom_dim, std::span<const std::size_t> n_schedule,
                             std::size_t trials, std::uint64_t master_seed,
                             const PersistenceOptions& options = {}, unsigned threads = 1);

/// Total lengths L^0..L^max_hom_dim of one cloud. H0 goes through the
/// coordinate MST; higher dimensions through vr_barcode.
std::vector<double> total_lengths(const PointCloud& cloud, int max_hom_dim,
                                  const PersistenceOptions& options = {});

/// OLS on (log n, mean log ell); alpha is the slope.
/// Samples with n_min <= n <= n_max (schedule trimmed to match).
ScalingSeries restrict_series(const ScalingSeries& series, double n_min, double n_max);

SlopeEstimate global_loglog_fit(const ScalingSeries& series);

/// OLS on every (log n, log ell) sample without averaging over trials.
SlopeEstimate pooled_loglog_fit(const ScalingSeries& series);

/// Fits on windows p..q of the aggregated log-log points for every p with
/// q - p + 1 >= 3. q is a 1-based index.
std::vector<WindowFit> window_fits(const ScalingSeries& series, std::size_t q);
std::vector<WindowFit> window_fits(const LogLogPoints& points, std::size_t q);

inline constexpr std::size_t kMinWindowLength = 3;
inline constexpr std::size_t kMinAsymptoticWindows = 4;

/// Fixes q at the last point, regresses alpha_{p,q} linearly on 1/p and
/// returns the intercept at 1/p = 0. Falls back to the global fit (with
/// diagnostics.fell_back set) when fewer than 4 windows exist.
/// Regression of alpha_pq on 1/p; the intercept is the extrapolated alpha.
LineFit extrapolate_windows(std::span<const WindowFit> windows);

SlopeEstimate asymptotic_alpha(const ScalingSeries& series);

/// Two-variable extrapolation alpha_{p,q} ~ a + b/p + c/q over the windows
/// of every q in q_values; returns a. With a single q this is asymptotic_alpha.
SlopeEstimate asymptotic_alpha_2d(const ScalingSeries& series, std::span<const std::size_t> q_values);

/// (x, f(x)) with f(x) = (100x + x^2/10)(1 + amplitude * eps(x)), where eps
/// are the increments of a standard Wiener path on [0,1] observed at the
/// grid points (independent N(0, 1/N) for N grid points). Negative values
/// are clamped to zero.
ScalingSeries synthetic_test_series(std::span<const double> x_grid, double noise_amplitude,
                                    SeededRng& rng);

/// Regular grid start, start+step, ..., up to and including stop (within step/2).
std::vector<double> regular_grid(double start, double stop, double step);

/// Correlation integral C(r) = #{ordered pairs i != j : |x_i - x_j| <= r} / n^2
/// on the grid. Pairs are counted once per unordered pair and doubled.
std::vector<double> correlation_integral(const PointCloud& cloud, std::span<const double> r_grid);

/// Slope of log C(r) against log r. Radii with C(r) = 0 are skipped.
/// alpha and dimension both hold the correlation dimension.
SlopeEstimate correlation_dimension(const PointCloud& cloud, std::span<const double> r_grid);

/// CSV `hom_dim,n,trial,seed,ell`.
void write_series_csv(std::ostream& out, const ScalingSeries& series);
ScalingSeries read_series_csv(std::istream& in);

/// Structured text block: method, alpha, dimension, window, residual, windows.
void write_slope_report(std::ostream& out, const std::string& label, const SlopeEstimate& est);

}  // namespace phdim
