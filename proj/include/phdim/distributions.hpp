#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "phdim/csv.hpp"
#include "phdim/point_cloud.hpp"
#include "phdim/vr_persistence.hpp"

namespace phdim {

/// Step CDF of interval lengths.
struct EmpiricalCDF {
  std::vector<double> sorted_values;
  /// Number of sampled points behind the barcode (drives rescaling).
  std::size_t n_points = 0;
  int hom_dim = 0;
  /// m of the n^(1/m) rescaling; 0 for an unrescaled CDF.
  double rescale_exponent = 0.0;
  /// No intervals at all (possible for hom_dim >= 1); evaluation is undefined.
  bool undefined = false;

  std::size_t count() const { return sorted_values.size(); }
  /// Fraction of values <= t.
  double operator()(double t) const;
};

/// Unrescaled CDF of the given lengths. Throws ParameterError on negative
/// lengths, or on an empty list when hom_dim is 0.
EmpiricalCDF empirical_cdf(std::vector<double> lengths, std::size_t n_points, int hom_dim);

/// Values multiplied by n_points^(1/m). Throws ParameterError if m <= 0 or if
/// the CDF is already rescaled.
EmpiricalCDF rescale(const EmpiricalCDF& cdf, double m);

/// 1 - (1 - t)^n on [0,1], 0 below and 1 above: CDF of Beta(1, n), the law of
/// one reduced H0 interval length of n uniform points on [0,1].
double closed_form_interval_cdf(std::size_t n, double t);

/// max(0, 1 - e^(-t)).
double exponential_limit_cdf(double t);

using AnalyticCdf = std::function<double(double)>;

/// Exact sup |F_a - F_b| over the jump points of both. Throws ParameterError
/// if either is undefined or their rescale exponents differ.
double ks_distance(const EmpiricalCDF& a, const EmpiricalCDF& b);
/// Sup distance to an analytic CDF, checking both sides of every jump.
double ks_distance(const EmpiricalCDF& a, const AnalyticCdf& b);

/// Dvoretzky-Kiefer-Wolfowitz band: P(sup|F_N - F| > eps) <= alpha.
double dkw_epsilon(std::size_t count, double alpha);

/// Positive interval lengths of the hom_dim barcode of a cloud.
std::vector<double> interval_lengths(const PointCloud& cloud, int hom_dim,
                                     const PersistenceOptions& options = {});

/// One sample size n = k * 3^j of the separated Sierpinski probe.
struct CdfFamilySnapshot {
  std::size_t k = 0;
  int j = 0;
  std::size_t n = 0;
  EmpiricalCDF cdf;
};

struct PeriodicProbeOptions {
  int j_min = 1;
  /// Independent samples of size n pooled into each snapshot's CDF.
  std::size_t trials = 1;
  unsigned threads = 1;
  PersistenceOptions persistence;
};

/// For each k and j_min <= j <= j_max, samples n = k 3^j points from the
/// Sierpinski triangle with separation delta and returns the CDF of hom_dim
/// interval lengths rescaled with m = log_{2+delta}(3). Snapshots are ordered
/// by k, then j. Trial t of size n uses derive_seed(master_seed, n, t).
std::vector<CdfFamilySnapshot> periodic_family_probe(double delta, std::span<const std::size_t> k_list,
                                                     int j_max, int hom_dim, std::uint64_t master_seed,
                                                     const PeriodicProbeOptions& options = {});

/// Pairwise KS distances.
std::vector<std::vector<double>> ks_matrix(std::span<const EmpiricalCDF> cdfs);

/// CSV `value,cumulative_probability`, preceded by metadata comment lines.
void write_cdf_csv(std::ostream& out, const EmpiricalCDF& cdf, const Metadata& meta);
EmpiricalCDF read_cdf_csv(std::istream& in);
/// Square KS matrix with a leading `label` column.
void write_ks_matrix_csv(std::ostream& out, std::span<const std::string> labels,
                         const std::vector<std::vector<double>>& matrix, const Metadata& meta);

}  // namespace phdim
