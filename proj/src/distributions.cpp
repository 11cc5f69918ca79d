#include "phdim/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

#include "phdim/errors.hpp"
#include "phdim/geometry_sampler.hpp"
#include "phdim/parallel.hpp"
#include "phdim/rng.hpp"

namespace phdim {

double EmpiricalCDF::operator()(double t) const {
  if (undefined) throw ParameterError("empirical CDF is undefined (no intervals)");
  const auto k = std::upper_bound(sorted_values.begin(), sorted_values.end(), t) - sorted_values.begin();
  return static_cast<double>(k) / static_cast<double>(sorted_values.size());
}

EmpiricalCDF empirical_cdf(std::vector<double> lengths, std::size_t n_points, int hom_dim) {
  for (double l : lengths) {
    if (!(l >= 0.0) || !std::isfinite(l)) throw ParameterError("empirical_cdf: lengths must be finite and >= 0");
  }
  EmpiricalCDF cdf;
  cdf.n_points = n_points;
  cdf.hom_dim = hom_dim;
  if (lengths.empty()) {
    if (hom_dim == 0) throw ParameterError("empirical_cdf: no H0 intervals");
    cdf.undefined = true;
    return cdf;
  }
  std::sort(lengths.begin(), lengths.end());
  cdf.sorted_values = std::move(lengths);
  return cdf;
}

EmpiricalCDF rescale(const EmpiricalCDF& cdf, double m) {
  if (!(m > 0.0)) throw ParameterError("rescale: exponent m must be positive");
  if (cdf.rescale_exponent != 0.0) throw ParameterError("rescale: CDF is already rescaled");
  EmpiricalCDF out = cdf;
  const double factor = std::pow(static_cast<double>(cdf.n_points), 1.0 / m);
  for (double& v : out.sorted_values) v *= factor;
  out.rescale_exponent = m;
  return out;
}

double closed_form_interval_cdf(std::size_t n, double t) {
  if (n == 0) throw ParameterError("closed_form_interval_cdf: n must be >= 1");
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return std::clamp(-std::expm1(static_cast<double>(n) * std::log1p(-t)), 0.0, 1.0);
}

double exponential_limit_cdf(double t) { return t <= 0.0 ? 0.0 : -std::expm1(-t); }

double ks_distance(const EmpiricalCDF& a, const EmpiricalCDF& b) {
  if (a.undefined || b.undefined) throw ParameterError("ks_distance: undefined CDF");
  if (a.rescale_exponent != b.rescale_exponent) {
    throw ParameterError("ks_distance: CDFs have different rescaling");
  }
  const auto& x = a.sorted_values;
  const auto& y = b.sorted_values;
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  // both CDFs are constant between consecutive jump points
  while (i < x.size() || j < y.size()) {
    double t;
    if (j >= y.size() || (i < x.size() && x[i] <= y[j])) {
      t = x[i];
    } else {
      t = y[j];
    }
    while (i < x.size() && x[i] <= t) ++i;
    while (j < y.size() && y[j] <= t) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return d;
}

double ks_distance(const EmpiricalCDF& a, const AnalyticCdf& b) {
  if (a.undefined) throw ParameterError("ks_distance: undefined CDF");
  const auto& x = a.sorted_values;
  const double nx = static_cast<double>(x.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < x.size()) {
    const double t = x[i];
    const double below = static_cast<double>(i) / nx;
    while (i < x.size() && x[i] == t) ++i;
    const double at = static_cast<double>(i) / nx;
    const double left = b(std::nextafter(t, -std::numeric_limits<double>::infinity()));
    d = std::max({d, std::abs(at - b(t)), std::abs(below - left)});
  }
  return d;
}

double dkw_epsilon(std::size_t count, double alpha) {
  if (count == 0 || !(alpha > 0.0) || !(alpha < 1.0)) throw ParameterError("dkw_epsilon: bad arguments");
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(count)));
}

std::vector<double> interval_lengths(const PointCloud& cloud, int hom_dim, const PersistenceOptions& options) {
  if (hom_dim == 0) return reduced_h0_barcode(cloud).lengths();
  const auto bars = vr_barcode(distance_matrix(cloud), hom_dim, options);
  return bars[static_cast<std::size_t>(hom_dim)].lengths();
}

std::vector<CdfFamilySnapshot> periodic_family_probe(double delta, std::span<const std::size_t> k_list,
                                                     int j_max, int hom_dim, std::uint64_t master_seed,
                                                     const PeriodicProbeOptions& options) {
  if (!(delta > 0.0)) throw ParameterError("periodic_family_probe: delta must be > 0");
  if (options.j_min < 0 || j_max < options.j_min) throw ParameterError("periodic_family_probe: bad j range");
  if (options.trials == 0) throw ParameterError("periodic_family_probe: trials must be >= 1");
  ShapeSpec spec;
  spec.variant = Shape::sierpinski;
  spec.delta = delta;
  const double m = std::log(3.0) / std::log(2.0 + delta);

  struct Cell {
    std::size_t k;
    int j;
    std::size_t n;
  };
  std::vector<Cell> cells;
  for (std::size_t k : k_list) {
    if (k == 0) throw ParameterError("periodic_family_probe: k must be positive");
    for (int j = options.j_min; j <= j_max; ++j) {
      const double n = static_cast<double>(k) * std::pow(3.0, j);
      if (n > 1e9) throw ResourceError("periodic_family_probe: sample size k*3^j too large");
      cells.push_back({k, j, static_cast<std::size_t>(n)});
    }
  }
  const std::size_t trials = options.trials;
  std::vector<std::vector<double>> lengths(cells.size() * trials);
  parallel_for(lengths.size(), options.threads, [&](std::size_t idx) {
    const Cell& c = cells[idx / trials];
    const std::size_t t = idx % trials;
    SeededRng rng(derive_seed(master_seed, c.n, t));
    lengths[idx] = interval_lengths(sample(spec, c.n, rng), hom_dim, options.persistence);
  });

  std::vector<CdfFamilySnapshot> out;
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    std::vector<double> pooled;
    for (std::size_t t = 0; t < trials; ++t) {
      auto& l = lengths[ci * trials + t];
      pooled.insert(pooled.end(), l.begin(), l.end());
    }
    const auto raw = empirical_cdf(std::move(pooled), cells[ci].n, hom_dim);
    EmpiricalCDF cdf = raw;
    if (raw.undefined) {
      cdf.rescale_exponent = m;
    } else {
      cdf = rescale(raw, m);
    }
    out.push_back({cells[ci].k, cells[ci].j, cells[ci].n, std::move(cdf)});
  }
  return out;
}

std::vector<std::vector<double>> ks_matrix(std::span<const EmpiricalCDF> cdfs) {
  std::vector<std::vector<double>> m(cdfs.size(), std::vector<double>(cdfs.size(), 0.0));
  for (std::size_t i = 0; i < cdfs.size(); ++i) {
    for (std::size_t j = i + 1; j < cdfs.size(); ++j) {
      const bool usable = !cdfs[i].undefined && !cdfs[j].undefined;
      m[i][j] = m[j][i] = usable ? ks_distance(cdfs[i], cdfs[j]) : std::numeric_limits<double>::quiet_NaN();
    }
  }
  return m;
}

void write_cdf_csv(std::ostream& out, const EmpiricalCDF& cdf, const Metadata& meta) {
  Metadata all = meta;
  all.emplace_back("n", std::to_string(cdf.n_points));
  all.emplace_back("hom_dim", std::to_string(cdf.hom_dim));
  all.emplace_back("m", format_double(cdf.rescale_exponent));
  all.emplace_back("count", std::to_string(cdf.count()));
  if (cdf.undefined) all.emplace_back("undefined", "true");
  write_metadata(out, all);
  out << "value,cumulative_probability\n";
  const double total = static_cast<double>(cdf.count());
  for (std::size_t i = 0; i < cdf.count(); ++i) {
    out << format_double(cdf.sorted_values[i]) << ','
        << format_double(static_cast<double>(i + 1) / total) << '\n';
  }
}

EmpiricalCDF read_cdf_csv(std::istream& in) {
  const CsvTable t = read_csv(in);
  EmpiricalCDF cdf;
  for (const auto& [k, v] : t.metadata) {
    if (k == "n") cdf.n_points = std::stoul(v);
    if (k == "hom_dim") cdf.hom_dim = std::stoi(v);
    if (k == "m") cdf.rescale_exponent = std::stod(v);
    if (k == "undefined") cdf.undefined = (v == "true");
  }
  const auto vc = t.column("value");
  for (const auto& row : t.rows) cdf.sorted_values.push_back(std::stod(row.at(vc)));
  std::sort(cdf.sorted_values.begin(), cdf.sorted_values.end());
  return cdf;
}

void write_ks_matrix_csv(std::ostream& out, std::span<const std::string> labels,
                         const std::vector<std::vector<double>>& matrix, const Metadata& meta) {
  write_metadata(out, meta);
  out << "label";
  for (const auto& l : labels) out << ',' << l;
  out << '\n';
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    out << labels[i];
    for (double v : matrix[i]) out << ',' << format_double(v);
    out << '\n';
  }
}

}  // namespace phdim
