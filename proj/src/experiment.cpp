#include "phdim/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>

#include "json.hpp"

#include "phdim/csv.hpp"
#include "phdim/distributions.hpp"
#include "phdim/errors.hpp"
#include "phdim/parallel.hpp"
#include "phdim/rng.hpp"
#include "phdim/scaling.hpp"
#include "phdim/vr_persistence.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace phdim {

std::string CellKey::id() const { return tag + "_n" + std::to_string(n) + "_t" + std::to_string(trial); }

double default_rescale_exponent(const ShapeSpec& spec) {
  const double cantor = std::log(2.0) / std::log(3.0);
  switch (spec.variant) {
    case Shape::interval:
    case Shape::arrowhead:
      return 1.0;
    case Shape::disk:
    case Shape::square:
    case Shape::triangle:
    case Shape::torus:
    case Shape::beta_square:
      return 2.0;
    case Shape::cube:
      return 3.0;
    case Shape::cantor_set:
      return cantor;
    case Shape::cantor_cross_interval:
      return 1.0 + cantor;
    case Shape::cantor_dust_2d:
      return 2.0 * cantor;
    case Shape::cantor_dust_3d:
      return 3.0 * cantor;
    case Shape::sierpinski:
      return std::log(3.0) / std::log(2.0 + spec.delta);
  }
  throw ParameterError("unknown shape");
}

// ---- manifest ----

std::string RunManifest::to_json() const {
  json cells_j = json::array();
  for (const auto& c : cells) {
    cells_j.push_back({{"id", c.id},
                       {"tag", c.tag},
                       {"n", c.n},
                       {"trial", c.trial},
                       {"seed", c.seed},
                       {"seconds", c.seconds},
                       {"ell", c.ell},
                       {"data_file", c.data_file}});
  }
  json j{{"command", command},
         {"config_hash", config_hash},
         {"tool_version", tool_version},
         {"cells", cells_j},
         {"files", files}};
  return j.dump(2);
}

RunManifest RunManifest::from_json(const std::string& text) {
  RunManifest m;
  try {
    const json j = json::parse(text);
    m.command = j.at("command").get<std::string>();
    m.config_hash = j.at("config_hash").get<std::string>();
    m.tool_version = j.at("tool_version").get<std::string>();
    for (const auto& c : j.at("cells")) {
      CellRecord r;
      r.id = c.at("id").get<std::string>();
      r.tag = c.at("tag").get<std::string>();
      r.n = c.at("n").get<std::size_t>();
      r.trial = c.at("trial").get<std::size_t>();
      r.seed = c.at("seed").get<std::uint64_t>();
      r.seconds = c.at("seconds").get<double>();
      r.ell = c.at("ell").get<std::vector<double>>();
      r.data_file = c.at("data_file").get<std::string>();
      m.cells.push_back(std::move(r));
    }
    m.files = j.at("files").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw ParameterError(std::string("manifest: ") + e.what());
  }
  return m;
}

std::string manifest_path(const std::string& dir, const std::string& command) {
  return (fs::path(dir) / ("manifest_" + command + ".json")).string();
}

RunManifest read_manifest(const std::string& dir, const std::string& command) {
  std::ifstream in(manifest_path(dir, command));
  if (!in) return {};
  std::stringstream ss;
  ss << in.rdbuf();
  return RunManifest::from_json(ss.str());
}

namespace {

void prepare_output_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path probe = fs::path(dir) / ".phdim_probe";
  std::ofstream out(probe);
  if (ec || !out) throw ResourceError("output directory '" + dir + "' is not writable");
  out.close();
  fs::remove(probe, ec);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ResourceError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw ResourceError("write failed for '" + path.string() + "'");
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ResourceError("cannot read '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string lengths_to_csv(const std::vector<std::vector<double>>& lengths) {
  std::ostringstream out;
  out << "hom_dim,length\n";
  for (std::size_t d = 0; d < lengths.size(); ++d) {
    for (double v : lengths[d]) out << d << ',' << format_double(v) << '\n';
  }
  return out.str();
}

std::vector<std::vector<double>> lengths_from_csv(const std::string& text, std::size_t dims) {
  std::istringstream in(text);
  const CsvTable t = read_csv(in);
  const auto hc = t.column("hom_dim"), lc = t.column("length");
  std::vector<std::vector<double>> out(dims);
  for (const auto& row : t.rows) {
    const auto d = std::stoul(row.at(hc));
    if (d >= dims) throw ParameterError("cell file has unexpected hom_dim");
    out[d].push_back(std::stod(row.at(lc)));
  }
  return out;
}

PersistenceOptions persistence_options(const ExperimentConfig& cfg) {
  PersistenceOptions o;
  o.max_simplices = cfg.caps.max_simplices;
  if (cfg.caps.max_cell_seconds > 0) {
    o.deadline = std::chrono::steady_clock::now() +
                 std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                     std::chrono::duration<double>(cfg.caps.max_cell_seconds));
  }
  return o;
}

Metadata base_metadata(const ExperimentConfig& cfg, const std::string& hash) {
  return {{"tool_version", kToolVersion}, {"config_hash", hash}, {"seed", std::to_string(cfg.master_seed)}};
}

/// Schedules cells over the worker pool; the manifest is the single collector
/// and is rewritten after every finished cell.
class CellRunner {
 public:
  CellRunner(const ExperimentConfig& cfg, std::string command) : cfg_(cfg), dir_(cfg.output_dir) {
    cfg_.validate();
    prepare_output_dir(dir_);
    manifest_.command = std::move(command);
    manifest_.config_hash = config_hash(cfg_);
    manifest_.tool_version = kToolVersion;
    const RunManifest old = read_manifest(dir_, manifest_.command);
    if (old.config_hash == manifest_.config_hash && old.tool_version == manifest_.tool_version) {
      for (const auto& c : old.cells) previous_[c.id] = c;
    }
  }

  const std::string& hash() const { return manifest_.config_hash; }
  const fs::path& dir() const { return dir_; }

  std::vector<CellRecord> run(const std::vector<CellKey>& keys, bool keep_lengths,
                              const std::function<CellRecord(const CellKey&)>& compute) {
    std::vector<CellRecord> out(keys.size());
    std::vector<std::size_t> pending;
    const std::size_t dims = static_cast<std::size_t>(cfg_.max_hom_dim()) + 1;
    for (std::size_t i = 0; i < keys.size(); ++i) {
      auto it = previous_.find(keys[i].id());
      if (it != previous_.end() && it->second.seed == keys[i].seed && reload(it->second, keep_lengths, dims)) {
        out[i] = it->second;
        record(out[i]);
        ++reused_;
      } else {
        pending.push_back(i);
      }
    }
    parallel_for(pending.size(), cfg_.threads, [&](std::size_t p) {
      const CellKey& key = keys[pending[p]];
      const auto t0 = std::chrono::steady_clock::now();
      CellRecord rec;
      try {
        rec = compute(key);
      } catch (const ResourceError& e) {
        throw ResourceError("cell " + key.id() + ": " + e.what());
      } catch (const UnsupportedError& e) {
        throw UnsupportedError("cell " + key.id() + ": " + e.what());
      } catch (const ParameterError& e) {
        throw ParameterError("cell " + key.id() + ": " + e.what());
      } catch (const std::exception& e) {
        throw std::runtime_error("cell " + key.id() + ": " + e.what());
      }
      rec.id = key.id();
      rec.tag = key.tag;
      rec.n = key.n;
      rec.trial = key.trial;
      rec.seed = key.seed;
      rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (keep_lengths) {
        rec.data_file = "cells/" + rec.id + ".csv";
        fs::create_directories(dir_ / "cells");
        write_text(dir_ / rec.data_file, lengths_to_csv(rec.lengths));
      }
      out[pending[p]] = rec;
      std::lock_guard lock(mu_);
      record(rec);
      ++computed_;
      write_manifest();
    });
    std::lock_guard lock(mu_);
    write_manifest();
    return out;
  }

  void write(const std::string& name, const std::string& text) {
    write_text(dir_ / name, text);
    std::lock_guard lock(mu_);
    if (std::find(manifest_.files.begin(), manifest_.files.end(), name) == manifest_.files.end()) {
      manifest_.files.push_back(name);
    }
  }

  RunReport finish() {
    std::lock_guard lock(mu_);
    std::sort(manifest_.cells.begin(), manifest_.cells.end(),
              [](const CellRecord& a, const CellRecord& b) { return a.id < b.id; });
    write_manifest();
    RunReport r;
    r.output_dir = dir_.string();
    r.files = manifest_.files;
    r.cells_computed = computed_;
    r.cells_reused = reused_;
    return r;
  }

 private:
  bool reload(CellRecord& rec, bool keep_lengths, std::size_t dims) const {
    if (rec.ell.size() < dims) return false;
    if (!keep_lengths) return true;
    if (rec.data_file.empty() || !fs::exists(dir_ / rec.data_file)) return false;
    rec.lengths = lengths_from_csv(read_text(dir_ / rec.data_file), rec.ell.size());
    return true;
  }

  void record(const CellRecord& rec) {
    CellRecord slim = rec;
    slim.lengths.clear();
    manifest_.cells.push_back(std::move(slim));
  }

  void write_manifest() { write_text(manifest_path(dir_.string(), manifest_.command), manifest_.to_json() + "\n"); }

  ExperimentConfig cfg_;
  fs::path dir_;
  RunManifest manifest_;
  std::map<std::string, CellRecord> previous_;
  std::mutex mu_;
  std::size_t computed_ = 0;
  std::size_t reused_ = 0;
};

std::vector<std::vector<double>> cell_lengths(const PointCloud& cloud, int max_dim, const PersistenceOptions& o) {
  std::vector<std::vector<double>> lengths(static_cast<std::size_t>(max_dim) + 1);
  lengths[0] = reduced_h0_barcode(cloud).lengths();
  if (max_dim >= 1) {
    const auto bars = vr_barcode(distance_matrix(cloud), max_dim, o);
    for (int d = 1; d <= max_dim; ++d) lengths[static_cast<std::size_t>(d)] = bars[static_cast<std::size_t>(d)].lengths();
  }
  return lengths;
}

std::vector<double> sums(const std::vector<std::vector<double>>& lengths) {
  std::vector<double> ell;
  for (const auto& l : lengths) {
    std::vector<double> sorted = l;
    std::sort(sorted.begin(), sorted.end());
    double s = 0.0;
    for (double v : sorted) s += v;
    ell.push_back(s);
  }
  return ell;
}

std::vector<CellKey> schedule_cells(const std::string& tag, std::uint64_t seed_root,
                                    const std::vector<std::size_t>& ns, std::size_t trials) {
  std::vector<CellKey> keys;
  for (auto n : ns) {
    for (std::size_t t = 0; t < trials; ++t) keys.push_back({tag, n, t, derive_seed(seed_root, n, t)});
  }
  return keys;
}

ScalingSeries series_from_cells(const std::vector<CellRecord>& cells, int hom_dim, std::size_t trials) {
  ScalingSeries s;
  s.hom_dim = hom_dim;
  s.trials = trials;
  for (const auto& c : cells) {
    const double n = static_cast<double>(c.n);
    if (s.n_schedule.empty() || s.n_schedule.back() != n) s.n_schedule.push_back(n);
    s.samples.push_back({n, c.ell.at(static_cast<std::size_t>(hom_dim)), c.trial, c.seed});
  }
  return s;
}

std::string series_csv(const ScalingSeries& s, Metadata meta) {
  std::ostringstream out;
  write_metadata(out, meta);
  write_series_csv(out, s);
  return out.str();
}

void check_increasing(const std::vector<std::size_t>& ns) {
  for (std::size_t i = 1; i < ns.size(); ++i) {
    if (ns[i] <= ns[i - 1]) throw ParameterError("n_schedule must be strictly increasing");
  }
}

std::string nan_or(double v) { return std::isfinite(v) ? format_double(v) : (std::isinf(v) ? "inf" : "nan"); }

// ---- plot scripts (matplotlib) ----

const char* kPlotDimension = R"py(import glob, os
import numpy as np
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
fig, ax = plt.subplots()
for path in sorted(glob.glob(os.path.join(here, "series_h*.csv"))):
    data = np.genfromtxt(path, delimiter=",", names=True, comments="#")
    ns = np.unique(data["n"])
    keep = [n for n in ns if np.all(data["ell"][data["n"] == n] > 0)]
    y = [np.mean(np.log(data["ell"][data["n"] == n])) for n in keep]
    label = os.path.basename(path)[:-4]
    ax.plot(np.log(keep), y, "o-", label=label)
ax.set_xlabel("log n")
ax.set_ylabel("mean log L")
ax.legend()
fig.savefig(os.path.join(here, "dimension.png"), dpi=150)
)py";

const char* kPlotCdf = R"py(import glob, os
import numpy as np
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
fig, ax = plt.subplots()
for path in sorted(glob.glob(os.path.join(here, "cdf_*.csv"))):
    data = np.genfromtxt(path, delimiter=",", names=True, comments="#")
    if data.size == 0:
        continue
    data = np.atleast_1d(data)
    ax.step(data["value"], data["cumulative_probability"], where="post",
            label=os.path.basename(path)[4:-4], lw=0.8)
if os.path.exists(os.path.join(here, "limit_h0.csv")):
    t = np.linspace(0, 6, 300)
    ax.plot(t, 1 - np.exp(-t), "k--", label="1 - exp(-t)")
ax.set_xlabel("rescaled length")
ax.set_ylabel("F")
ax.legend(fontsize=6)
fig.savefig(os.path.join(here, "cdf.png"), dpi=150)
)py";

const char* kPlotArrowhead = R"py(import glob, os
import numpy as np
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
fig, ax = plt.subplots()
for path in sorted(glob.glob(os.path.join(here, "arrowhead_l*_h*.csv"))):
    data = np.genfromtxt(path, delimiter=",", names=True, comments="#")
    ns = np.unique(data["n"])
    keep = [n for n in ns if np.all(data["ell"][data["n"] == n] > 0)]
    y = [np.mean(np.log(data["ell"][data["n"] == n])) for n in keep]
    ax.plot(np.log(keep), y, "o-", label=os.path.basename(path)[:-4])
ax.set_xlabel("log n")
ax.set_ylabel("mean log L")
ax.legend()
fig.savefig(os.path.join(here, "arrowhead.png"), dpi=150)
)py";

const char* kPlotSample = R"py(import glob, os
import numpy as np
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
for path in sorted(glob.glob(os.path.join(here, "sample_*.csv"))):
    data = np.genfromtxt(path, delimiter=",", names=True, comments="#")
    fig = plt.figure()
    if "z" in data.dtype.names:
        ax = fig.add_subplot(projection="3d")
        ax.scatter(data["x"], data["y"], data["z"], s=0.5)
    else:
        ax = fig.add_subplot()
        y = data["y"] if "y" in data.dtype.names else np.zeros_like(data["x"])
        ax.scatter(data["x"], y, s=0.5)
        ax.set_aspect("equal")
    fig.savefig(path[:-4] + ".png", dpi=150)
    plt.close(fig)
)py";

}  // namespace

RunReport cmd_sample(const ExperimentConfig& cfg) {
  CellRunner runner(cfg, "sample");
  const std::string name(shape_name(cfg.shape.variant));
  const auto keys = schedule_cells(name, cfg.master_seed, cfg.n_schedule, cfg.trials);
  const char* axes[] = {"x", "y", "z"};
  runner.run(keys, false, [&](const CellKey& key) {
    SeededRng rng(key.seed);
    const PointCloud cloud = sample(cfg.shape, key.n, rng);
    std::ostringstream out;
    Metadata meta = base_metadata(cfg, runner.hash());
    meta.insert(meta.end(), {{"shape", cfg.shape.describe()},
                             {"n", std::to_string(key.n)},
                             {"trial", std::to_string(key.trial)},
                             {"cell_seed", std::to_string(key.seed)}});
    write_metadata(out, meta);
    const std::size_t dim = cloud.ambient_dim();
    for (std::size_t k = 0; k < dim; ++k) out << (k ? "," : "") << (k < 3 ? axes[k] : "x" + std::to_string(k));
    out << '\n';
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const auto p = cloud.point(i);
      for (std::size_t k = 0; k < dim; ++k) out << (k ? "," : "") << format_double(p[k]);
      out << '\n';
    }
    runner.write("sample_" + key.id() + ".csv", out.str());
    return CellRecord{};
  });
  runner.write("plot_sample.py", kPlotSample);
  return runner.finish();
}

RunReport cmd_dimension(const ExperimentConfig& cfg) {
  check_increasing(cfg.n_schedule);
  CellRunner runner(cfg, "dimension");
  const int max_dim = cfg.max_hom_dim();
  const auto keys = schedule_cells(std::string(shape_name(cfg.shape.variant)), cfg.master_seed, cfg.n_schedule,
                                   cfg.trials);
  const auto cells = runner.run(keys, false, [&](const CellKey& key) {
    SeededRng rng(key.seed);
    CellRecord rec;
    rec.ell = total_lengths(sample(cfg.shape, key.n, rng), max_dim, persistence_options(cfg));
    return rec;
  });

  std::ostringstream report, table;
  table << "hom_dim,method,alpha,dimension,intercept,window_n_min,window_n_max,points_used,fell_back\n";
  for (int d : cfg.hom_dims) {
    const ScalingSeries series = series_from_cells(cells, d, cfg.trials);
    Metadata meta = base_metadata(cfg, runner.hash());
    meta.insert(meta.end(), {{"shape", cfg.shape.describe()}, {"hom_dim", std::to_string(d)}});
    runner.write("series_h" + std::to_string(d) + ".csv", series_csv(series, meta));
    using Fit = SlopeEstimate (*)(const ScalingSeries&);
    for (Fit fit : {Fit{global_loglog_fit}, Fit{pooled_loglog_fit}, Fit{asymptotic_alpha}}) {
      try {
        const SlopeEstimate e = fit(series);
        write_slope_report(report, cfg.shape.describe() + " H" + std::to_string(d), e);
        table << d << ',' << method_name(e.method) << ',' << format_double(e.alpha) << ','
              << nan_or(e.dimension) << ',' << format_double(e.intercept) << ','
              << format_double(e.diagnostics.window_n_min) << ',' << format_double(e.diagnostics.window_n_max)
              << ',' << e.diagnostics.points_used << ',' << (e.diagnostics.fell_back ? 1 : 0) << '\n';
      } catch (const FitError& err) {
        report << "[" << cfg.shape.describe() << " H" << d << "]\nfit_failed: " << err.what() << "\n\n";
      }
    }
  }
  {
    std::ostringstream out;
    write_metadata(out, base_metadata(cfg, runner.hash()));
    runner.write("slopes.csv", out.str() + table.str());
  }
  runner.write("slopes.txt", report.str());
  runner.write("plot_dimension.py", kPlotDimension);
  return runner.finish();
}

RunReport cmd_cdf(const ExperimentConfig& cfg) {
  CellRunner runner(cfg, "cdf");
  const int max_dim = cfg.max_hom_dim();

  struct Group {
    std::string tag;
    ShapeSpec spec;
    std::size_t n;
    double m;
    std::string label;
  };
  std::vector<Group> groups;
  std::vector<CellKey> keys;
  std::map<std::string, ShapeSpec> spec_of;
  const bool periodic = !cfg.cdf.periodic_k.empty();
  if (periodic) {
    if (cfg.shape.variant != Shape::sierpinski || !(cfg.shape.delta > 0)) {
      throw ParameterError("periodic probe needs shape sierpinski with delta > 0");
    }
    const double m = cfg.cdf.m > 0 ? cfg.cdf.m : default_rescale_exponent(cfg.shape);
    for (auto k : cfg.cdf.periodic_k) {
      if (k == 0) throw ParameterError("periodic k must be positive");
      const std::string tag = "k" + std::to_string(k);
      spec_of[tag] = cfg.shape;
      std::vector<std::size_t> ns;
      for (int j = cfg.cdf.periodic_j_min; j <= cfg.cdf.periodic_j_max; ++j) {
        const double n = static_cast<double>(k) * std::pow(3.0, j);
        if (n > 1e9) throw ResourceError("periodic probe: k*3^j too large");
        ns.push_back(static_cast<std::size_t>(n));
        groups.push_back({tag, cfg.shape, ns.back(), m, tag + "_j" + std::to_string(j)});
      }
      const auto more = schedule_cells(tag, cfg.master_seed, ns, cfg.trials);
      keys.insert(keys.end(), more.begin(), more.end());
    }
  } else {
    check_increasing(cfg.n_schedule);
    std::vector<ShapeSpec> shapes{cfg.shape};
    shapes.insert(shapes.end(), cfg.cdf.compare_shapes.begin(), cfg.cdf.compare_shapes.end());
    for (std::size_t i = 0; i < shapes.size(); ++i) {
      std::string tag(shape_name(shapes[i].variant));
      if (spec_of.count(tag)) tag += "_" + std::to_string(i);
      spec_of[tag] = shapes[i];
      const double m = cfg.cdf.m > 0 ? cfg.cdf.m : default_rescale_exponent(shapes[i]);
      const std::uint64_t root = i == 0 ? cfg.master_seed : derive_seed(cfg.master_seed, 0xC0FFEE, i);
      for (auto n : cfg.n_schedule) groups.push_back({tag, shapes[i], n, m, tag + "_n" + std::to_string(n)});
      const auto more = schedule_cells(tag, root, cfg.n_schedule, cfg.trials);
      keys.insert(keys.end(), more.begin(), more.end());
    }
  }

  const auto cells = runner.run(keys, true, [&](const CellKey& key) {
    SeededRng rng(key.seed);
    CellRecord rec;
    rec.lengths = cell_lengths(sample(spec_of.at(key.tag), key.n, rng), max_dim, persistence_options(cfg));
    rec.ell = sums(rec.lengths);
    return rec;
  });

  for (int d : cfg.hom_dims) {
    std::vector<EmpiricalCDF> cdfs;
    std::vector<std::string> labels;
    for (const auto& g : groups) {
      std::vector<double> pooled;
      for (const auto& c : cells) {
        if (c.tag == g.tag && c.n == g.n) {
          const auto& l = c.lengths.at(static_cast<std::size_t>(d));
          pooled.insert(pooled.end(), l.begin(), l.end());
        }
      }
      EmpiricalCDF cdf = empirical_cdf(std::move(pooled), g.n, d);
      if (cdf.undefined) {
        cdf.rescale_exponent = g.m;
      } else {
        cdf = rescale(cdf, g.m);
      }
      Metadata meta = base_metadata(cfg, runner.hash());
      meta.insert(meta.end(), {{"shape", g.spec.describe()}, {"trials", std::to_string(cfg.trials)}});
      std::ostringstream out;
      write_cdf_csv(out, cdf, meta);
      runner.write("cdf_" + g.label + "_h" + std::to_string(d) + ".csv", out.str());
      cdfs.push_back(std::move(cdf));
      labels.push_back(g.label);
    }
    Metadata meta = base_metadata(cfg, runner.hash());
    meta.emplace_back("hom_dim", std::to_string(d));
    std::ostringstream ks;
    write_ks_matrix_csv(ks, labels, ks_matrix(cdfs), meta);
    runner.write("ks_h" + std::to_string(d) + ".csv", ks.str());

    if (d == 0 && !periodic && cfg.shape.variant == Shape::interval && groups.front().m == 1.0) {
      std::ostringstream lim;
      write_metadata(lim, meta);
      lim << "label,ks_to_exponential_limit\n";
      for (std::size_t i = 0; i < cdfs.size(); ++i) {
        if (groups[i].tag != groups.front().tag) continue;
        lim << labels[i] << ',' << format_double(ks_distance(cdfs[i], AnalyticCdf(exponential_limit_cdf))) << '\n';
      }
      runner.write("limit_h0.csv", lim.str());
    }
  }
  runner.write("plot_cdf.py", kPlotCdf);
  return runner.finish();
}

RunReport cmd_arrowhead(const ExperimentConfig& cfg) {
  check_increasing(cfg.n_schedule);
  CellRunner runner(cfg, "arrowhead");
  const int max_dim = cfg.max_hom_dim();
  const auto& ah = cfg.arrowhead;
  std::ostringstream regimes;
  regimes << "level,hom_dim,regime,n_min,n_max,alpha,dimension,points_used\n";
  for (int level : ah.levels) {
    ShapeSpec spec = cfg.shape;
    spec.variant = Shape::arrowhead;
    spec.level = level;
    spec.validate();
    const std::string tag = "arrowhead_l" + std::to_string(level);
    const auto keys = schedule_cells(tag, derive_seed(cfg.master_seed, 0xA77, static_cast<std::uint64_t>(level)),
                                     cfg.n_schedule, cfg.trials);
    const auto cells = runner.run(keys, false, [&](const CellKey& key) {
      SeededRng rng(key.seed);
      CellRecord rec;
      rec.ell = total_lengths(sample(spec, key.n, rng), max_dim, persistence_options(cfg));
      return rec;
    });
    for (int d : cfg.hom_dims) {
      const ScalingSeries series = series_from_cells(cells, d, cfg.trials);
      Metadata meta = base_metadata(cfg, runner.hash());
      meta.insert(meta.end(), {{"shape", spec.describe()},
                               {"hom_dim", std::to_string(d)},
                               {"intermediate_window", format_double(ah.intermediate_n_min) + ".." +
                                                           format_double(ah.intermediate_n_max)},
                               {"large_window", format_double(ah.large_n_min) + ".." + format_double(ah.large_n_max)}});
      runner.write(tag + "_h" + std::to_string(d) + ".csv", series_csv(series, meta));
      const std::pair<const char*, std::pair<double, double>> windows[] = {
          {"all", {0.0, std::numeric_limits<double>::infinity()}},
          {"intermediate", {ah.intermediate_n_min, ah.intermediate_n_max}},
          {"large", {ah.large_n_min, ah.large_n_max}}};
      for (const auto& [name, w] : windows) {
        const ScalingSeries sub = restrict_series(series, w.first, w.second);
        regimes << level << ',' << d << ',' << name << ',' << nan_or(w.first) << ',' << nan_or(w.second) << ',';
        try {
          const SlopeEstimate e = global_loglog_fit(sub);
          regimes << format_double(e.alpha) << ',' << nan_or(e.dimension) << ',' << e.diagnostics.points_used
                  << '\n';
        } catch (const FitError&) {
          regimes << "nan,nan,0\n";
        }
      }
    }
  }
  std::ostringstream out;
  write_metadata(out, base_metadata(cfg, runner.hash()));
  runner.write("regimes.csv", out.str() + regimes.str());
  runner.write("plot_arrowhead.py", kPlotArrowhead);
  return runner.finish();
}

}  // namespace phdim
