#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "phdim/geometry_sampler.hpp"

namespace phdim {

inline constexpr const char* kToolVersion = "0.3.0";

struct ResourceCaps {
  std::uint64_t max_simplices = 50'000'000;
  /// Wall-clock limit per (n, trial) cell; 0 disables it.
  double max_cell_seconds = 0.0;
  friend bool operator==(const ResourceCaps&, const ResourceCaps&) = default;
};

/// Settings for the cdf subcommand.
struct CdfSettings {
  /// Rescaling exponent; 0 picks default_rescale_exponent(shape).
  double m = 0.0;
  /// Extra shapes pooled into the KS matrix next to the main one.
  std::vector<ShapeSpec> compare_shapes;
  /// Non-empty switches to the periodic-family probe (sierpinski only).
  std::vector<std::size_t> periodic_k;
  int periodic_j_min = 3;
  int periodic_j_max = 7;
  friend bool operator==(const CdfSettings&, const CdfSettings&) = default;
};

/// Settings for the arrowhead subcommand.
struct ArrowheadSettings {
  std::vector<int> levels{6};
  /// Window [lo, hi] on n tagged as the intermediate regime.
  double intermediate_n_min = 32;
  double intermediate_n_max = 512;
  /// Window tagged as the large-n regime.
  double large_n_min = 4096;
  double large_n_max = 16384;
  friend bool operator==(const ArrowheadSettings&, const ArrowheadSettings&) = default;
};

struct ExperimentConfig {
  ShapeSpec shape;
  std::vector<int> hom_dims{0};
  std::vector<std::size_t> n_schedule{64, 128, 256, 512, 1024, 2048, 4096, 8192};
  std::size_t trials = 5;
  std::uint64_t master_seed = 1;
  std::string output_dir = "phdim_out";
  unsigned threads = 1;
  ResourceCaps caps;
  CdfSettings cdf;
  ArrowheadSettings arrowhead;

  /// Throws ParameterError on inconsistent settings.
  void validate() const;
  int max_hom_dim() const;
  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// JSON text. parse rejects unknown keys.
std::string config_to_json(const ExperimentConfig& cfg, int indent = 2);
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);
void save_config(const ExperimentConfig& cfg, const std::string& path);

std::string shape_to_json(const ShapeSpec& spec);
ShapeSpec shape_from_json(const std::string& text);

/// Applies PHDIM_* variables from env (SEED, OUT, THREADS, TRIALS, SHAPE,
/// N_SCHEDULE, HOM_DIMS, MAX_SIMPLICES, MAX_CELL_SECONDS).
void apply_env_overrides(ExperimentConfig& cfg, const std::map<std::string, std::string>& env);
/// Same, reading the process environment.
void apply_env_overrides(ExperimentConfig& cfg);

std::vector<int> parse_int_list(const std::string& text);
std::vector<std::size_t> parse_size_list(const std::string& text);

/// FNV-1a of the canonical JSON, ignoring output_dir and threads (neither
/// changes results).
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace phdim
