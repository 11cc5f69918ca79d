#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "phdim/experiment_config.hpp"
#include "phdim/geometry_sampler.hpp"

namespace phdim {

/// One unit of work: a sample of size n, trial number and seed, for a tagged
/// shape.
struct CellKey {
  std::string tag;
  std::size_t n = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::string id() const;
};

struct CellRecord {
  std::string id;
  std::string tag;
  std::size_t n = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double seconds = 0.0;
  /// Total interval length per homological dimension (index = dim).
  std::vector<double> ell;
  /// Per-dimension interval lengths, if the command keeps them. Stored in a
  /// side file named by data_file, not in the manifest.
  std::vector<std::vector<double>> lengths;
  std::string data_file;
};

struct RunManifest {
  std::string command;
  std::string config_hash;
  std::string tool_version;
  std::vector<CellRecord> cells;
  std::vector<std::string> files;

  std::string to_json() const;
  static RunManifest from_json(const std::string& text);
};

struct RunReport {
  std::string output_dir;
  std::vector<std::string> files;
  std::size_t cells_computed = 0;
  std::size_t cells_reused = 0;
};

/// Dimension used to rescale CDFs when none is configured: ambient dimension
/// for bodies and surfaces, the similarity dimension for self-similar sets.
double default_rescale_exponent(const ShapeSpec& spec);

/// Writes sampled clouds, one CSV per (n, trial).
RunReport cmd_sample(const ExperimentConfig& cfg);
/// Scaling series per hom dim, global/pooled/asymptotic fits, plot script.
RunReport cmd_dimension(const ExperimentConfig& cfg);
/// Rescaled CDFs, KS matrices, plot script. Periodic probe when cdf.periodic_k is set.
RunReport cmd_cdf(const ExperimentConfig& cfg);
/// Per-level scaling series with intermediate and large-n window fits.
RunReport cmd_arrowhead(const ExperimentConfig& cfg);

/// Manifest file of a subcommand inside an output directory.
std::string manifest_path(const std::string& dir, const std::string& command);
/// Empty manifest if the file is absent.
RunManifest read_manifest(const std::string& dir, const std::string& command);

}  // namespace phdim
