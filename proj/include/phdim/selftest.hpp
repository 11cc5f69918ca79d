#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace phdim {

struct SelftestOptions {
  std::uint64_t seed = 20240607;
  /// Mutation check: corrupts one interval of every engine barcode before
  /// comparing, so the oracle suite must fail.
  bool perturb_engine = false;
};

struct SelftestCase {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Grids for the synthetic power-law check: a fine grid on [19000, 20000] and
/// an 8-point grid 400 + 2800k on [400, 20000].
std::vector<double> synthetic_restricted_grid();
std::vector<double> synthetic_full_grid();

std::vector<SelftestCase> run_selftest(const SelftestOptions& options = {});
/// One line per case; returns true if all passed.
bool print_selftest(std::ostream& out, const std::vector<SelftestCase>& cases);

}  // namespace phdim
