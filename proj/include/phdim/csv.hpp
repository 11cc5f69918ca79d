#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace phdim {

/// Shortest decimal form that reads back to the same double.
std::string format_double(double x);

/// Metadata header lines, written as `# key: value`.
using Metadata = std::vector<std::pair<std::string, std::string>>;

void write_metadata(std::ostream& out, const Metadata& meta);

/// Parsed CSV: `#` lines are collected as metadata, the first other line is the header.
struct CsvTable {
  Metadata metadata;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column; throws ParameterError if absent.
  std::size_t column(const std::string& name) const;
};

CsvTable read_csv(std::istream& in);

}  // namespace phdim
