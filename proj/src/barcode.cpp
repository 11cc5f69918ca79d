#include "phdim/barcode.hpp"

#include <algorithm>
#include <ostream>

#include "phdim/csv.hpp"

namespace phdim {

void Barcode::canonicalize() { std::sort(intervals.begin(), intervals.end()); }

std::vector<double> Barcode::lengths() const {
  std::vector<double> out;
  out.reserve(intervals.size());
  for (const auto& iv : intervals) out.push_back(iv.length());
  std::sort(out.begin(), out.end());
  return out;
}

double total_length(const Barcode& b) {
  double sum = 0.0;
  for (double l : b.lengths()) sum += l;
  return sum;
}

void write_barcodes_csv(std::ostream& out, const std::vector<Barcode>& barcodes) {
  out << "hom_dim,birth,death\n";
  for (const auto& b : barcodes) {
    for (const auto& iv : b.intervals) {
      out << b.hom_dim << ',' << format_double(iv.birth) << ',' << format_double(iv.death) << '\n';
    }
  }
}

}  // namespace phdim
