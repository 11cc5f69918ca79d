#pragma once

#include <iosfwd>
#include <vector>

namespace phdim {

struct Interval {
  double birth = 0.0;
  double death = 0.0;

  double length() const { return death - birth; }
  friend auto operator<=>(const Interval&, const Interval&) = default;
};

/// Intervals of one homological dimension.
struct Barcode {
  int hom_dim = 0;
  std::vector<Interval> intervals;

  /// Sorts intervals by (birth, death) so barcodes compare as multisets.
  void canonicalize();
  std::vector<double> lengths() const;

  friend bool operator==(const Barcode&, const Barcode&) = default;
};

/// Sum of interval lengths, L^i. Summed in increasing order of length so the
/// result does not depend on interval order.
double total_length(const Barcode& b);

/// CSV with header `hom_dim,birth,death`, one interval per row.
void write_barcodes_csv(std::ostream& out, const std::vector<Barcode>& barcodes);

}  // namespace phdim
