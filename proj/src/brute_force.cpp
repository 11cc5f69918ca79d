#include <algorithm>
#include <iterator>
#include <map>
#include <string>

#include "phdim/errors.hpp"
#include "phdim/vr_persistence.hpp"

namespace phdim {

namespace {

struct Simplex {
  std::vector<int> vertices;  // increasing
  double value;
};

void enumerate(int n, int size, int start, std::vector<int>& current, std::vector<Simplex>& out,
               const DistanceMatrix& d) {
  if (static_cast<int>(current.size()) == size) {
    double value = 0.0;
    for (std::size_t a = 0; a < current.size(); ++a) {
      for (std::size_t b = a + 1; b < current.size(); ++b) {
        value = std::max(value, d(static_cast<std::size_t>(current[a]), static_cast<std::size_t>(current[b])));
      }
    }
    out.push_back({current, value});
    return;
  }
  for (int v = start; v < n; ++v) {
    current.push_back(v);
    enumerate(n, size, v + 1, current, out, d);
    current.pop_back();
  }
}

}  // namespace

std::vector<Barcode> brute_force_barcode(const DistanceMatrix& d, int max_hom_dim) {
  if (max_hom_dim < 0) throw ParameterError("brute_force_barcode: negative homological dimension");
  if (max_hom_dim > kMaxHomDim) {
    throw UnsupportedError("brute_force_barcode: homological dimension " +
                           std::to_string(max_hom_dim) + " not supported");
  }
  const int n = static_cast<int>(d.size());
  if (n == 0) throw ParameterError("brute_force_barcode: empty distance matrix");
  if (d.size() > kBruteForceMaxPoints) {
    throw ResourceError("brute_force_barcode: " + std::to_string(n) + " points exceed the limit of " +
                        std::to_string(kBruteForceMaxPoints));
  }

  std::vector<Simplex> simplices;
  std::vector<int> current;
  for (int size = 1; size <= max_hom_dim + 2; ++size) enumerate(n, size, 0, current, simplices, d);

  std::sort(simplices.begin(), simplices.end(), [](const Simplex& a, const Simplex& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.vertices.size() != b.vertices.size()) return a.vertices.size() < b.vertices.size();
    return a.vertices < b.vertices;
  });

  std::map<std::vector<int>, int> position;
  for (std::size_t i = 0; i < simplices.size(); ++i) position.emplace(simplices[i].vertices, static_cast<int>(i));

  // boundary columns as increasing row positions
  std::vector<std::vector<int>> columns(simplices.size());
  for (std::size_t j = 0; j < simplices.size(); ++j) {
    const auto& verts = simplices[j].vertices;
    if (verts.size() == 1) continue;
    for (std::size_t drop = 0; drop < verts.size(); ++drop) {
      std::vector<int> face;
      for (std::size_t k = 0; k < verts.size(); ++k) {
        if (k != drop) face.push_back(verts[k]);
      }
      columns[j].push_back(position.at(face));
    }
    std::sort(columns[j].begin(), columns[j].end());
  }

  std::vector<int> column_with_low(simplices.size(), -1);
  std::vector<Barcode> result(static_cast<std::size_t>(max_hom_dim + 1));
  for (int k = 0; k <= max_hom_dim; ++k) result[static_cast<std::size_t>(k)].hom_dim = k;

  for (std::size_t j = 0; j < columns.size(); ++j) {
    auto& col = columns[j];
    while (!col.empty() && column_with_low[static_cast<std::size_t>(col.back())] != -1) {
      const auto& other = columns[static_cast<std::size_t>(column_with_low[static_cast<std::size_t>(col.back())])];
      std::vector<int> sum;
      std::set_symmetric_difference(col.begin(), col.end(), other.begin(), other.end(),
                                    std::back_inserter(sum));
      col.swap(sum);
    }
    if (col.empty()) continue;
    const auto low = static_cast<std::size_t>(col.back());
    column_with_low[low] = static_cast<int>(j);
    const int dim = static_cast<int>(simplices[low].vertices.size()) - 1;
    if (dim > max_hom_dim) continue;
    const double birth = simplices[low].value;
    const double death = simplices[j].value;
    if (death > birth) result[static_cast<std::size_t>(dim)].intervals.push_back({birth, death});
  }
  for (auto& b : result) b.canonicalize();
  return result;
}

}  // namespace phdim
