#include "phdim/vr_persistence.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "phdim/errors.hpp"
#include "phdim/mst.hpp"

namespace phdim {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(r);
}

Barcode reduced_h0_barcode(const PointCloud& cloud) {
  Barcode b;
  b.hom_dim = 0;
  for (double l : mst_interval_lengths(cloud)) {
    if (l > 0.0) b.intervals.push_back({0.0, l});
  }
  b.canonicalize();
  return b;
}

namespace {

using index_t = std::int64_t;

class BinomialTable {
 public:
  BinomialTable(index_t n, index_t k) : n_(n), k_(k), table_((n + 1) * (k + 1), 0) {
    for (index_t i = 0; i <= n; ++i) {
      at(i, 0) = 1;
      for (index_t j = 1; j < std::min(i, k + 1); ++j) {
        const index_t sum = at(i - 1, j - 1) + at(i - 1, j);
        if (sum < 0 || sum > (index_t{1} << 62)) {
          throw ResourceError("vr_barcode: simplex indices overflow 62 bits");
        }
        at(i, j) = sum;
      }
      if (i <= k) at(i, i) = 1;
    }
  }
  index_t operator()(index_t n, index_t k) const {
    return (k > n || k < 0) ? 0 : table_[static_cast<std::size_t>(k * (n_ + 1) + n)];
  }

 private:
  index_t& at(index_t n, index_t k) { return table_[static_cast<std::size_t>(k * (n_ + 1) + n)]; }
  index_t n_, k_;
  std::vector<index_t> table_;
};

struct DiameterEntry {
  double diameter;
  index_t index;
};

// Heap order: the top is the entry with the smallest diameter and, among
// equal diameters, the largest index. This is the pivot of a coboundary
// column in reverse filtration order.
struct GreaterDiameterOrSmallerIndex {
  bool operator()(const DiameterEntry& a, const DiameterEntry& b) const {
    return a.diameter > b.diameter || (a.diameter == b.diameter && a.index < b.index);
  }
};

using WorkingColumn =
    std::priority_queue<DiameterEntry, std::vector<DiameterEntry>, GreaterDiameterOrSmallerIndex>;

constexpr DiameterEntry kNoEntry{0.0, -1};

// Pops the pivot, cancelling equal entries pairwise (Z/2 coefficients).
DiameterEntry pop_pivot(WorkingColumn& column) {
  if (column.empty()) return kNoEntry;
  DiameterEntry pivot = column.top();
  column.pop();
  while (!column.empty() && column.top().index == pivot.index) {
    column.pop();
    if (column.empty()) return kNoEntry;
    pivot = column.top();
    column.pop();
  }
  return pivot;
}

DiameterEntry get_pivot(WorkingColumn& column) {
  const DiameterEntry result = pop_pivot(column);
  if (result.index != -1) column.push(result);
  return result;
}

class VrEngine {
 public:
  VrEngine(const DistanceMatrix& dist, int dim_max, double threshold,
           const PersistenceOptions& options)
      : dist_(dist),
        n_(static_cast<index_t>(dist.size())),
        dim_max_(dim_max),
        threshold_(threshold),
        options_(options),
        binom_(n_, dim_max + 2),
        barcodes_(static_cast<std::size_t>(dim_max + 1)) {
    for (int k = 0; k <= dim_max; ++k) barcodes_[static_cast<std::size_t>(k)].hom_dim = k;
  }

  std::vector<Barcode> run() {
    std::vector<DiameterEntry> simplices, columns_to_reduce;
    compute_dim_0_pairs(simplices, columns_to_reduce);
    for (index_t dim = 1; dim <= dim_max_; ++dim) {
      std::unordered_map<index_t, index_t> pivot_column_index;
      pivot_column_index.reserve(columns_to_reduce.size());
      compute_pairs(columns_to_reduce, pivot_column_index, dim);
      if (dim < dim_max_) {
        assemble_columns_to_reduce(simplices, columns_to_reduce, pivot_column_index, dim + 1);
      }
    }
    for (auto& b : barcodes_) b.canonicalize();
    return std::move(barcodes_);
  }

 private:
  // Largest v < n (searching down from n) with C(v, k) <= idx.
  index_t get_max_vertex(index_t idx, index_t k, index_t n) const {
    index_t top = n;
    const index_t bottom = k - 1;
    if (!(binom_(top, k) <= idx)) {
      index_t count = top - bottom;
      while (count > 0) {
        const index_t step = count >> 1;
        const index_t mid = top - step;
        if (!(binom_(mid, k) <= idx)) {
          top = mid - 1;
          count -= step + 1;
        } else {
          count = step;
        }
      }
    }
    return top;
  }

  // Vertices in decreasing order.
  void get_simplex_vertices(index_t idx, index_t dim, index_t n, std::vector<index_t>& out) const {
    out.resize(static_cast<std::size_t>(dim + 1));
    --n;
    for (index_t k = dim + 1; k > 0; --k) {
      n = get_max_vertex(idx, k, n);
      out[static_cast<std::size_t>(dim + 1 - k)] = n;
      idx -= binom_(n, k);
    }
  }

  double dist(index_t i, index_t j) const {
    return dist_(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  }

  // Enumerates cofacets in decreasing index order.
  class CoboundaryEnumerator {
   public:
    CoboundaryEnumerator(const VrEngine& engine, DiameterEntry simplex, index_t dim)
        : engine_(engine),
          idx_below_(simplex.index),
          idx_above_(0),
          j_(engine.n_ - 1),
          k_(dim + 1),
          simplex_(simplex) {
      engine.get_simplex_vertices(simplex.index, dim, engine.n_, vertices_);
    }

    // all_cofacets = false restricts to cofacets whose new vertex exceeds
    // every existing vertex, so each simplex is generated exactly once.
    bool has_next(bool all_cofacets = true) const {
      return j_ >= k_ && (all_cofacets || engine_.binom_(j_, k_) > idx_below_);
    }

    DiameterEntry next() {
      while (engine_.binom_(j_, k_) <= idx_below_) {
        idx_below_ -= engine_.binom_(j_, k_);
        idx_above_ += engine_.binom_(j_, k_ + 1);
        --j_;
        --k_;
      }
      double diameter = simplex_.diameter;
      for (index_t v : vertices_) diameter = std::max(diameter, engine_.dist(j_, v));
      const index_t index = idx_above_ + engine_.binom_(j_, k_ + 1) + idx_below_;
      --j_;
      return {diameter, index};
    }

   private:
    const VrEngine& engine_;
    index_t idx_below_, idx_above_, j_, k_;
    std::vector<index_t> vertices_;
    DiameterEntry simplex_;
  };

  void check_deadline() const {
    if (options_.deadline && std::chrono::steady_clock::now() > *options_.deadline) {
      throw ResourceError("vr_barcode: time budget exceeded");
    }
  }

  void compute_dim_0_pairs(std::vector<DiameterEntry>& edges,
                           std::vector<DiameterEntry>& columns_to_reduce) {
    // edge (i, j), i > j, has index C(i,2) + j, its lower-triangle position
    edges.clear();
    for (index_t i = 1; i < n_; ++i) {
      for (index_t j = 0; j < i; ++j) {
        const double d = dist(i, j);
        if (d <= threshold_) edges.push_back({d, binom_(i, 2) + j});
      }
    }
    // increasing diameter, decreasing index among ties
    std::sort(edges.rbegin(), edges.rend(), GreaterDiameterOrSmallerIndex{});

    UnionFind uf(static_cast<std::size_t>(n_));
    Barcode& h0 = barcodes_[0];
    std::vector<index_t> vertices;
    columns_to_reduce.clear();
    for (const auto& e : edges) {
      get_simplex_vertices(e.index, 1, n_, vertices);
      if (uf.unite(static_cast<std::size_t>(vertices[0]), static_cast<std::size_t>(vertices[1]))) {
        if (e.diameter > 0.0) h0.intervals.push_back({0.0, e.diameter});
      } else if (dim_max_ >= 1) {
        columns_to_reduce.push_back(e);
      }
    }
    std::reverse(columns_to_reduce.begin(), columns_to_reduce.end());
  }

  void assemble_columns_to_reduce(std::vector<DiameterEntry>& simplices,
                                  std::vector<DiameterEntry>& columns_to_reduce,
                                  const std::unordered_map<index_t, index_t>& pivot_column_index,
                                  index_t dim) {
    --dim;
    columns_to_reduce.clear();
    std::vector<DiameterEntry> next_simplices;
    for (const auto& simplex : simplices) {
      CoboundaryEnumerator cofacets(*this, simplex, dim);
      while (cofacets.has_next(false)) {
        const DiameterEntry cofacet = cofacets.next();
        if (cofacet.diameter <= threshold_) {
          if (dim + 1 < dim_max_) next_simplices.push_back(cofacet);
          if (!pivot_column_index.contains(cofacet.index)) columns_to_reduce.push_back(cofacet);
        }
      }
    }
    simplices.swap(next_simplices);
    std::sort(columns_to_reduce.begin(), columns_to_reduce.end(), GreaterDiameterOrSmallerIndex{});
  }

  void add_simplex_coboundary(DiameterEntry simplex, index_t dim, WorkingColumn& reduction,
                              WorkingColumn& coboundary) {
    reduction.push(simplex);
    CoboundaryEnumerator cofacets(*this, simplex, dim);
    while (cofacets.has_next()) {
      const DiameterEntry cofacet = cofacets.next();
      if (cofacet.diameter <= threshold_) coboundary.push(cofacet);
    }
  }

  DiameterEntry init_coboundary_and_get_pivot(
      DiameterEntry simplex, WorkingColumn& coboundary, index_t dim,
      const std::unordered_map<index_t, index_t>& pivot_column_index) {
    bool check_for_emergent_pair = true;
    cofacet_entries_.clear();
    CoboundaryEnumerator cofacets(*this, simplex, dim);
    while (cofacets.has_next()) {
      const DiameterEntry cofacet = cofacets.next();
      if (cofacet.diameter <= threshold_) {
        cofacet_entries_.push_back(cofacet);
        // The first cofacet of equal diameter is the pivot; if no earlier
        // column owns it, the pair is final without building the column.
        if (check_for_emergent_pair && simplex.diameter == cofacet.diameter) {
          if (!pivot_column_index.contains(cofacet.index)) return cofacet;
          check_for_emergent_pair = false;
        }
      }
    }
    for (const auto& c : cofacet_entries_) coboundary.push(c);
    return get_pivot(coboundary);
  }

  void compute_pairs(const std::vector<DiameterEntry>& columns_to_reduce,
                     std::unordered_map<index_t, index_t>& pivot_column_index, index_t dim) {
    Barcode& barcode = barcodes_[static_cast<std::size_t>(dim)];
    // reduction matrix V without its diagonal, compressed by column
    std::vector<std::size_t> reduction_bounds;
    std::vector<DiameterEntry> reduction_entries;

    for (std::size_t col = 0; col < columns_to_reduce.size(); ++col) {
      if ((col & 1023) == 0) check_deadline();
      const DiameterEntry column_to_reduce = columns_to_reduce[col];
      const double birth = column_to_reduce.diameter;
      WorkingColumn working_reduction, working_coboundary;

      DiameterEntry pivot =
          init_coboundary_and_get_pivot(column_to_reduce, working_coboundary, dim, pivot_column_index);

      while (true) {
        if (pivot.index == -1) {
          throw std::logic_error("vr_barcode: essential class in dimension " + std::to_string(dim) +
                                 " below the contractible threshold");
        }
        auto found = pivot_column_index.find(pivot.index);
        if (found != pivot_column_index.end()) {
          const auto other = static_cast<std::size_t>(found->second);
          add_simplex_coboundary(columns_to_reduce[other], dim, working_reduction, working_coboundary);
          const std::size_t begin = other == 0 ? 0 : reduction_bounds[other - 1];
          for (std::size_t e = begin; e < reduction_bounds[other]; ++e) {
            add_simplex_coboundary(reduction_entries[e], dim, working_reduction, working_coboundary);
          }
          pivot = get_pivot(working_coboundary);
        } else {
          if (pivot.diameter > birth) barcode.intervals.push_back({birth, pivot.diameter});
          pivot_column_index.emplace(pivot.index, static_cast<index_t>(col));
          while (true) {
            const DiameterEntry e = pop_pivot(working_reduction);
            if (e.index == -1) break;
            reduction_entries.push_back(e);
          }
          break;
        }
      }
      reduction_bounds.push_back(reduction_entries.size());
    }
  }

  const DistanceMatrix& dist_;
  index_t n_;
  index_t dim_max_;
  double threshold_;
  PersistenceOptions options_;
  BinomialTable binom_;
  std::vector<Barcode> barcodes_;
  std::vector<DiameterEntry> cofacet_entries_;
};

}  // namespace

std::vector<Barcode> vr_barcode(const DistanceMatrix& d, int max_hom_dim,
                                const PersistenceOptions& options) {
  if (max_hom_dim < 0) throw ParameterError("vr_barcode: negative homological dimension");
  if (max_hom_dim > kMaxHomDim) {
    throw UnsupportedError("vr_barcode: homological dimension " + std::to_string(max_hom_dim) +
                           " not supported (max " + std::to_string(kMaxHomDim) + ")");
  }
  const std::size_t n = d.size();
  if (n == 0) throw ParameterError("vr_barcode: empty distance matrix");
  const std::uint64_t estimate = binomial(n, static_cast<std::uint64_t>(max_hom_dim) + 2);
  if (estimate > options.max_simplices) {
    throw ResourceError("vr_barcode: " + std::to_string(estimate) + " simplices (C(" +
                        std::to_string(n) + "," + std::to_string(max_hom_dim + 2) +
                        ")) exceed the budget of " + std::to_string(options.max_simplices));
  }
  const double threshold = options.use_enclosing_radius
                               ? d.enclosing_radius()
                               : std::numeric_limits<double>::infinity();
  VrEngine engine(d, max_hom_dim, threshold, options);
  return engine.run();
}

}  // namespace phdim
