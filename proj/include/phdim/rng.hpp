#pragma once

#include <cstdint>
#include <limits>

namespace phdim {

/// SplitMix64 finalizer. Used for seeding and for deriving per-cell seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministically derives a child seed from a parent seed and two labels
/// (for example a sample size and a trial number).
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t a,
                                    std::uint64_t b = 0) {
  return mix64(mix64(parent ^ mix64(a + 0x632be59bd9b4e019ULL)) ^
               mix64(b + 0x85157af5ULL));
}

/// xoshiro256** generator keyed by (seed, stream_id).
///
/// Every variate is produced by code in this file, not by <random>
/// distributions, so a given (seed, stream_id) yields the same sequence
/// regardless of the standard library in use.
class SeededRng {
 public:
  using result_type = std::uint64_t;

  explicit SeededRng(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }

  /// Fresh generator for an independent substream.
  SeededRng split(std::uint64_t label) const;

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next(); }

  std::uint64_t next();
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, bound), bound > 0, without modulo bias.
  std::uint64_t uniform_int(std::uint64_t bound);
  double normal();
  /// Gamma(shape, 1), Marsaglia-Tsang.
  double gamma(double shape);
  double beta(double a, double b);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t s_[4];
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace phdim
