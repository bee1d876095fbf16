#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ledgerlab {

/// Deterministic random source. std::mt19937_64 has a fully specified output
/// stream; the derived draws below avoid std::uniform_*_distribution, whose
/// algorithms are implementation-defined and would differ across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  /// Uniform integer in [0, n) by rejection sampling; n must be > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
    std::uint64_t v = gen_();
    while (v >= limit) v = gen_();
    return v % n;
  }

  /// Uniform integer in [lo, hi], inclusive.
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(
                    below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double real(double lo, double hi) { return lo + (hi - lo) * unit(); }

  bool chance(double p) { return unit() < p; }

 private:
  std::mt19937_64 gen_;
};

/// Stable stream-id derivation: master seed plus a named substream, so that
/// adding one consumer never perturbs the draws of another.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view stream) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a over the stream name
  for (char c : stream) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  std::uint64_t z = master ^ h;  // splitmix64 finalizer
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// The named substreams a scenario run feeds from.
struct RngStreams {
  Rng workload;
  Rng mining;
  Rng gossip;

  explicit RngStreams(std::uint64_t master)
      : workload(derive_seed(master, "workload")),
        mining(derive_seed(master, "mining")),
        gossip(derive_seed(master, "gossip")) {}
};

}  // namespace ledgerlab
