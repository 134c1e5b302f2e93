#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace riskkit {

using Rng = std::mt19937_64;

/// splitmix64 finaliser; decorrelates seeds derived from consecutive indices.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Generator seed for replication `index` of a run seeded with `master`.
constexpr std::uint64_t replication_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix_seed(mix_seed(master) ^ index);
}

/// Uniform double in [0,1) from the top 53 bits; identical on every platform,
/// unlike std::uniform_real_distribution.
inline double uniform01(Rng& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Fraction of replications for which `trial` reports a rejection. Each
/// replication gets its own generator seeded from (master, index), so the
/// result does not depend on how replications are scheduled across threads.
double rejection_rate(std::size_t replications, std::uint64_t master_seed,
                      const std::function<bool(Rng&)>& trial, unsigned threads = 0);

}  // namespace riskkit
