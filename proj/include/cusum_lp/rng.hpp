#pragma once

#include <cstdint>
#include <random>

namespace cusum_lp {

using engine_type = std::mt19937_64;

/// SplitMix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of stream `index` under `root`. Replication i always sees the same
/// stream regardless of scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) noexcept {
  return mix64(mix64(root) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

inline engine_type make_engine(std::uint64_t root, std::uint64_t index) {
  return engine_type{derive_seed(root, index)};
}

}  // namespace cusum_lp
