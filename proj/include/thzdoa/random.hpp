#pragma once

#include <cstdint>
#include <random>

namespace thzdoa {

using Rng = std::mt19937_64;

// splitmix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Per-trial stream seed. Independent of execution order, so trials can run on any thread.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t sweep_index,
                                    std::uint64_t trial_index) noexcept {
  return mix64(mix64(mix64(base) ^ sweep_index) ^ trial_index);
}

}  // namespace thzdoa
