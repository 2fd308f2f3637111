#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace wigner::rng {

/// Philox 4x32-10 block cipher (Salmon et al., SC 2011). Counter-based:
/// the value at a given (counter, key) never depends on generation order.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

std::uint64_t splitmix64(std::uint64_t x);

/// Seed for replicate r of a run keyed by master_seed.
std::uint64_t replicate_seed(std::uint64_t master_seed, std::uint64_t r);

/// Deterministic per-entry randomness: every draw is a pure function of
/// (seed, i, j, slot), so a matrix assembles identically in any order and
/// under any thread count.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed);

  std::array<std::uint32_t, 4> block(std::uint32_t i, std::uint32_t j,
                                     std::uint32_t slot) const;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform(std::uint32_t i, std::uint32_t j, std::uint32_t slot) const;

  /// Two independent standard normals (Box-Muller; rejection-free, so the
  /// counter discipline is preserved).
  std::pair<double, double> normal_pair(std::uint32_t i, std::uint32_t j,
                                        std::uint32_t slot) const;

 private:
  std::array<std::uint32_t, 2> key_;
};

}  // namespace wigner::rng
