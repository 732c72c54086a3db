#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace permtherm {

/// SplitMix64 finalizer. Used to derive independent per-task seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Random stream backed by std::mt19937_64. Every value drawn from it is a
/// function of the 64-bit engine output only, so a given seed produces the
/// same sequence on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  /// Unbiased integer in [0, bound). bound must be positive.
  std::uint64_t uniform_below(std::uint64_t bound);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal variate (Box-Muller, both outputs used).
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Master seed plus the fixed derivation rule for per-task streams:
///   seed(task...) = fold of splitmix64(acc ^ splitmix64(index)) over the
///   task indices, starting from acc = splitmix64(master_seed).
struct SeedSpec {
  std::uint64_t master_seed = 0;

  std::uint64_t derive(std::initializer_list<std::uint64_t> task) const noexcept {
    std::uint64_t acc = splitmix64(master_seed);
    for (std::uint64_t index : task) acc = splitmix64(acc ^ splitmix64(index));
    return acc;
  }

  Rng stream(std::initializer_list<std::uint64_t> task) const { return Rng(derive(task)); }
};

}  // namespace permtherm
