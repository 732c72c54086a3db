#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "permtherm/qstate.hpp"
#include "permtherm/rng.hpp"

namespace permtherm {

/// Bijection on {0, ..., d-1}; U_pi |z> = |images[z]>.
class Permutation {
 public:
  /// Throws Parameter unless images is a bijection on {0, ..., size-1}.
  explicit Permutation(std::vector<std::uint32_t> images);

  static Permutation identity(std::size_t d);

  std::size_t size() const noexcept { return images_.size(); }
  std::uint32_t operator()(std::size_t z) const { return images_[z]; }
  const std::vector<std::uint32_t>& images() const noexcept { return images_; }

  Permutation inverse() const;
  /// (this o first)(z) = this(first(z)).
  Permutation after(const Permutation& first) const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  struct Unchecked {};
  Permutation(Unchecked, std::vector<std::uint32_t> images) : images_(std::move(images)) {}
  friend Permutation sample_permutation(std::size_t d, Rng& rng);

  std::vector<std::uint32_t> images_;
};

/// Uniform element of S_d via Fisher-Yates driven by rng.
Permutation sample_permutation(std::size_t d, Rng& rng);

/// New amplitude at perm(z) is the old amplitude at z.
StateVector apply_global_permutation(const StateVector& state, const Permutation& perm);

struct BrickworkConfig {
  int gate_width = 3;
  int depth = 0;
};

/// Receives the state after each layer; layer runs from 1 to depth.
using LayerCallback = std::function<void(int layer, const StateVector& state)>;

/// Applies `depth` brickwork layers of independent uniform permutations on
/// S_{2^r}, each acting on a contiguous window of r qubits. Layer l (1-based)
/// tiles windows starting at qubit offset 0 when l is odd and floor(r/2) when
/// l is even; windows that would run past the last qubit are left out (open
/// chain). Gates are sampled layer by layer, windows left to right.
/// Returns the final state; calls on_layer after every layer if provided.
StateVector evolve_brickwork(const StateVector& state, const BrickworkConfig& cfg, Rng& rng,
                             const LayerCallback& on_layer = {});

/// Snapshot form: element t is the state after t layers (element 0 = input).
std::vector<StateVector> evolve_brickwork_snapshots(const StateVector& state,
                                                    const BrickworkConfig& cfg, Rng& rng);

}  // namespace permtherm
