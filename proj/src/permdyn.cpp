#include "permtherm/permdyn.hpp"

#include <numeric>
#include <string>

#include "permtherm/error.hpp"

namespace permtherm {

Permutation::Permutation(std::vector<std::uint32_t> images) : images_(std::move(images)) {
  require(!images_.empty(), ErrorKind::Parameter, "permutation: empty image list");
  std::vector<bool> seen(images_.size(), false);
  for (std::uint32_t img : images_) {
    require(img < images_.size() && !seen[img], ErrorKind::Parameter,
            "permutation: images are not a bijection");
    seen[img] = true;
  }
}

Permutation Permutation::identity(std::size_t d) {
  require(d >= 1, ErrorKind::Parameter, "permutation: size must be positive");
  std::vector<std::uint32_t> images(d);
  std::iota(images.begin(), images.end(), 0u);
  return Permutation(Unchecked{}, std::move(images));
}

Permutation Permutation::inverse() const {
  std::vector<std::uint32_t> inv(images_.size());
  for (std::size_t z = 0; z < images_.size(); ++z) inv[images_[z]] = static_cast<std::uint32_t>(z);
  return Permutation(Unchecked{}, std::move(inv));
}

Permutation Permutation::after(const Permutation& first) const {
  require(first.size() == size(), ErrorKind::Dimension, "permutation: composing different sizes");
  std::vector<std::uint32_t> out(images_.size());
  for (std::size_t z = 0; z < images_.size(); ++z) out[z] = images_[first.images_[z]];
  return Permutation(Unchecked{}, std::move(out));
}

Permutation sample_permutation(std::size_t d, Rng& rng) {
  require(d >= 1, ErrorKind::Parameter, "sample_permutation: d must be positive");
  require(d <= (std::size_t{1} << 32), ErrorKind::Parameter, "sample_permutation: d too large");
  std::vector<std::uint32_t> images(d);
  std::iota(images.begin(), images.end(), 0u);
  for (std::size_t i = d - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_below(i + 1));
    std::swap(images[i], images[j]);
  }
  return Permutation(Permutation::Unchecked{}, std::move(images));
}

StateVector apply_global_permutation(const StateVector& state, const Permutation& perm) {
  require(perm.size() == state.dim(), ErrorKind::Dimension,
          "apply_global_permutation: permutation size " + std::to_string(perm.size()) +
              " != state dimension " + std::to_string(state.dim()));
  const auto src = state.amplitudes();
  const auto& images = perm.images();
  std::vector<cplx> out(src.size());
  for (std::size_t z = 0; z < src.size(); ++z) out[images[z]] = src[z];
  return StateVector(state.num_qubits(), std::move(out));
}

namespace {

// Global relabelling for one layer: gates on disjoint windows compose into a
// single map z -> z' obtained by rewriting each window's bits.
struct Window {
  int shift;  // position of the window's least significant bit
  std::vector<std::uint32_t> local;  // permutation of S_{2^r}
};

std::vector<Window> sample_layer(int num_qubits, int width, int offset, Rng& rng) {
  std::vector<Window> windows;
  for (int start = offset; start + width <= num_qubits; start += width) {
    Permutation gate = sample_permutation(std::size_t{1} << width, rng);
    // Qubit `start` (0-based from the left) is bit num_qubits-1-start.
    windows.push_back({num_qubits - start - width, gate.images()});
  }
  return windows;
}

std::vector<cplx> apply_layer(std::span<const cplx> src, const std::vector<Window>& windows,
                              int width) {
  const std::uint64_t mask = (std::uint64_t{1} << width) - 1;
  std::vector<cplx> out(src.size());
  for (std::uint64_t z = 0; z < src.size(); ++z) {
    std::uint64_t target = z;
    for (const auto& w : windows) {
      const std::uint64_t local = (z >> w.shift) & mask;
      target = (target & ~(mask << w.shift)) | (std::uint64_t{w.local[local]} << w.shift);
    }
    out[target] = src[z];
  }
  return out;
}

}  // namespace

StateVector evolve_brickwork(const StateVector& state, const BrickworkConfig& cfg, Rng& rng,
                             const LayerCallback& on_layer) {
  const int n = state.num_qubits();
  require(cfg.gate_width >= 1 && cfg.gate_width <= n, ErrorKind::Parameter,
          "brickwork: gate width must lie in [1, N]");
  require(cfg.depth >= 0, ErrorKind::Parameter, "brickwork: depth must be non-negative");
  StateVector current = state;
  for (int layer = 1; layer <= cfg.depth; ++layer) {
    const int offset = (layer % 2 == 1) ? 0 : cfg.gate_width / 2;
    const auto windows = sample_layer(n, cfg.gate_width, offset, rng);
    current = StateVector(n, apply_layer(current.amplitudes(), windows, cfg.gate_width));
    if (on_layer) on_layer(layer, current);
  }
  return current;
}

std::vector<StateVector> evolve_brickwork_snapshots(const StateVector& state,
                                                    const BrickworkConfig& cfg, Rng& rng) {
  std::vector<StateVector> snapshots{state};
  snapshots.reserve(static_cast<std::size_t>(cfg.depth) + 1);
  evolve_brickwork(state, cfg, rng,
                   [&](int, const StateVector& s) { snapshots.push_back(s); });
  return snapshots;
}

}  // namespace permtherm
