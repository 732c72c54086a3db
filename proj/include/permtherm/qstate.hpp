#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace permtherm {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

inline constexpr int kMaxQubits = 26;

/// Dense N-qubit pure state. Index z reads as the bit-string z_1 ... z_N with
/// qubit 1 the most significant bit. Immutable once built.
class StateVector {
 public:
  /// Throws Dimension if amplitudes.size() != 2^num_qubits, Parameter if
  /// num_qubits is outside [1, 26] or the norm deviates from 1 by > 1e-10.
  StateVector(int num_qubits, std::vector<cplx> amplitudes);

  int num_qubits() const noexcept { return num_qubits_; }
  std::size_t dim() const noexcept { return amplitudes_.size(); }
  std::span<const cplx> amplitudes() const noexcept { return amplitudes_; }
  cplx operator[](std::size_t z) const { return amplitudes_[z]; }

  /// Moves the amplitude buffer out; the state is left empty.
  std::vector<cplx> release() && { return std::move(amplitudes_); }

 private:
  int num_qubits_;
  std::vector<cplx> amplitudes_;
};

/// Subsystem A is the first n_a qubits, B the remaining n_b.
struct Bipartition {
  int n_a = 1;
  int n_b = 1;

  std::size_t d_a() const noexcept { return std::size_t{1} << n_a; }
  std::size_t d_b() const noexcept { return std::size_t{1} << n_b; }
  int total() const noexcept { return n_a + n_b; }

  /// Throws Dimension unless n_a, n_b >= 1 and n_a + n_b == num_qubits.
  void check(int num_qubits) const;
};

/// Uniform product input state (cos(theta0/2)|0> + e^{i phi0} sin(theta0/2)|1>)^N.
struct TiltedParams {
  double theta0 = 0.0;
  double phi0 = 0.0;

  /// sin^4(theta0/2) + cos^4(theta0/2): the single-qubit IPR.
  double g() const;
  /// 1 + sin(theta0) cos(phi0) = |cos(theta0/2) + e^{i phi0} sin(theta0/2)|^2.
  double f() const;
  double alpha0_exponent() const;  // -log2 g
  double beta0_exponent() const;   // 1 - log2 f
};

/// |0>^{(1-alpha0)N} (x) |Y+>^{alpha0 N}.
class MixedParams {
 public:
  /// Throws Parameter unless alpha0 in [0, 1] and alpha0 * N is an integer
  /// (to within 1e-9).
  MixedParams(double alpha0, int num_qubits);

  double alpha0() const noexcept { return alpha0_; }
  int num_qubits() const noexcept { return num_qubits_; }
  int y_count() const noexcept { return y_count_; }

 private:
  double alpha0_;
  int num_qubits_;
  int y_count_;
};

/// A product state described by runs of identical single-qubit states,
/// first run acting on the leading qubits. Used by the closed-form averages,
/// which only need per-qubit factors.
struct ProductState {
  struct Run {
    std::array<cplx, 2> qubit;  // amplitudes of |0>, |1>
    int count = 0;
  };
  std::vector<Run> runs;

  int num_qubits() const;
  static ProductState tilted(int num_qubits, const TiltedParams& params);
  static ProductState mixed(const MixedParams& params);
};

struct DensityOperator {
  CMatrix matrix;
  std::size_t dim() const noexcept { return static_cast<std::size_t>(matrix.rows()); }
};

StateVector make_product_state(const ProductState& product);
StateVector make_tilted_state(int num_qubits, const TiltedParams& params);
StateVector make_mixed_state(const MixedParams& params);

/// Tr_B |psi><psi| via the d_A x d_B matricisation (row Gram matrix).
DensityOperator reduced_density_matrix(const StateVector& state, const Bipartition& part);

/// Tr rho^2 (real part; the imaginary part vanishes for Hermitian input).
double purity(const DensityOperator& rho);

/// || rho - I/d ||_1 (full trace norm, no factor 1/2).
double distance_to_maximally_mixed(const DensityOperator& rho);

/// Sum of absolute eigenvalues of a Hermitian matrix.
double hermitian_trace_norm(const CMatrix& hermitian);

}  // namespace permtherm
