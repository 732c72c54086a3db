#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "permtherm/qstate.hpp"
#include "permtherm/rng.hpp"

namespace permtherm {

/// Local projective measurement on every B qubit. Outcome bit 0 is the
/// eigenstate along +n, i.e. cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
class MeasurementBasis {
 public:
  /// Same axis (theta_m, phi_m) on all n_b qubits.
  static MeasurementBasis uniform(int n_b, double theta_m, double phi_m = 0.0);

  /// Mixed scheme: the trailing x_count of n_b qubits are measured along x,
  /// the rest along z.
  static MeasurementBasis mixed(int n_b, int x_count);

  /// Mixed scheme from a fraction; throws Parameter unless alpha_m * n_b is
  /// an integer (to within 1e-9).
  static MeasurementBasis mixed_fraction(int n_b, double alpha_m);

  /// Arbitrary per-qubit axes (theta, phi) for B qubits in order.
  static MeasurementBasis per_qubit(std::vector<std::pair<double, double>> axes);

  int n_b() const noexcept { return static_cast<int>(axes_.size()); }
  const std::vector<std::pair<double, double>>& axes() const noexcept { return axes_; }

  /// True when B qubit j needs no rotation (z axis).
  bool is_z(int j) const;

 private:
  std::vector<std::pair<double, double>> axes_;
};

/// Entries (outcome, p, state) stored as parallel arrays in ascending
/// outcome order; states are rows of length d_a.
class ProjectedEnsemble {
 public:
  ProjectedEnsemble(std::size_t d_a, std::vector<std::uint64_t> outcomes, std::vector<double> probs,
                    std::vector<cplx> states);

  std::size_t d_a() const noexcept { return d_a_; }
  std::size_t size() const noexcept { return probs_.size(); }
  std::uint64_t outcome(std::size_t i) const { return outcomes_[i]; }
  double prob(std::size_t i) const { return probs_[i]; }
  std::span<const cplx> state(std::size_t i) const {
    return {states_.data() + i * d_a_, d_a_};
  }
  const std::vector<double>& probs() const noexcept { return probs_; }

 private:
  std::size_t d_a_;
  std::vector<std::uint64_t> outcomes_;
  std::vector<double> probs_;
  std::vector<cplx> states_;
};

inline constexpr double kDefaultProbabilityFloor = 1e-14;
inline constexpr std::size_t kDefaultMomentCap = 4096;

/// Rotates every B qubit into its measurement frame, then reads column nu of
/// the d_A x d_B matricisation as the unnormalised projected state. Outcomes
/// with p < p_floor are dropped and the rest renormalised.
ProjectedEnsemble build_projected_ensemble(const StateVector& state, const Bipartition& part,
                                           const MeasurementBasis& basis,
                                           double p_floor = kDefaultProbabilityFloor);

/// Born probabilities of all 2^{N_B} outcomes before flooring (for
/// completeness checks).
std::vector<double> born_probabilities(const StateVector& state, const Bipartition& part,
                                       const MeasurementBasis& basis);

/// k-th moment operator on the k-fold tensor power of C^{d_A}.
struct MomentOperator {
  std::size_t d_a = 0;
  int k = 0;
  CMatrix matrix;
};

/// Sum_nu p(nu) (|psi><psi|)^{(x)k}, accumulated in ascending outcome order.
MomentOperator pe_moment(const ProjectedEnsemble& pe, int k, std::size_t cap = kDefaultMomentCap);

/// Sum over S_k of permutation operators divided by d(d+1)...(d+k-1).
MomentOperator haar_moment(std::size_t d_a, int k);

/// (1/d) sum_z (|z><z|)^{(x)k}.
MomentOperator classical_moment(std::size_t d_a, int k);

/// Real orthogonal Haar moment, k in {1, 2}.
MomentOperator orthogonal_haar_moment(std::size_t d_a, int k);

enum class ReferenceKind { ComplexHaar, RealHaar, Classical };

/// n equal-weight states drawn from the reference ensemble.
ProjectedEnsemble sample_reference_ensemble(ReferenceKind kind, std::size_t d_a, std::size_t n,
                                            Rng& rng);

/// (1/2) || a - b ||_1 from the eigenvalues of the Hermitian difference.
double trace_distance(const MomentOperator& a, const MomentOperator& b);

/// v^{(x)k} for a d-dimensional v (length d^k, first factor most significant).
std::vector<cplx> tensor_power(std::span<const cplx> v, int k);

}  // namespace permtherm
