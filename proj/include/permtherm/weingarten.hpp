#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "permtherm/qstate.hpp"

namespace permtherm {

/// Set partition of {0, ..., n-1} stored as a restricted growth string:
/// label(i) is the index of the block containing i, blocks numbered by
/// their smallest element.
class SetPartition {
 public:
  /// Throws Parameter unless `rgs` is a restricted growth string.
  explicit SetPartition(std::vector<int> rgs);

  /// Canonicalises arbitrary block labels (equal label = same block).
  static SetPartition from_labels(const std::vector<int>& labels);
  /// Blocks with 0-based elements.
  static SetPartition from_blocks(int n, const std::vector<std::vector<int>>& blocks);
  static SetPartition singletons(int n);
  static SetPartition full_block(int n);

  int size() const noexcept { return static_cast<int>(rgs_.size()); }
  int num_blocks() const noexcept { return num_blocks_; }
  int label(int i) const { return rgs_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& rgs() const noexcept { return rgs_; }
  /// Blocks sorted by minimum element; elements ascending, 0-based.
  std::vector<std::vector<int>> blocks() const;

  friend bool operator==(const SetPartition&, const SetPartition&) = default;

 private:
  std::vector<int> rgs_;
  int num_blocks_ = 0;
};

inline constexpr int kMaxPartitionSize = 8;

/// All Bell(n) partitions. n = 4 follows the fixed sigma_1 ... sigma_15
/// listing (aaaa, aaab, aaba, abaa, abbb, aabb, abba, abab, aabc, abac,
/// abca, abcb, abbc, abcc, abcd); other n are ordered by block count, then
/// lexicographically by restricted growth string.
std::vector<SetPartition> enumerate_partitions(int n);

/// Finest partition coarser than both (transitive closure of block unions).
SetPartition common_coarsening(const SetPartition& a, const SetPartition& b);

/// Coarsest partition finer than both (pairwise block intersections).
SetPartition common_refinement(const SetPartition& a, const SetPartition& b);

/// True when every block of `fine` lies inside a block of `coarse`.
bool refines(const SetPartition& fine, const SetPartition& coarse);

/// Moebius function of the partition lattice. Throws Domain unless fine
/// refines coarse.
std::int64_t mobius(const SetPartition& fine, const SetPartition& coarse);

struct WeingartenTable {
  int order = 0;
  std::int64_t d = 0;
  std::vector<SetPartition> partitions;
  Eigen::MatrixXd wg;
  Eigen::MatrixXd gram;
};

/// Wg as the pseudo-inverse of the Gram matrix d^{#cc(s_i, s_j)}.
/// Requires 1 <= order <= 8 and d >= order.
WeingartenTable weingarten_exact(int order, std::int64_t d);

/// Same table from the orthogonal exact-pattern basis:
///   Wg(s, t) = sum_{r refining s and t} mu(r, s) mu(r, t) / (d)_{#r}
/// where (d)_k is the falling factorial; terms with #r > d vanish. Valid
/// for every d >= 1.
WeingartenTable weingarten_mobius(int order, std::int64_t d);

/// Leading-order Wg: mu(m, a) mu(m, b) d^{-#m} with m the common
/// refinement of a and b.
double weingarten_asymptotic(const SetPartition& a, const SetPartition& b, double d);

/// E_pi Tr rho_A^2 for U_pi|psi0> with a product input, from the full
/// 15 x 15 Weingarten sum on four copies. N <= 60.
double expected_purity_exact(int num_qubits, int n_a, const ProductState& psi0);
double expected_purity_exact(int num_qubits, int n_a, const TiltedParams& params);
double expected_purity_exact(int n_a, const MixedParams& params);

/// Large-N expansion for the tilted model (drops o(1/d)).
double expected_purity_expansion(int num_qubits, int n_a, const TiltedParams& params);

/// True for the parameter sets where the regular-thermalization bound is
/// vacuous: theta0 in {0, pi} or (theta0, phi0) = (pi/2, 0).
bool tilted_params_excluded(const TiltedParams& params);

/// Probability bound on ||rho_A - I/d_A||_1 > eps. Throws Domain for the
/// excluded parameter sets, Parameter for eps <= 0.
double theorem1_bound(int num_qubits, int n_a, const TiltedParams& params, double eps);

struct ClassState {
  int nu_plus = 0;
  double identity_coeff = 0.0;  // rho = a I_A + b M_A
  double flat_coeff = 0.0;
  double born_p = 0.0;   // probability of one outcome in the class
  double class_p = 0.0;  // binom(N_B, nu_plus) * born_p
  double ratio_c = 0.0;  // b / a
};

/// Averaged post-measurement states for each outcome class nu_plus (number
/// of B outcomes aligned with the measurement axis). Throws Domain when
/// f = 2 (input invariant under permutations).
std::vector<ClassState> class_states(int num_qubits, int n_a, const TiltedParams& params,
                                     double theta_m, double phi_m = 0.0);

struct MeanState {
  double identity_coeff = 0.0;
  double flat_coeff = 0.0;
};

/// E_pi U_pi|psi0><psi0|U_pi^dag = a I + b M for the tilted input.
MeanState mean_state_coeffs(int num_qubits, const TiltedParams& params);

enum class IprPhase { Ergodic, NonErgodic, Marginal };

const char* to_string(IprPhase phase);

struct AnnealedPrediction {
  double value = 0.0;
  double log_value = 0.0;
  IprPhase phase = IprPhase::Marginal;
};

/// (d_B / d_A) IPR0 IPR_basis, with |ln value| < 1e-9 reported as marginal.
AnnealedPrediction annealed_ipr_prediction(double ipr0, double ipr_basis, double d_a, double d_b);

/// Same in log space (natural logs of the two IPRs), for sizes where the
/// IPRs underflow.
AnnealedPrediction annealed_ipr_prediction_log(double log_ipr0, double log_ipr_basis, int n_a,
                                               int n_b);

/// Per-qubit growth rate ln2 + ln IPR0^{1/N} + ln IPR_basis^{1/N_B} of the
/// predictor as N -> infinity at fixed N_A. Mixed model: ln2 (1 - a0 - am).
double annealed_rate_mixed(double alpha0, double alpha_m);
double annealed_rate_tilted(const TiltedParams& params, double theta_m);

/// theta_m in [0, pi/2] where annealed_rate_tilted changes sign.
double annealed_boundary_tilted(const TiltedParams& params);

}  // namespace permtherm
