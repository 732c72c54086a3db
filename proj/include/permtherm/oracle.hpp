#pragma once

#include <cstddef>
#include <functional>

#include "permtherm/qstate.hpp"
#include "permtherm/rng.hpp"

namespace permtherm {

using ScalarFunctional = std::function<double(const StateVector&)>;
using MatrixFunctional = std::function<CMatrix(const StateVector&)>;

struct OracleReport {
  bool exact = false;
  double value = 0.0;  // exact average, or Monte Carlo mean
  double se = 0.0;     // 0 on the exact path
  CMatrix matrix;      // set by the matrix-valued oracle
  std::size_t n_evaluations = 0;
  double elapsed_seconds = 0.0;
};

inline constexpr int kMaxBruteForceQubits = 3;

/// Exact average of `functional` over U_pi psi0 for every pi in S_{2^N},
/// enumerated in lexicographic order. N <= 3.
OracleReport brute_force_permutation_average(const StateVector& psi0,
                                             const ScalarFunctional& functional);
OracleReport brute_force_permutation_average(const StateVector& psi0,
                                             const MatrixFunctional& functional);

/// Mean and standard error over n sampled permutations; sample s draws its
/// permutation from seed.stream({s}). Independent of `threads`.
OracleReport monte_carlo_permutation_average(const StateVector& psi0,
                                             const ScalarFunctional& functional, std::size_t n,
                                             const SeedSpec& seed, int threads = 1);

struct TopGapReport {
  double empirical_prob = 0.0;
  double se = 0.0;
  double bound = 0.0;
  std::size_t n_trials = 0;
};

/// P(|X_(1) - X_(2)| <= N^alpha) for m iid Binomial(N, 1/2) draws (each the
/// popcount of N random bits), with the matching upper bound. Trial t uses
/// seed.stream({t}).
TopGapReport binomial_top_gap_simulator(int m, int binomial_n, double alpha,
                                        std::size_t n_trials, const SeedSpec& seed);

/// Same probability by enumerating all (N+1)^m outcomes. Small m, N only.
double binomial_top_gap_exact(int m, int binomial_n, double alpha);

}  // namespace permtherm
