#include "permtherm/oracle.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "permtherm/analysis.hpp"
#include "permtherm/error.hpp"
#include "permtherm/parallel.hpp"
#include "permtherm/permdyn.hpp"

namespace permtherm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <class Visit>
std::size_t for_each_permutation(const StateVector& psi0, Visit&& visit) {
  require(psi0.num_qubits() <= kMaxBruteForceQubits, ErrorKind::Parameter,
          "brute_force_permutation_average: N must be <= 3, got " +
              std::to_string(psi0.num_qubits()));
  std::vector<std::uint32_t> images(psi0.dim());
  std::iota(images.begin(), images.end(), 0u);
  std::size_t count = 0;
  do {
    visit(apply_global_permutation(psi0, Permutation(images)));
    ++count;
  } while (std::next_permutation(images.begin(), images.end()));
  return count;
}

// Two largest of m values: returns X_(1) - X_(2).
int top_gap(const std::vector<int>& x) {
  int first = -1, second = -1;
  for (int v : x) {
    if (v > first) {
      second = first;
      first = v;
    } else if (v > second) {
      second = v;
    }
  }
  return first - second;
}

}  // namespace

OracleReport brute_force_permutation_average(const StateVector& psi0,
                                             const ScalarFunctional& functional) {
  const auto start = Clock::now();
  double sum = 0.0;
  OracleReport report;
  report.exact = true;
  report.n_evaluations = for_each_permutation(psi0, [&](const StateVector& s) { sum += functional(s); });
  report.value = sum / static_cast<double>(report.n_evaluations);
  report.elapsed_seconds = seconds_since(start);
  return report;
}

OracleReport brute_force_permutation_average(const StateVector& psi0,
                                             const MatrixFunctional& functional) {
  const auto start = Clock::now();
  CMatrix sum;
  OracleReport report;
  report.exact = true;
  report.n_evaluations = for_each_permutation(psi0, [&](const StateVector& s) {
    CMatrix m = functional(s);
    if (sum.size() == 0) sum = CMatrix::Zero(m.rows(), m.cols());
    sum += m;
  });
  report.matrix = sum / static_cast<double>(report.n_evaluations);
  report.elapsed_seconds = seconds_since(start);
  return report;
}

OracleReport monte_carlo_permutation_average(const StateVector& psi0,
                                             const ScalarFunctional& functional, std::size_t n,
                                             const SeedSpec& seed, int threads) {
  require(n >= 2, ErrorKind::Parameter, "monte_carlo_permutation_average: need n >= 2");
  const auto start = Clock::now();
  std::vector<double> values(n);
  parallel_for(n, threads, [&](std::size_t s) {
    Rng rng = seed.stream({s});
    values[s] = functional(apply_global_permutation(psi0, sample_permutation(psi0.dim(), rng)));
  });
  const MeanSe stat = mean_se(values);
  OracleReport report;
  report.value = stat.mean;
  report.se = stat.se;
  report.n_evaluations = n;
  report.elapsed_seconds = seconds_since(start);
  return report;
}

TopGapReport binomial_top_gap_simulator(int m, int binomial_n, double alpha, std::size_t n_trials,
                                        const SeedSpec& seed) {
  require(m >= 2, ErrorKind::Parameter, "binomial_top_gap_simulator: need m >= 2");
  require(binomial_n >= 1 && alpha > 0.0, ErrorKind::Parameter,
          "binomial_top_gap_simulator: need N >= 1 and alpha > 0");
  require(n_trials >= 2, ErrorKind::Parameter, "binomial_top_gap_simulator: need >= 2 trials");
  const double window = std::pow(static_cast<double>(binomial_n), alpha);
  const int full_words = binomial_n / 64;
  const int tail_bits = binomial_n % 64;
  const std::uint64_t tail_mask = tail_bits ? (std::uint64_t{1} << tail_bits) - 1 : 0;

  std::size_t hits = 0;
  std::vector<int> x(static_cast<std::size_t>(m));
  for (std::size_t t = 0; t < n_trials; ++t) {
    Rng rng = seed.stream({t});
    for (auto& xi : x) {
      int count = 0;
      for (int w = 0; w < full_words; ++w) count += std::popcount(rng.bits());
      if (tail_bits) count += std::popcount(rng.bits() & tail_mask);
      xi = count;
    }
    if (top_gap(x) <= window) ++hits;
  }
  TopGapReport report;
  report.n_trials = n_trials;
  report.empirical_prob = static_cast<double>(hits) / static_cast<double>(n_trials);
  report.se = std::sqrt(report.empirical_prob * (1.0 - report.empirical_prob) /
                        static_cast<double>(n_trials));
  report.bound = lemma1_bound(m, binomial_n, alpha);
  return report;
}

double binomial_top_gap_exact(int m, int binomial_n, double alpha) {
  require(m >= 2 && binomial_n >= 1, ErrorKind::Parameter, "binomial_top_gap_exact: need m >= 2, N >= 1");
  require(std::pow(binomial_n + 1.0, m) <= 1e7, ErrorKind::Parameter,
          "binomial_top_gap_exact: (N+1)^m too large to enumerate");
  std::vector<double> pmf(static_cast<std::size_t>(binomial_n) + 1);
  double c = 1.0;
  for (int k = 0; k <= binomial_n; ++k) {
    if (k > 0) c = c * (binomial_n - k + 1) / k;
    pmf[static_cast<std::size_t>(k)] = c * std::ldexp(1.0, -binomial_n);
  }
  const double window = std::pow(static_cast<double>(binomial_n), alpha);
  std::vector<int> x(static_cast<std::size_t>(m), 0);
  double total = 0.0;
  for (;;) {
    double w = 1.0;
    for (int v : x) w *= pmf[static_cast<std::size_t>(v)];
    if (top_gap(x) <= window) total += w;
    std::size_t i = 0;
    while (i < x.size() && ++x[i] > binomial_n) x[i++] = 0;
    if (i == x.size()) break;
  }
  return total;
}

}  // namespace permtherm
