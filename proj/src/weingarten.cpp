#include "permtherm/weingarten.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>

#include "permtherm/error.hpp"

namespace permtherm {

namespace {

using ld = long double;

std::int64_t factorial(int n) {
  std::int64_t out = 1;
  for (int i = 2; i <= n; ++i) out *= i;
  return out;
}

void require_same_size(const SetPartition& a, const SetPartition& b, const char* who) {
  require(a.size() == b.size(), ErrorKind::Dimension,
          std::string(who) + ": ground sizes differ (" + std::to_string(a.size()) + " vs " +
              std::to_string(b.size()) + ")");
}

void generate_rgs(int n, std::vector<int>& cur, int max_label, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == n) {
    out.push_back(cur);
    return;
  }
  for (int l = 0; l <= max_label + 1; ++l) {
    cur.push_back(l);
    generate_rgs(n, cur, std::max(max_label, l), out);
    cur.pop_back();
  }
}

// Falling factorial d (d-1) ... (d-k+1); zero once k exceeds d.
ld falling_factorial(ld d, int k) {
  ld out = 1.0L;
  for (int j = 0; j < k; ++j) out *= (d - j);
  return out;
}

// Wg(s_i, s_j) over `parts` through the exact-pattern basis.
std::vector<std::vector<ld>> mobius_weingarten(const std::vector<SetPartition>& parts, ld d) {
  const std::size_t n = parts.size();
  std::vector<std::vector<std::int64_t>> mu(n, std::vector<std::int64_t>(n, 0));
  std::vector<std::vector<bool>> below(n, std::vector<bool>(n, false));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t s = 0; s < n; ++s)
      if (refines(parts[r], parts[s])) {
        below[r][s] = true;
        mu[r][s] = mobius(parts[r], parts[s]);
      }

  std::vector<std::vector<ld>> wg(n, std::vector<ld>(n, 0.0L));
  for (std::size_t r = 0; r < n; ++r) {
    const int k = parts[r].num_blocks();
    if (static_cast<ld>(k) > d) continue;
    const ld inv_norm = 1.0L / falling_factorial(d, k);
    for (std::size_t i = 0; i < n; ++i) {
      if (!below[r][i]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (!below[r][j]) continue;
        wg[i][j] += static_cast<ld>(mu[r][i] * mu[r][j]) * inv_norm;
      }
    }
  }
  return wg;
}

// <sigma | (psi (x) psi*)^{(x)2}> for a product input: slots 0, 2 are kets,
// slots 1, 3 are bras. Per qubit the sum over index assignments factorises
// into one sum per block; runs of identical qubits raise it to a power.
std::complex<ld> state_overlap(const SetPartition& sigma, const ProductState& psi0) {
  ld log_mag = 0.0L, phase = 0.0L;
  for (const auto& run : psi0.runs) {
    if (run.count == 0) continue;
    std::complex<ld> per_qubit = 1.0L;
    for (const auto& block : sigma.blocks()) {
      std::complex<ld> sum = 0.0L;
      for (int b = 0; b < 2; ++b) {
        const std::complex<ld> amp(run.qubit[static_cast<std::size_t>(b)].real(),
                                   run.qubit[static_cast<std::size_t>(b)].imag());
        std::complex<ld> term = 1.0L;
        for (int slot : block) term *= (slot % 2 == 0) ? amp : std::conj(amp);
        sum += term;
      }
      per_qubit *= sum;
    }
    const ld mag = std::abs(per_qubit);
    if (mag == 0.0L) return 0.0L;
    log_mag += run.count * std::log(mag);
    phase += run.count * std::arg(per_qubit);
  }
  return std::polar(std::exp(log_mag), phase);
}

}  // namespace

SetPartition::SetPartition(std::vector<int> rgs) : rgs_(std::move(rgs)) {
  require(!rgs_.empty(), ErrorKind::Parameter, "set partition: empty ground set");
  int max_label = -1;
  for (int l : rgs_) {
    require(l >= 0 && l <= max_label + 1, ErrorKind::Parameter,
            "set partition: labels are not a restricted growth string");
    max_label = std::max(max_label, l);
  }
  num_blocks_ = max_label + 1;
}

SetPartition SetPartition::from_labels(const std::vector<int>& labels) {
  std::vector<int> rgs(labels.size());
  std::vector<int> seen;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto it = std::find(seen.begin(), seen.end(), labels[i]);
    if (it == seen.end()) {
      rgs[i] = static_cast<int>(seen.size());
      seen.push_back(labels[i]);
    } else {
      rgs[i] = static_cast<int>(it - seen.begin());
    }
  }
  return SetPartition(std::move(rgs));
}

SetPartition SetPartition::from_blocks(int n, const std::vector<std::vector<int>>& blocks) {
  require(n >= 1, ErrorKind::Parameter, "set partition: ground size must be positive");
  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    require(!blocks[b].empty(), ErrorKind::Parameter, "set partition: empty block");
    for (int e : blocks[b]) {
      require(e >= 0 && e < n && labels[static_cast<std::size_t>(e)] < 0, ErrorKind::Parameter,
              "set partition: blocks must be disjoint subsets of {0, ..., n-1}");
      labels[static_cast<std::size_t>(e)] = static_cast<int>(b);
    }
  }
  require(std::none_of(labels.begin(), labels.end(), [](int l) { return l < 0; }),
          ErrorKind::Parameter, "set partition: blocks do not cover the ground set");
  return from_labels(labels);
}

SetPartition SetPartition::singletons(int n) {
  std::vector<int> rgs(static_cast<std::size_t>(n));
  std::iota(rgs.begin(), rgs.end(), 0);
  return SetPartition(std::move(rgs));
}

SetPartition SetPartition::full_block(int n) {
  return SetPartition(std::vector<int>(static_cast<std::size_t>(n), 0));
}

std::vector<std::vector<int>> SetPartition::blocks() const {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(num_blocks_));
  for (int i = 0; i < size(); ++i) out[static_cast<std::size_t>(label(i))].push_back(i);
  return out;
}

std::vector<SetPartition> enumerate_partitions(int n) {
  require(n >= 1 && n <= kMaxPartitionSize, ErrorKind::Parameter,
          "enumerate_partitions: n must lie in [1, 8], got " + std::to_string(n));
  std::vector<std::vector<int>> all;
  std::vector<int> cur;
  generate_rgs(n, cur, -1, all);

  if (n == 4) {
    static const std::vector<std::vector<int>> pinned = {
        {0, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}, {0, 1, 0, 0}, {0, 1, 1, 1},
        {0, 0, 1, 1}, {0, 1, 1, 0}, {0, 1, 0, 1}, {0, 0, 1, 2}, {0, 1, 0, 2},
        {0, 1, 2, 0}, {0, 1, 2, 1}, {0, 1, 1, 2}, {0, 1, 2, 2}, {0, 1, 2, 3}};
    all = pinned;
  } else {
    std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
      const int ba = *std::max_element(a.begin(), a.end());
      const int bb = *std::max_element(b.begin(), b.end());
      if (ba != bb) return ba < bb;
      return a < b;
    });
  }
  std::vector<SetPartition> out;
  out.reserve(all.size());
  for (auto& rgs : all) out.emplace_back(std::move(rgs));
  return out;
}

SetPartition common_coarsening(const SetPartition& a, const SetPartition& b) {
  require_same_size(a, b, "common_coarsening");
  const int n = a.size();
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  auto unite = [&](int x, int y) {
    x = find(x);
    y = find(y);
    if (x != y) parent[static_cast<std::size_t>(std::max(x, y))] = std::min(x, y);
  };
  for (const auto* p : {&a, &b})
    for (const auto& block : p->blocks())
      for (std::size_t k = 1; k < block.size(); ++k) unite(block[0], block[k]);
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = find(i);
  return SetPartition::from_labels(labels);
}

SetPartition common_refinement(const SetPartition& a, const SetPartition& b) {
  require_same_size(a, b, "common_refinement");
  std::vector<int> labels(static_cast<std::size_t>(a.size()));
  for (int i = 0; i < a.size(); ++i)
    labels[static_cast<std::size_t>(i)] = a.label(i) * kMaxPartitionSize * 8 + b.label(i);
  return SetPartition::from_labels(labels);
}

bool refines(const SetPartition& fine, const SetPartition& coarse) {
  require_same_size(fine, coarse, "refines");
  std::vector<int> image(static_cast<std::size_t>(fine.num_blocks()), -1);
  for (int i = 0; i < fine.size(); ++i) {
    int& target = image[static_cast<std::size_t>(fine.label(i))];
    if (target < 0) target = coarse.label(i);
    else if (target != coarse.label(i)) return false;
  }
  return true;
}

std::int64_t mobius(const SetPartition& fine, const SetPartition& coarse) {
  require(refines(fine, coarse), ErrorKind::Domain, "mobius: first argument must refine the second");
  std::vector<std::vector<bool>> inside(static_cast<std::size_t>(coarse.num_blocks()),
                                        std::vector<bool>(static_cast<std::size_t>(fine.num_blocks()), false));
  for (int i = 0; i < fine.size(); ++i)
    inside[static_cast<std::size_t>(coarse.label(i))][static_cast<std::size_t>(fine.label(i))] = true;
  std::int64_t out = 1;
  for (const auto& row : inside) {
    const int count = static_cast<int>(std::count(row.begin(), row.end(), true));
    out *= ((count - 1) % 2 == 0 ? 1 : -1) * factorial(count - 1);
  }
  return out;
}

WeingartenTable weingarten_exact(int order, std::int64_t d) {
  require(order >= 1 && order <= kMaxPartitionSize, ErrorKind::Parameter,
          "weingarten_exact: order must lie in [1, 8]");
  require(d >= order, ErrorKind::Domain,
          "weingarten_exact: need d >= order for linearly independent partition vectors");
  WeingartenTable table;
  table.order = order;
  table.d = d;
  table.partitions = enumerate_partitions(order);
  const auto n = static_cast<Eigen::Index>(table.partitions.size());
  table.gram.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      table.gram(i, j) = std::pow(static_cast<double>(d),
                                  common_coarsening(table.partitions[static_cast<std::size_t>(i)],
                                                    table.partitions[static_cast<std::size_t>(j)])
                                      .num_blocks());
  table.wg = table.gram.completeOrthogonalDecomposition().pseudoInverse();
  // d >= order makes the Gram matrix invertible, so Newton refinement in
  // long double brings the entries to within rounding of the true inverse.
  using LMatrix = Eigen::Matrix<ld, Eigen::Dynamic, Eigen::Dynamic>;
  const LMatrix g = table.gram.cast<ld>();
  LMatrix x = table.wg.cast<ld>();
  for (int step = 0; step < 2; ++step) x += x * (LMatrix::Identity(n, n) - g * x);
  table.wg = x.cast<double>();
  return table;
}

WeingartenTable weingarten_mobius(int order, std::int64_t d) {
  require(order >= 1 && order <= kMaxPartitionSize, ErrorKind::Parameter,
          "weingarten_mobius: order must lie in [1, 8]");
  require(d >= 1, ErrorKind::Parameter, "weingarten_mobius: d must be positive");
  WeingartenTable table;
  table.order = order;
  table.d = d;
  table.partitions = enumerate_partitions(order);
  const auto wg = mobius_weingarten(table.partitions, static_cast<ld>(d));
  const auto n = static_cast<Eigen::Index>(table.partitions.size());
  table.wg.resize(n, n);
  table.gram.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      table.wg(i, j) = static_cast<double>(wg[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
      table.gram(i, j) = std::pow(static_cast<double>(d),
                                  common_coarsening(table.partitions[static_cast<std::size_t>(i)],
                                                    table.partitions[static_cast<std::size_t>(j)])
                                      .num_blocks());
    }
  return table;
}

double weingarten_asymptotic(const SetPartition& a, const SetPartition& b, double d) {
  const SetPartition m = common_refinement(a, b);
  return static_cast<double>(mobius(m, a) * mobius(m, b)) * std::pow(d, -m.num_blocks());
}

double expected_purity_exact(int num_qubits, int n_a, const ProductState& psi0) {
  require(num_qubits >= 2 && num_qubits <= 60, ErrorKind::Parameter,
          "expected_purity_exact: N must lie in [2, 60]");
  require(psi0.num_qubits() == num_qubits, ErrorKind::Dimension,
          "expected_purity_exact: input state has the wrong qubit count");
  const Bipartition part{n_a, num_qubits - n_a};
  part.check(num_qubits);

  const auto parts = enumerate_partitions(4);
  const ld d = std::ldexp(1.0L, num_qubits);
  const ld d_a = std::ldexp(1.0L, part.n_a);
  const ld d_b = std::ldexp(1.0L, part.n_b);
  const SetPartition tau_id({0, 0, 1, 1});
  const SetPartition tau_swap({0, 1, 1, 0});

  std::vector<ld> swap_side(parts.size());
  std::vector<std::complex<ld>> state_side(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    swap_side[i] = std::pow(d_a, common_coarsening(parts[i], tau_swap).num_blocks()) *
                   std::pow(d_b, common_coarsening(parts[i], tau_id).num_blocks());
    state_side[i] = state_overlap(parts[i], psi0);
  }
  const auto wg = mobius_weingarten(parts, d);
  std::complex<ld> total = 0.0L;
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (std::size_t j = 0; j < parts.size(); ++j) total += wg[i][j] * swap_side[i] * state_side[j];
  return static_cast<double>(total.real());
}

double expected_purity_exact(int num_qubits, int n_a, const TiltedParams& params) {
  return expected_purity_exact(num_qubits, n_a, ProductState::tilted(num_qubits, params));
}

double expected_purity_exact(int n_a, const MixedParams& params) {
  return expected_purity_exact(params.num_qubits(), n_a, ProductState::mixed(params));
}

double expected_purity_expansion(int num_qubits, int n_a, const TiltedParams& params) {
  const double d = std::ldexp(1.0, num_qubits);
  const double d_a = std::ldexp(1.0, n_a);
  const double gN = std::pow(params.g(), num_qubits);
  const double f_over_d = std::pow(params.f() / 2.0, num_qubits);  // f^N / d
  return 1.0 / d_a + gN * (1.0 - 1.0 / d_a) + (1.0 - gN) * (d_a - 2.0 + 1.0 / d_a) / d +
         (1.0 - 1.0 / d_a) * f_over_d * f_over_d;
}

bool tilted_params_excluded(const TiltedParams& params) {
  return std::abs(std::sin(params.theta0)) < 1e-12 || std::abs(params.f() - 2.0) < 1e-12;
}

double theorem1_bound(int num_qubits, int n_a, const TiltedParams& params, double eps) {
  require(eps > 0.0, ErrorKind::Parameter, "theorem1_bound: eps must be positive");
  require(num_qubits >= 2 && n_a >= 1 && n_a < num_qubits, ErrorKind::Parameter,
          "theorem1_bound: need 1 <= N_A < N");
  require(!tilted_params_excluded(params), ErrorKind::Domain,
          "theorem1_bound: (theta0, phi0) is in the excluded set where the bound is vacuous");
  const double d_a = std::ldexp(1.0, n_a);
  const double d_alpha = std::pow(params.g(), num_qubits);            // d^{-alpha0}
  const double d_2beta = std::pow(params.f() / 2.0, 2 * num_qubits);  // d^{-2 beta0}
  const double inv_d = std::ldexp(1.0, -num_qubits);
  return ((d_alpha + d_2beta) * (d_a - 1.0) + inv_d * (d_a * d_a - d_a + 1.0)) / (eps * eps);
}

std::vector<ClassState> class_states(int num_qubits, int n_a, const TiltedParams& params,
                                     double theta_m, double phi_m) {
  const Bipartition part{n_a, num_qubits - n_a};
  part.check(num_qubits);
  require(num_qubits <= 1000, ErrorKind::Parameter, "class_states: N too large");
  const double f = params.f();
  require(std::abs(f - 2.0) >= 1e-12, ErrorKind::Domain,
          "class_states: f = 2, the input is invariant under permutations");

  const double two_n = std::ldexp(1.0, num_qubits);
  const double f_n = std::pow(f, num_qubits);
  const double d_a = std::ldexp(1.0, n_a);
  const double g_plus = 1.0 + std::sin(theta_m) * std::cos(phi_m);
  const double g_minus = 1.0 - std::sin(theta_m) * std::cos(phi_m);
  const double identity_num = (1.0 - std::pow(f / 2.0, num_qubits)) / (two_n - 1.0);

  std::vector<ClassState> out;
  out.reserve(static_cast<std::size_t>(part.n_b) + 1);
  double binom = 1.0;
  for (int nu = 0; nu <= part.n_b; ++nu) {
    if (nu > 0) binom = binom * (part.n_b - nu + 1) / nu;
    const double g = std::pow(g_plus, nu) * std::pow(g_minus, part.n_b - nu);
    const double flat_num = (f_n - 1.0) * g / (two_n * (two_n - 1.0));
    ClassState cs;
    cs.nu_plus = nu;
    cs.born_p = d_a * (identity_num + flat_num);
    cs.identity_coeff = identity_num / cs.born_p;
    cs.flat_coeff = flat_num / cs.born_p;
    cs.class_p = binom * cs.born_p;
    cs.ratio_c = (f_n - 1.0) * g / (two_n - f_n);
    out.push_back(cs);
  }
  return out;
}

MeanState mean_state_coeffs(int num_qubits, const TiltedParams& params) {
  require(num_qubits >= 1 && num_qubits <= 1000, ErrorKind::Parameter,
          "mean_state_coeffs: N out of range");
  const double two_n = std::ldexp(1.0, num_qubits);
  const double f = params.f();
  return {(1.0 - std::pow(f / 2.0, num_qubits)) / (two_n - 1.0),
          (std::pow(f, num_qubits) - 1.0) / (two_n * (two_n - 1.0))};
}

const char* to_string(IprPhase phase) {
  switch (phase) {
    case IprPhase::Ergodic: return "ergodic";
    case IprPhase::NonErgodic: return "non-ergodic";
    case IprPhase::Marginal: return "marginal";
  }
  return "unknown";
}

namespace {

AnnealedPrediction classify(double log_value) {
  AnnealedPrediction out;
  out.log_value = log_value;
  out.value = std::exp(log_value);
  if (std::abs(log_value) < 1e-9) out.phase = IprPhase::Marginal;
  else out.phase = log_value > 0 ? IprPhase::NonErgodic : IprPhase::Ergodic;
  return out;
}

}  // namespace

AnnealedPrediction annealed_ipr_prediction(double ipr0, double ipr_basis, double d_a, double d_b) {
  require(ipr0 > 0.0 && ipr0 <= 1.0 + 1e-12 && ipr_basis > 0.0 && ipr_basis <= 1.0 + 1e-12,
          ErrorKind::Parameter, "annealed_ipr_prediction: IPRs must lie in (0, 1]");
  require(d_a >= 1.0 && d_b >= 1.0, ErrorKind::Parameter,
          "annealed_ipr_prediction: dimensions must be >= 1");
  AnnealedPrediction out = classify(std::log(d_b / d_a * ipr0 * ipr_basis));
  out.value = d_b / d_a * ipr0 * ipr_basis;
  return out;
}

AnnealedPrediction annealed_ipr_prediction_log(double log_ipr0, double log_ipr_basis, int n_a,
                                               int n_b) {
  require(log_ipr0 <= 1e-12 && log_ipr_basis <= 1e-12, ErrorKind::Parameter,
          "annealed_ipr_prediction_log: log IPRs must be <= 0");
  return classify((n_b - n_a) * std::log(2.0) + log_ipr0 + log_ipr_basis);
}

double annealed_rate_mixed(double alpha0, double alpha_m) {
  return std::log(2.0) * (1.0 - alpha0 - alpha_m);
}

double annealed_rate_tilted(const TiltedParams& params, double theta_m) {
  const TiltedParams basis{theta_m, 0.0};
  return std::log(2.0) + std::log(params.g()) + std::log(basis.g());
}

double annealed_boundary_tilted(const TiltedParams& params) {
  // g_m = cos^4 + sin^4 of theta_m/2 = 1 - sin^2(theta_m)/2 must equal 1/(2 g0).
  const double s2 = 2.0 - 1.0 / params.g();
  require(s2 >= 0.0 && s2 <= 1.0, ErrorKind::Domain, "annealed_boundary_tilted: no boundary");
  return std::asin(std::sqrt(s2));
}

}  // namespace permtherm
