#include "permtherm/projens.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "permtherm/error.hpp"
#include "permtherm/kernels/kernels.hpp"

namespace permtherm {

namespace {

constexpr double kPi = std::numbers::pi;

std::size_t int_pow(std::size_t base, int exp) {
  std::size_t out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

// Rotates B qubits in place so that computational index bit b of qubit j
// corresponds to measurement outcome b.
void rotate_into_measurement_frame(std::vector<cplx>& amps, const Bipartition& part,
                                   const MeasurementBasis& basis) {
  const auto& table = kernels::active();
  for (int j = 0; j < part.n_b; ++j) {
    if (basis.is_z(j)) continue;
    const auto [theta, phi] = basis.axes()[static_cast<std::size_t>(j)];
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    // Rows are <n+| and <n-|.
    const cplx u[4] = {cplx(c), std::polar(s, -phi), -std::polar(s, phi), cplx(c)};
    const std::size_t stride = std::size_t{1} << (part.n_b - 1 - j);
    table.apply_pair_unitary(amps.data(), amps.size(), stride, u);
  }
}

std::vector<cplx> rotated_amplitudes(const StateVector& state, const Bipartition& part,
                                     const MeasurementBasis& basis) {
  part.check(state.num_qubits());
  require(basis.n_b() == part.n_b, ErrorKind::Dimension,
          "projected ensemble: basis covers " + std::to_string(basis.n_b()) + " qubits, B has " +
              std::to_string(part.n_b));
  std::vector<cplx> amps(state.amplitudes().begin(), state.amplitudes().end());
  rotate_into_measurement_frame(amps, part, basis);
  return amps;
}

std::vector<double> column_norms(const std::vector<cplx>& amps, const Bipartition& part) {
  std::vector<double> probs(part.d_b(), 0.0);
  kernels::active().accumulate_column_norms(amps.data(), part.d_a(), part.d_b(), probs.data());
  return probs;
}

void tensor_power_into(std::span<const cplx> v, int k, std::vector<cplx>& out) {
  out.assign(1, cplx(1.0));
  std::vector<cplx> next;
  for (int f = 0; f < k; ++f) {
    next.resize(out.size() * v.size());
    for (std::size_t i = 0; i < out.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) next[i * v.size() + j] = out[i] * v[j];
    out.swap(next);
  }
}

CMatrix from_row_major(const std::vector<cplx>& acc, std::size_t dim) {
  using RowMajor = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const auto n = static_cast<Eigen::Index>(dim);
  return Eigen::Map<const RowMajor>(acc.data(), n, n);
}

}  // namespace

MeasurementBasis MeasurementBasis::uniform(int n_b, double theta_m, double phi_m) {
  require(n_b >= 1, ErrorKind::Parameter, "measurement basis: n_b must be positive");
  MeasurementBasis basis;
  basis.axes_.assign(static_cast<std::size_t>(n_b), {theta_m, phi_m});
  return basis;
}

MeasurementBasis MeasurementBasis::mixed(int n_b, int x_count) {
  require(n_b >= 1, ErrorKind::Parameter, "measurement basis: n_b must be positive");
  require(x_count >= 0 && x_count <= n_b, ErrorKind::Parameter,
          "measurement basis: x count must lie in [0, n_b]");
  MeasurementBasis basis;
  basis.axes_.assign(static_cast<std::size_t>(n_b - x_count), {0.0, 0.0});
  basis.axes_.insert(basis.axes_.end(), static_cast<std::size_t>(x_count), {kPi / 2, 0.0});
  return basis;
}

MeasurementBasis MeasurementBasis::mixed_fraction(int n_b, double alpha_m) {
  const double count = alpha_m * n_b;
  const double rounded = std::round(count);
  require(std::abs(count - rounded) <= 1e-9, ErrorKind::Parameter,
          "measurement basis: alpha_m * N_B = " + std::to_string(count) + " is not an integer");
  return mixed(n_b, static_cast<int>(rounded));
}

MeasurementBasis MeasurementBasis::per_qubit(std::vector<std::pair<double, double>> axes) {
  require(!axes.empty(), ErrorKind::Parameter, "measurement basis: no qubits");
  MeasurementBasis basis;
  basis.axes_ = std::move(axes);
  return basis;
}

bool MeasurementBasis::is_z(int j) const { return axes_[static_cast<std::size_t>(j)].first == 0.0; }

ProjectedEnsemble::ProjectedEnsemble(std::size_t d_a, std::vector<std::uint64_t> outcomes,
                                     std::vector<double> probs, std::vector<cplx> states)
    : d_a_(d_a), outcomes_(std::move(outcomes)), probs_(std::move(probs)), states_(std::move(states)) {
  require(d_a_ >= 1, ErrorKind::Dimension, "projected ensemble: d_a must be positive");
  require(!probs_.empty(), ErrorKind::Degenerate, "projected ensemble: no entries");
  require(outcomes_.size() == probs_.size() && states_.size() == probs_.size() * d_a_,
          ErrorKind::Dimension, "projected ensemble: inconsistent entry arrays");
}

std::vector<double> born_probabilities(const StateVector& state, const Bipartition& part,
                                       const MeasurementBasis& basis) {
  return column_norms(rotated_amplitudes(state, part, basis), part);
}

ProjectedEnsemble build_projected_ensemble(const StateVector& state, const Bipartition& part,
                                           const MeasurementBasis& basis, double p_floor) {
  const std::vector<cplx> amps = rotated_amplitudes(state, part, basis);
  const std::vector<double> raw = column_norms(amps, part);
  const std::size_t d_a = part.d_a(), d_b = part.d_b();

  double retained = 0.0;
  std::size_t count = 0;
  for (double p : raw) {
    if (p >= p_floor) {
      retained += p;
      ++count;
    }
  }
  require(count > 0, ErrorKind::Degenerate,
          "projected ensemble: every outcome is below the probability floor");

  std::vector<std::uint64_t> outcomes;
  std::vector<double> probs;
  std::vector<cplx> states;
  outcomes.reserve(count);
  probs.reserve(count);
  states.reserve(count * d_a);
  for (std::size_t nu = 0; nu < d_b; ++nu) {
    if (raw[nu] < p_floor) continue;
    outcomes.push_back(nu);
    probs.push_back(raw[nu] / retained);
    const double inv = 1.0 / std::sqrt(raw[nu]);
    for (std::size_t a = 0; a < d_a; ++a) states.push_back(amps[a * d_b + nu] * inv);
  }
  return ProjectedEnsemble(d_a, std::move(outcomes), std::move(probs), std::move(states));
}

std::vector<cplx> tensor_power(std::span<const cplx> v, int k) {
  std::vector<cplx> out;
  tensor_power_into(v, k, out);
  return out;
}

MomentOperator pe_moment(const ProjectedEnsemble& pe, int k, std::size_t cap) {
  require(k >= 1, ErrorKind::Parameter, "pe_moment: k must be positive");
  const std::size_t dim = int_pow(pe.d_a(), k);
  require(dim <= cap, ErrorKind::Parameter,
          "pe_moment: d_A^k = " + std::to_string(dim) + " exceeds cap " + std::to_string(cap));
  std::vector<cplx> acc(dim * dim, cplx(0.0));
  std::vector<cplx> w;
  const auto& table = kernels::active();
  for (std::size_t i = 0; i < pe.size(); ++i) {
    tensor_power_into(pe.state(i), k, w);
    table.hermitian_rank1_update(acc.data(), w.data(), dim, pe.prob(i));
  }
  return {pe.d_a(), k, from_row_major(acc, dim)};
}

MomentOperator haar_moment(std::size_t d_a, int k) {
  require(d_a >= 1, ErrorKind::Parameter, "haar_moment: d_a must be positive");
  require(k >= 1 && k <= 4, ErrorKind::Parameter, "haar_moment: k must lie in [1, 4]");
  const std::size_t dim = int_pow(d_a, k);
  require(dim <= kDefaultMomentCap, ErrorKind::Parameter, "haar_moment: d_A^k exceeds cap");

  std::vector<int> tau(static_cast<std::size_t>(k));
  std::iota(tau.begin(), tau.end(), 0);
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  std::vector<std::size_t> digits(static_cast<std::size_t>(k));
  do {
    for (std::size_t col = 0; col < dim; ++col) {
      std::size_t rest = col;
      for (int f = k - 1; f >= 0; --f) {
        digits[static_cast<std::size_t>(f)] = rest % d_a;
        rest /= d_a;
      }
      std::size_t row = 0;
      for (int f = 0; f < k; ++f) row = row * d_a + digits[static_cast<std::size_t>(tau[static_cast<std::size_t>(f)])];
      m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) += 1.0;
    }
  } while (std::next_permutation(tau.begin(), tau.end()));

  double rising = 1.0;
  for (int j = 0; j < k; ++j) rising *= static_cast<double>(d_a) + j;
  return {d_a, k, m / rising};
}

MomentOperator classical_moment(std::size_t d_a, int k) {
  require(d_a >= 1 && k >= 1, ErrorKind::Parameter, "classical_moment: need d_a >= 1, k >= 1");
  const std::size_t dim = int_pow(d_a, k);
  require(dim <= kDefaultMomentCap, ErrorKind::Parameter, "classical_moment: d_A^k exceeds cap");
  std::size_t stride = 0;  // index of |z...z> is z * (1 + d + ... + d^{k-1})
  for (int f = 0; f < k; ++f) stride = stride * d_a + 1;
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t z = 0; z < d_a; ++z) {
    const auto idx = static_cast<Eigen::Index>(z * stride);
    m(idx, idx) = 1.0 / static_cast<double>(d_a);
  }
  return {d_a, k, m};
}

MomentOperator orthogonal_haar_moment(std::size_t d_a, int k) {
  require(d_a >= 1, ErrorKind::Parameter, "orthogonal_haar_moment: d_a must be positive");
  require(k == 1 || k == 2, ErrorKind::Parameter,
          "orthogonal_haar_moment: closed form only for k in {1, 2}");
  const auto d = static_cast<Eigen::Index>(d_a);
  if (k == 1) return {d_a, 1, CMatrix::Identity(d, d) / static_cast<double>(d_a)};
  const Eigen::Index dim = d * d;
  CMatrix m = CMatrix::Identity(dim, dim);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      m(i * d + j, j * d + i) += 1.0;  // swap
      m(i * d + i, j * d + j) += 1.0;  // d |Omega><Omega|
    }
  const double norm = static_cast<double>(d_a) * (static_cast<double>(d_a) + 2.0);
  return {d_a, 2, m / norm};
}

ProjectedEnsemble sample_reference_ensemble(ReferenceKind kind, std::size_t d_a, std::size_t n,
                                            Rng& rng) {
  require(n >= 1, ErrorKind::Parameter, "sample_reference_ensemble: n must be positive");
  require(d_a >= 1, ErrorKind::Parameter, "sample_reference_ensemble: d_a must be positive");
  std::vector<std::uint64_t> outcomes(n);
  std::iota(outcomes.begin(), outcomes.end(), std::uint64_t{0});
  std::vector<double> probs(n, 1.0 / static_cast<double>(n));
  std::vector<cplx> states(n * d_a, cplx(0.0));
  for (std::size_t s = 0; s < n; ++s) {
    cplx* v = states.data() + s * d_a;
    if (kind == ReferenceKind::Classical) {
      v[rng.uniform_below(d_a)] = 1.0;
      continue;
    }
    double norm2 = 0.0;
    for (std::size_t i = 0; i < d_a; ++i) {
      const double re = rng.normal();
      const double im = (kind == ReferenceKind::ComplexHaar) ? rng.normal() : 0.0;
      v[i] = cplx(re, im);
      norm2 += re * re + im * im;
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (std::size_t i = 0; i < d_a; ++i) v[i] *= inv;
  }
  return ProjectedEnsemble(d_a, std::move(outcomes), std::move(probs), std::move(states));
}

double trace_distance(const MomentOperator& a, const MomentOperator& b) {
  require(a.d_a == b.d_a && a.k == b.k && a.matrix.rows() == b.matrix.rows() &&
              a.matrix.cols() == b.matrix.cols(),
          ErrorKind::Dimension, "trace_distance: operators act on different spaces");
  const CMatrix diff = a.matrix - b.matrix;
  const CMatrix herm = 0.5 * (diff + diff.adjoint());
  return 0.5 * hermitian_trace_norm(herm);
}

}  // namespace permtherm
