#include "permtherm/qstate.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "permtherm/error.hpp"
#include "permtherm/kernels/kernels.hpp"

namespace permtherm {

StateVector::StateVector(int num_qubits, std::vector<cplx> amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
  require(num_qubits >= 1 && num_qubits <= kMaxQubits, ErrorKind::Parameter,
          "state vector: num_qubits must lie in [1, 26], got " + std::to_string(num_qubits));
  require(amplitudes_.size() == (std::size_t{1} << num_qubits), ErrorKind::Dimension,
          "state vector: amplitude count must be 2^num_qubits");
  const double norm = kernels::active().squared_norm(amplitudes_.data(), amplitudes_.size());
  require(std::abs(norm - 1.0) <= 1e-10, ErrorKind::Parameter,
          "state vector: not normalised (norm^2 = " + std::to_string(norm) + ")");
}

void Bipartition::check(int num_qubits) const {
  require(n_a >= 1 && n_b >= 1 && n_a + n_b == num_qubits, ErrorKind::Dimension,
          "bipartition (" + std::to_string(n_a) + ", " + std::to_string(n_b) +
              ") does not split " + std::to_string(num_qubits) + " qubits");
}

double TiltedParams::g() const {
  const double c2 = std::pow(std::cos(theta0 / 2), 2);
  const double s2 = std::pow(std::sin(theta0 / 2), 2);
  return c2 * c2 + s2 * s2;
}

double TiltedParams::f() const { return 1.0 + std::sin(theta0) * std::cos(phi0); }

double TiltedParams::alpha0_exponent() const { return -std::log2(g()); }

double TiltedParams::beta0_exponent() const { return 1.0 - std::log2(f()); }

MixedParams::MixedParams(double alpha0, int num_qubits)
    : alpha0_(alpha0), num_qubits_(num_qubits), y_count_(0) {
  require(num_qubits >= 1, ErrorKind::Parameter, "mixed model: N must be positive");
  require(alpha0 >= 0.0 && alpha0 <= 1.0, ErrorKind::Parameter,
          "mixed model: alpha0 must lie in [0, 1]");
  const double count = alpha0 * num_qubits;
  const double rounded = std::round(count);
  require(std::abs(count - rounded) <= 1e-9, ErrorKind::Parameter,
          "mixed model: alpha0 * N = " + std::to_string(count) + " is not an integer");
  y_count_ = static_cast<int>(rounded);
}

int ProductState::num_qubits() const {
  int total = 0;
  for (const auto& run : runs) total += run.count;
  return total;
}

ProductState ProductState::tilted(int num_qubits, const TiltedParams& params) {
  const cplx q0 = std::cos(params.theta0 / 2);
  const cplx q1 = std::polar(std::sin(params.theta0 / 2), params.phi0);
  return ProductState{{{{q0, q1}, num_qubits}}};
}

ProductState ProductState::mixed(const MixedParams& params) {
  const double h = 1.0 / std::sqrt(2.0);
  ProductState out;
  const int zeros = params.num_qubits() - params.y_count();
  if (zeros > 0) out.runs.push_back({{cplx(1.0), cplx(0.0)}, zeros});
  if (params.y_count() > 0) out.runs.push_back({{cplx(h), cplx(0.0, h)}, params.y_count()});
  return out;
}

StateVector make_product_state(const ProductState& product) {
  const int n = product.num_qubits();
  require(n >= 1 && n <= kMaxQubits, ErrorKind::Parameter,
          "product state: qubit count must lie in [1, 26]");
  std::vector<cplx> amps{cplx(1.0)};
  amps.reserve(std::size_t{1} << n);
  // Each appended qubit becomes the new least significant bit.
  for (const auto& run : product.runs) {
    for (int q = 0; q < run.count; ++q) {
      std::vector<cplx> next(amps.size() * 2);
      for (std::size_t z = 0; z < amps.size(); ++z) {
        next[2 * z] = amps[z] * run.qubit[0];
        next[2 * z + 1] = amps[z] * run.qubit[1];
      }
      amps = std::move(next);
    }
  }
  // Renormalise away the accumulated rounding of the per-qubit products.
  const double norm = std::sqrt(kernels::active().squared_norm(amps.data(), amps.size()));
  for (auto& a : amps) a /= norm;
  return StateVector(n, std::move(amps));
}

StateVector make_tilted_state(int num_qubits, const TiltedParams& params) {
  require(num_qubits >= 1, ErrorKind::Parameter, "tilted state: N must be positive");
  return make_product_state(ProductState::tilted(num_qubits, params));
}

StateVector make_mixed_state(const MixedParams& params) {
  return make_product_state(ProductState::mixed(params));
}

DensityOperator reduced_density_matrix(const StateVector& state, const Bipartition& part) {
  part.check(state.num_qubits());
  const auto d_a = static_cast<Eigen::Index>(part.d_a());
  const auto d_b = static_cast<Eigen::Index>(part.d_b());
  // Row-major d_A x d_B view of the amplitudes: A indexes the leading bits.
  using RowMajor = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Map<const RowMajor> psi(state.amplitudes().data(), d_a, d_b);
  DensityOperator rho{psi * psi.adjoint()};
  return rho;
}

double purity(const DensityOperator& rho) {
  // Tr(rho^2) = sum_ij |rho_ij|^2 for Hermitian rho.
  return rho.matrix.cwiseAbs2().sum();
}

double hermitian_trace_norm(const CMatrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().sum();
}

double distance_to_maximally_mixed(const DensityOperator& rho) {
  const auto d = static_cast<Eigen::Index>(rho.dim());
  const CMatrix diff = rho.matrix - CMatrix::Identity(d, d) / static_cast<double>(d);
  return hermitian_trace_norm(diff);
}

}  // namespace permtherm
