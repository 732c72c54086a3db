#include "permtherm/kernels/kernels.hpp"

namespace permtherm::kernels {
namespace {

// Plain complex product; std::complex operator* carries NaN/Inf recovery
// that blocks vectorisation.
inline cplx mul(cplx a, cplx b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

void apply_pair_unitary(cplx* amps, std::size_t len, std::size_t stride, const cplx* u) {
  const cplx u00 = u[0], u01 = u[1], u10 = u[2], u11 = u[3];
  for (std::size_t base = 0; base < len; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const cplx a0 = amps[i];
      const cplx a1 = amps[i + stride];
      amps[i] = mul(u00, a0) + mul(u01, a1);
      amps[i + stride] = mul(u10, a0) + mul(u11, a1);
    }
  }
}

void accumulate_column_norms(const cplx* m, std::size_t rows, std::size_t cols, double* out) {
  for (std::size_t r = 0; r < rows; ++r) {
    const cplx* row = m + r * cols;
    for (std::size_t j = 0; j < cols; ++j) {
      const double re = row[j].real(), im = row[j].imag();
      out[j] += re * re + im * im;
    }
  }
}

void hermitian_rank1_update(cplx* acc, const cplx* v, std::size_t dim, double weight) {
  for (std::size_t i = 0; i < dim; ++i) {
    const cplx s = weight * v[i];
    cplx* row = acc + i * dim;
    for (std::size_t j = 0; j < dim; ++j) row[j] += mul(s, std::conj(v[j]));
  }
}

double squared_norm(const cplx* v, std::size_t n) {
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += std::norm(v[i]);
  return total;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{Backend::Scalar, &apply_pair_unitary, &accumulate_column_norms,
                                 &hermitian_rank1_update, &squared_norm};
  return table;
}

}  // namespace permtherm::kernels
