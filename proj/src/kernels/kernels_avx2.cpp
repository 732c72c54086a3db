#include "permtherm/kernels/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>

namespace permtherm::kernels {
namespace {

// A __m256d holds two interleaved complex doubles [re0, im0, re1, im1].

// x * c for a broadcast complex scalar c = (cr, ci).
inline __m256d cmul_scalar(__m256d x, __m256d cr, __m256d ci) {
  const __m256d swapped = _mm256_permute_pd(x, 0b0101);  // [im0, re0, im1, re1]
  return _mm256_fmaddsub_pd(x, cr, _mm256_mul_pd(swapped, ci));
}

void apply_pair_unitary(cplx* amps, std::size_t len, std::size_t stride, const cplx* u) {
  if (stride < 2) {
    scalar_table().apply_pair_unitary(amps, len, stride, u);
    return;
  }
  const __m256d u00r = _mm256_set1_pd(u[0].real()), u00i = _mm256_set1_pd(u[0].imag());
  const __m256d u01r = _mm256_set1_pd(u[1].real()), u01i = _mm256_set1_pd(u[1].imag());
  const __m256d u10r = _mm256_set1_pd(u[2].real()), u10i = _mm256_set1_pd(u[2].imag());
  const __m256d u11r = _mm256_set1_pd(u[3].real()), u11i = _mm256_set1_pd(u[3].imag());
  auto* data = reinterpret_cast<double*>(amps);
  for (std::size_t base = 0; base < len; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; i += 2) {
      double* p0 = data + 2 * i;
      double* p1 = data + 2 * (i + stride);
      const __m256d a0 = _mm256_loadu_pd(p0);
      const __m256d a1 = _mm256_loadu_pd(p1);
      const __m256d out0 = _mm256_add_pd(cmul_scalar(a0, u00r, u00i), cmul_scalar(a1, u01r, u01i));
      const __m256d out1 = _mm256_add_pd(cmul_scalar(a0, u10r, u10i), cmul_scalar(a1, u11r, u11i));
      _mm256_storeu_pd(p0, out0);
      _mm256_storeu_pd(p1, out1);
    }
  }
}

void accumulate_column_norms(const cplx* m, std::size_t rows, std::size_t cols, double* out) {
  const std::size_t vec_cols = cols & ~std::size_t{3};
  for (std::size_t r = 0; r < rows; ++r) {
    const auto* row = reinterpret_cast<const double*>(m + r * cols);
    std::size_t j = 0;
    for (; j < vec_cols; j += 4) {
      const __m256d a = _mm256_loadu_pd(row + 2 * j);
      const __m256d b = _mm256_loadu_pd(row + 2 * j + 4);
      // hadd gives [|c0|^2, |c2|^2, |c1|^2, |c3|^2]
      const __m256d h = _mm256_hadd_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b));
      const __m256d ordered = _mm256_permute4x64_pd(h, 0b11011000);
      _mm256_storeu_pd(out + j, _mm256_add_pd(_mm256_loadu_pd(out + j), ordered));
    }
    for (; j < cols; ++j) {
      const double re = row[2 * j], im = row[2 * j + 1];
      out[j] += re * re + im * im;
    }
  }
}

void hermitian_rank1_update(cplx* acc, const cplx* v, std::size_t dim, double weight) {
  if (dim < 2) {
    scalar_table().hermitian_rank1_update(acc, v, dim, weight);
    return;
  }
  const std::size_t vec_dim = dim & ~std::size_t{1};
  const __m256d conj_mask = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
  const auto* vd = reinterpret_cast<const double*>(v);
  for (std::size_t i = 0; i < dim; ++i) {
    const cplx s = weight * v[i];
    const __m256d sr = _mm256_set1_pd(s.real()), si = _mm256_set1_pd(s.imag());
    auto* row = reinterpret_cast<double*>(acc + i * dim);
    std::size_t j = 0;
    for (; j < vec_dim; j += 2) {
      const __m256d vc = _mm256_xor_pd(_mm256_loadu_pd(vd + 2 * j), conj_mask);
      const __m256d prod = cmul_scalar(vc, sr, si);
      _mm256_storeu_pd(row + 2 * j, _mm256_add_pd(_mm256_loadu_pd(row + 2 * j), prod));
    }
    for (; j < dim; ++j) {
      const cplx c = std::conj(v[j]);
      acc[i * dim + j] += cplx(s.real() * c.real() - s.imag() * c.imag(),
                               s.real() * c.imag() + s.imag() * c.real());
    }
  }
}

double squared_norm(const cplx* v, std::size_t n) {
  const auto* d = reinterpret_cast<const double*>(v);
  const std::size_t len = 2 * n;
  const std::size_t vec_len = len & ~std::size_t{7};
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i < vec_len; i += 8) {
    const __m256d a = _mm256_loadu_pd(d + i);
    const __m256d b = _mm256_loadu_pd(d + i + 4);
    acc0 = _mm256_fmadd_pd(a, a, acc0);
    acc1 = _mm256_fmadd_pd(b, b, acc1);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
  double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < len; ++i) total += d[i] * d[i];
  return total;
}

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable table{Backend::Avx2, &apply_pair_unitary, &accumulate_column_norms,
                                 &hermitian_rank1_update, &squared_norm};
  return &table;
}

}  // namespace permtherm::kernels

#else

namespace permtherm::kernels {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace permtherm::kernels

#endif
