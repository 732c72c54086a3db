#pragma once

// Data-parallel inner loops used by state construction, projected-ensemble
// building and moment accumulation. Every kernel has a scalar reference
// implementation; an AVX2+FMA variant is selected at runtime when the CPU
// supports it. tests/unit/test_kernels.cpp checks the two for equivalence.

#include <complex>
#include <cstddef>

namespace permtherm::kernels {

using cplx = std::complex<double>;

enum class Backend { Scalar, Avx2 };

struct KernelTable {
  Backend backend;

  /// For every index i with (i & stride) == 0, maps the amplitude pair
  /// (a[i], a[i + stride]) to u * (a[i], a[i + stride]) where u is the
  /// row-major 2x2 matrix {u00, u01, u10, u11}. stride is a power of two.
  void (*apply_pair_unitary)(cplx* amps, std::size_t len, std::size_t stride, const cplx* u);

  /// out[j] += sum_r |m[r * cols + j]|^2 for j < cols, rows taken in order.
  void (*accumulate_column_norms)(const cplx* m, std::size_t rows, std::size_t cols, double* out);

  /// acc += weight * v v^dagger with acc a dense row-major dim x dim matrix.
  void (*hermitian_rank1_update)(cplx* acc, const cplx* v, std::size_t dim, double weight);

  /// sum_i |v_i|^2
  double (*squared_norm)(const cplx* v, std::size_t n);
};

const KernelTable& scalar_table();

/// Null when the AVX2 translation unit was not built (non-x86 targets).
const KernelTable* avx2_table();

bool cpu_supports_avx2();

/// The table in use. Defaults to AVX2 when available, overridable through
/// PERMTHERM_KERNELS=scalar|avx2 or set_backend().
const KernelTable& active();

/// Returns false (and leaves the selection unchanged) when the backend is
/// unavailable on this machine.
bool set_backend(Backend backend);

const char* to_string(Backend backend);

}  // namespace permtherm::kernels
