#include "doctest.h"

#include <cmath>
#include <vector>

#include "permtherm/kernels/kernels.hpp"
#include "permtherm/rng.hpp"

using namespace permtherm;
using kernels::cplx;

namespace {

std::vector<cplx> random_vector(std::size_t n, Rng& rng) {
  std::vector<cplx> v(n);
  for (auto& x : v) x = cplx(rng.normal(), rng.normal());
  return v;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("avx2 kernels reproduce the scalar reference") {
  const kernels::KernelTable* simd = kernels::avx2_table();
  if (!simd || !kernels::cpu_supports_avx2()) {
    MESSAGE("AVX2 kernels unavailable on this build/CPU; equivalence not exercised");
    return;
  }
  const auto& ref = kernels::scalar_table();
  Rng rng(42);

  SUBCASE("pair unitary over every stride") {
    const cplx u[4] = {cplx(0.6, 0.1), cplx(-0.3, 0.7), cplx(0.2, -0.5), cplx(0.9, 0.0)};
    for (std::size_t log_len = 1; log_len <= 10; ++log_len) {
      const std::size_t len = std::size_t{1} << log_len;
      for (std::size_t stride = 1; stride < len; stride <<= 1) {
        auto a = random_vector(len, rng);
        auto b = a;
        ref.apply_pair_unitary(a.data(), len, stride, u);
        simd->apply_pair_unitary(b.data(), len, stride, u);
        CHECK(max_diff(a, b) < 1e-13);
      }
    }
  }

  SUBCASE("column norms for odd and even widths") {
    for (std::size_t rows : {1, 3, 4}) {
      for (std::size_t cols : {1, 2, 3, 7, 8, 64, 513}) {
        const auto m = random_vector(rows * cols, rng);
        std::vector<double> a(cols, 0.5), b(cols, 0.5);
        ref.accumulate_column_norms(m.data(), rows, cols, a.data());
        simd->accumulate_column_norms(m.data(), rows, cols, b.data());
        for (std::size_t j = 0; j < cols; ++j) CHECK(a[j] == doctest::Approx(b[j]).epsilon(1e-13));
      }
    }
  }

  SUBCASE("rank-one update") {
    for (std::size_t dim : {1, 2, 3, 4, 16, 64}) {
      const auto v = random_vector(dim, rng);
      auto a = random_vector(dim * dim, rng);
      auto b = a;
      ref.hermitian_rank1_update(a.data(), v.data(), dim, 0.37);
      simd->hermitian_rank1_update(b.data(), v.data(), dim, 0.37);
      CHECK(max_diff(a, b) < 1e-13);
    }
  }

  SUBCASE("squared norm") {
    for (std::size_t n : {1, 2, 3, 5, 8, 1000, 1025}) {
      const auto v = random_vector(n, rng);
      const double a = ref.squared_norm(v.data(), n);
      const double b = simd->squared_norm(v.data(), n);
      CHECK(a == doctest::Approx(b).epsilon(1e-13));
    }
  }
}

TEST_CASE("scalar kernels match textbook formulas") {
  const auto& k = kernels::scalar_table();
  std::vector<cplx> amps = {1.0, 2.0, 3.0, 4.0};
  const cplx swap[4] = {0.0, 1.0, 1.0, 0.0};
  k.apply_pair_unitary(amps.data(), 4, 2, swap);
  CHECK(amps == std::vector<cplx>{3.0, 4.0, 1.0, 2.0});

  const std::vector<cplx> m = {cplx(1, 1), 2.0, 0.0, cplx(0, 3)};
  std::vector<double> out(2, 0.0);
  k.accumulate_column_norms(m.data(), 2, 2, out.data());
  CHECK(out[0] == 2.0);
  CHECK(out[1] == 13.0);

  const std::vector<cplx> v = {1.0, cplx(0, 1)};
  std::vector<cplx> acc(4, 0.0);
  k.hermitian_rank1_update(acc.data(), v.data(), 2, 2.0);
  CHECK(acc[1] == cplx(0, -2));
  CHECK(acc[2] == cplx(0, 2));
  CHECK(k.squared_norm(v.data(), 2) == 2.0);
}

TEST_CASE("backend selection") {
  const auto before = kernels::active().backend;
  CHECK(kernels::set_backend(kernels::Backend::Scalar));
  CHECK(kernels::active().backend == kernels::Backend::Scalar);
  if (kernels::avx2_table() && kernels::cpu_supports_avx2()) {
    CHECK(kernels::set_backend(kernels::Backend::Avx2));
    CHECK(kernels::active().backend == kernels::Backend::Avx2);
  }
  kernels::set_backend(before);
}
