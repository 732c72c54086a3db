#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "permtherm/error.hpp"
#include "permtherm/permdyn.hpp"
#include "permtherm/resources.hpp"

using namespace permtherm;

namespace {

StateVector random_state(int n, Rng& rng) {
  std::vector<cplx> a(std::size_t{1} << n);
  double norm = 0;
  for (auto& x : a) {
    x = cplx(rng.normal(), rng.normal());
    norm += std::norm(x);
  }
  for (auto& x : a) x /= std::sqrt(norm);
  return StateVector(n, a);
}

bool same(const StateVector& a, const StateVector& b) {
  return std::equal(a.amplitudes().begin(), a.amplitudes().end(), b.amplitudes().begin());
}

}  // namespace

TEST_CASE("permutation validation") {
  CHECK_THROWS_AS(Permutation({0, 0}), Error);
  CHECK_THROWS_AS(Permutation({0, 2}), Error);
  CHECK_THROWS_AS(Permutation(std::vector<std::uint32_t>{}), Error);
  const Permutation p({2, 0, 1});
  CHECK(p.inverse().after(p) == Permutation::identity(3));
  CHECK(p.after(Permutation::identity(3)) == p);
}

TEST_CASE("sample_permutation") {
  Rng a(11), b(11);
  CHECK(sample_permutation(1, a) == Permutation::identity(1));
  CHECK(sample_permutation(64, a) == sample_permutation(64, b));
  CHECK_FALSE(sample_permutation(64, a) == sample_permutation(64, a));
  CHECK_THROWS_AS(sample_permutation(0, a), Error);
}

TEST_CASE("sample_permutation is uniform on the first image") {
  Rng rng(2024);
  const int n = 100000;
  std::vector<int> counts(4, 0);
  for (int i = 0; i < n; ++i) ++counts[sample_permutation(4, rng)(0)];
  const double sigma = std::sqrt(n * 0.25 * 0.75);
  for (int c : counts) CHECK(std::abs(c - n / 4.0) < 4 * sigma);
}

TEST_CASE("all 24 permutations of S_4 appear with equal frequency") {
  Rng rng(77);
  std::map<std::vector<std::uint32_t>, int> counts;
  const int n = 48000;
  for (int i = 0; i < n; ++i) ++counts[sample_permutation(4, rng).images()];
  CHECK(counts.size() == 24);
  const double sigma = std::sqrt(n / 24.0 * (23.0 / 24.0));
  for (const auto& [k, c] : counts) CHECK(std::abs(c - n / 24.0) < 5 * sigma);
}

TEST_CASE("apply_global_permutation") {
  const StateVector s(2, {0.1, 0.2, 0.3, std::sqrt(1 - 0.14)});
  const auto t = apply_global_permutation(s, Permutation({1, 0, 2, 3}));
  CHECK(t[0] == s[1]);
  CHECK(t[1] == s[0]);
  CHECK(t[2] == s[2]);
  CHECK(same(apply_global_permutation(s, Permutation::identity(4)), s));
  CHECK_THROWS_AS(apply_global_permutation(s, Permutation::identity(8)), Error);

  Rng rng(8);
  const auto r = random_state(5, rng);
  const auto p = sample_permutation(32, rng), q = sample_permutation(32, rng);
  CHECK(same(apply_global_permutation(apply_global_permutation(r, p), p.inverse()), r));
  CHECK(same(apply_global_permutation(apply_global_permutation(r, p), q),
             apply_global_permutation(r, q.after(p))));

  std::vector<double> before, after;
  const auto rp = apply_global_permutation(r, p);
  for (std::size_t z = 0; z < 32; ++z) {
    before.push_back(std::norm(r[z]));
    after.push_back(std::norm(rp[z]));
  }
  std::sort(before.begin(), before.end());
  std::sort(after.begin(), after.end());
  CHECK(before == after);
}

TEST_CASE("brickwork evolution") {
  Rng rng(4);
  const auto s = random_state(7, rng);
  CHECK(same(evolve_brickwork(s, {3, 0}, rng), s));
  CHECK_THROWS_AS(evolve_brickwork(s, {8, 1}, rng), Error);
  CHECK_THROWS_AS(evolve_brickwork(s, {0, 1}, rng), Error);

  Rng r1(5), r2(5);
  const auto snaps = evolve_brickwork_snapshots(s, {3, 6}, r1);
  REQUIRE(snaps.size() == 7);
  CHECK(same(snaps.front(), s));
  CHECK(same(snaps.back(), evolve_brickwork(s, {3, 6}, r2)));
  for (const auto& st : snaps) {
    double norm = 0;
    for (auto a : st.amplitudes()) norm += std::norm(a);
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-14));
  }

  // Basis states stay basis states; incoherent input stays incoherent.
  std::vector<cplx> basis(128, 0.0);
  basis[37] = 1.0;
  const StateVector z(7, basis);
  evolve_brickwork(z, {3, 10}, rng, [](int, const StateVector& st) {
    CHECK(relative_entropy_of_coherence(st.amplitudes()) == 0.0);
  });
}

TEST_CASE("brickwork layers act on the documented windows") {
  std::vector<cplx> basis(16, 0.0);
  basis[0] = 1.0;
  const StateVector z(4, basis);
  // Width 3 on 4 qubits: second layer starts at offset 1, window (2,3,4);
  // qubit 1 is untouched by layer 2, so a single even layer never flips it.
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(seed);
    std::size_t after1 = 0, after2 = 0;
    evolve_brickwork(z, {3, 2}, rng, [&](int layer, const StateVector& st) {
      std::size_t idx = 0;
      while (std::norm(st[idx]) < 0.5) ++idx;
      (layer == 1 ? after1 : after2) = idx;
    });
    CHECK((after1 & 0b0001) == 0);           // layer 1 leaves qubit 4 alone
    CHECK((after1 >> 3) == (after2 >> 3));   // layer 2 leaves qubit 1 alone
  }
}
