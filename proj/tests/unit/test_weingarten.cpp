#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "permtherm/error.hpp"
#include "permtherm/oracle.hpp"
#include "permtherm/projens.hpp"
#include "permtherm/weingarten.hpp"

using namespace permtherm;
using std::numbers::pi;

namespace {

// Indicator vector of the index tuples constant on every block.
Eigen::VectorXd partition_vector(const SetPartition& s, int d) {
  const int n = s.size();
  const int dim = static_cast<int>(std::pow(d, n));
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
  for (int idx = 0; idx < dim; ++idx) {
    std::vector<int> digit(static_cast<std::size_t>(n));
    for (int q = n - 1, r = idx; q >= 0; --q, r /= d) digit[static_cast<std::size_t>(q)] = r % d;
    bool ok = true;
    for (int a = 0; a < n && ok; ++a)
      for (int b = a + 1; b < n && ok; ++b)
        if (s.label(a) == s.label(b) && digit[static_cast<std::size_t>(a)] != digit[static_cast<std::size_t>(b)])
          ok = false;
    if (ok) v(idx) = 1.0;
  }
  return v;
}

Eigen::MatrixXd projector(const WeingartenTable& t) {
  const int dim = static_cast<int>(std::pow(t.d, t.order));
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t i = 0; i < t.partitions.size(); ++i)
    for (std::size_t j = 0; j < t.partitions.size(); ++j)
      p += t.wg(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *
           partition_vector(t.partitions[i], static_cast<int>(t.d)) *
           partition_vector(t.partitions[j], static_cast<int>(t.d)).transpose();
  return p;
}

// (1/d!) sum_pi U_pi^{(x)order} as a real matrix.
Eigen::MatrixXd exhaustive_average(int d, int order) {
  const int dim = static_cast<int>(std::pow(d, order));
  Eigen::MatrixXd avg = Eigen::MatrixXd::Zero(dim, dim);
  std::vector<int> perm(static_cast<std::size_t>(d));
  std::iota(perm.begin(), perm.end(), 0);
  int count = 0;
  do {
    for (int idx = 0; idx < dim; ++idx) {
      int image = 0;
      for (int q = order - 1, r = idx, mul = 1; q >= 0; --q, r /= d, mul *= d) image += perm[static_cast<std::size_t>(r % d)] * mul;
      avg(image, idx) += 1.0;
    }
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return avg / count;
}

double purity_of(const StateVector& s, int n_a) {
  return purity(reduced_density_matrix(s, {n_a, s.num_qubits() - n_a}));
}

}  // namespace

TEST_CASE("partition enumeration") {
  CHECK(enumerate_partitions(1).size() == 1);
  CHECK(enumerate_partitions(2).size() == 2);
  CHECK(enumerate_partitions(4).size() == 15);
  CHECK(enumerate_partitions(5).size() == 52);
  CHECK(enumerate_partitions(8).size() == 4140);
  CHECK_THROWS_AS(enumerate_partitions(9), Error);
  const auto p4 = enumerate_partitions(4);
  CHECK(p4.front() == SetPartition::full_block(4));
  CHECK(p4.back() == SetPartition::singletons(4));
  CHECK(p4[5] == SetPartition({0, 0, 1, 1}));
  CHECK(p4[6] == SetPartition({0, 1, 1, 0}));
  CHECK(p4[7] == SetPartition({0, 1, 0, 1}));
  CHECK_THROWS_AS(SetPartition({1, 0}), Error);
  CHECK(SetPartition::from_labels({7, 3, 7}) == SetPartition({0, 1, 0}));
  CHECK(SetPartition::from_blocks(4, {{1, 2}, {0}, {3}}) == SetPartition({0, 1, 1, 2}));
}

TEST_CASE("lattice laws") {
  const auto parts = enumerate_partitions(4);
  const auto id = SetPartition::singletons(4);
  for (const auto& a : parts) {
    CHECK(common_coarsening(a, a) == a);
    CHECK(common_coarsening(id, a) == a);
    CHECK(common_refinement(a, a) == a);
    for (const auto& b : parts) {
      const auto ab = common_coarsening(a, b);
      CHECK(ab == common_coarsening(b, a));
      CHECK(refines(a, ab));
      CHECK(refines(b, ab));
      CHECK(refines(common_refinement(a, b), a));
      for (const auto& c : parts)
        CHECK(common_coarsening(ab, c) == common_coarsening(a, common_coarsening(b, c)));
    }
  }
  CHECK(common_coarsening(SetPartition({0, 0, 1, 1}), SetPartition({0, 1, 1, 2})) == SetPartition::full_block(4));
  CHECK_THROWS_AS(common_coarsening(id, SetPartition::singletons(3)), Error);
}

TEST_CASE("Moebius function") {
  const auto parts = enumerate_partitions(4);
  for (const auto& a : parts) CHECK(mobius(a, a) == 1);
  CHECK(mobius(SetPartition::singletons(4), SetPartition::full_block(4)) == -6);
  CHECK(mobius(SetPartition::singletons(2), SetPartition::full_block(2)) == -1);
  CHECK_THROWS_AS(mobius(SetPartition::full_block(4), SetPartition::singletons(4)), Error);

  // zeta * mu = identity, in integers.
  for (const auto& x : parts)
    for (const auto& y : parts) {
      std::int64_t sum = 0;
      for (const auto& z : parts)
        if (refines(x, z) && refines(z, y)) sum += mobius(z, y);
      CHECK(sum == (x == y ? 1 : 0));
    }
}

TEST_CASE("exact Weingarten tables") {
  for (std::int64_t d : {2, 3, 8, 100}) {
    const auto t = weingarten_exact(2, d);
    const double dd = static_cast<double>(d);
    CHECK(t.wg(0, 0) == doctest::Approx(1 / (dd - 1)));
    CHECK(t.wg(0, 1) == doctest::Approx(-1 / (dd * (dd - 1))));
    CHECK(t.wg(1, 1) == doctest::Approx(1 / (dd * (dd - 1))));
  }
  CHECK(weingarten_exact(2, 8).wg(0, 0) == doctest::Approx(1.0 / 7));
  CHECK_THROWS_AS(weingarten_exact(4, 3), Error);

  for (std::int64_t d : {4, 5, 16, 64}) {
    const auto t = weingarten_exact(4, d);
    CHECK((t.wg * t.gram * t.wg - t.wg).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((t.wg - t.wg.transpose()).cwiseAbs().maxCoeff() < 1e-14);
    const auto m = weingarten_mobius(4, d);
    CHECK((m.wg - t.wg).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("Weingarten projector equals the exhaustive permutation average") {
  const auto avg2 = exhaustive_average(4, 2);
  CHECK((projector(weingarten_exact(2, 4)) - avg2).cwiseAbs().maxCoeff() < 1e-12);
  const auto avg4 = exhaustive_average(4, 4);
  CHECK((projector(weingarten_exact(4, 4)) - avg4).cwiseAbs().maxCoeff() < 1e-12);
  // d = 8 at order 2 against the idempotent-projector property.
  const auto p8 = projector(weingarten_exact(2, 8));
  CHECK((p8 * p8 - p8).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(p8.trace() == doctest::Approx(2.0));
}

TEST_CASE("asymptotic Weingarten function") {
  const auto sigma1 = SetPartition::full_block(4);
  CHECK(weingarten_asymptotic(sigma1, sigma1, 1024.0) == doctest::Approx(1.0 / 1024));
  for (const auto& s : enumerate_partitions(4))
    CHECK(weingarten_asymptotic(s, s, 300.0) == doctest::Approx(std::pow(300.0, -s.num_blocks())));
  for (std::int64_t d : {256, 1024}) {
    const auto t = weingarten_mobius(4, d);
    double worst = 0;
    for (std::size_t i = 0; i < 15; ++i)
      for (std::size_t j = 0; j < 15; ++j) {
        const double exact = t.wg(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        const double approx = weingarten_asymptotic(t.partitions[i], t.partitions[j], static_cast<double>(d));
        worst = std::max(worst, std::abs(approx - exact) / std::abs(exact));
      }
    CHECK(worst < 10.0 / static_cast<double>(d));
  }
}

TEST_CASE("expected purity") {
  for (int n = 2; n <= 40; n += 7)
    CHECK(expected_purity_exact(n, 1, TiltedParams{0.0, 0.3}) == doctest::Approx(1.0).epsilon(1e-12));

  const TiltedParams p{pi / 4, pi / 4};
  const auto brute = brute_force_permutation_average(make_tilted_state(3, p),
                                                     ScalarFunctional([](const StateVector& s) { return purity_of(s, 1); }));
  CHECK(std::abs(brute.value - expected_purity_exact(3, 1, p)) < 1e-10);
  const auto brute2 = brute_force_permutation_average(make_tilted_state(3, p),
                                                      ScalarFunctional([](const StateVector& s) { return purity_of(s, 2); }));
  CHECK(std::abs(brute2.value - expected_purity_exact(3, 2, p)) < 1e-10);

  const MixedParams mixed(2.0 / 3, 3);
  const auto brute_mixed = brute_force_permutation_average(
      make_mixed_state(mixed), ScalarFunctional([](const StateVector& s) { return purity_of(s, 1); }));
  CHECK(std::abs(brute_mixed.value - expected_purity_exact(1, mixed)) < 1e-10);

  // The expansion drops o(1/d) terms.
  // d * (exact - expansion) must shrink with N until double rounding of
  // the purity itself (about 1e-16) dominates near N = 36.
  double prev = 1.0;
  for (int n = 12; n <= 32; n += 4) {
    const double d = std::ldexp(1.0, n);
    const double scaled = std::abs(expected_purity_exact(n, 2, p) - expected_purity_expansion(n, 2, p)) * d;
    CHECK(scaled < prev);
    prev = scaled;
  }
  CHECK(prev < 1e-3);

  for (double th : {0.1, 0.7, 1.5, 2.9})
    for (int n : {4, 12, 30, 60})
      for (int n_a : {1, 2, 3}) CHECK(expected_purity_exact(n, n_a, TiltedParams{th, 0.4}) >= std::ldexp(1.0, -n_a) - 1e-15);
  CHECK_THROWS_AS(expected_purity_exact(61, 1, p), Error);
}

TEST_CASE("regular thermalization bound") {
  const TiltedParams p{pi / 4, pi / 4};
  double prev = theorem1_bound(6, 2, p, 0.1);
  for (int n = 7; n <= 40; ++n) {
    const double b = theorem1_bound(n, 2, p, 0.1);
    CHECK(b < prev);
    prev = b;
  }
  const double d = 1024.0, d_a = 4.0;
  // g = 1/2 and f = 1: d^{-alpha0} = 1/d, d^{-2 beta0} = 1/d^2.
  CHECK(theorem1_bound(10, 2, {pi / 2, pi / 2}, 0.5) ==
        doctest::Approx(((d_a - 1) / d + (d_a - 1) / (d * d) + (d_a * d_a - d_a + 1) / d) / 0.25));
  CHECK(tilted_params_excluded({0.0, 0.2}));
  CHECK(tilted_params_excluded({pi, 0.2}));
  CHECK(tilted_params_excluded({pi / 2, 0.0}));
  CHECK_FALSE(tilted_params_excluded(p));
  CHECK_THROWS_AS(theorem1_bound(10, 2, {pi / 2, 0.0}, 0.1), Error);
  CHECK_THROWS_AS(theorem1_bound(10, 2, p, 0.0), Error);
}

TEST_CASE("class states") {
  const TiltedParams p{pi / 4, pi / 4};
  for (double th_m : {0.0, 0.2 * pi, 0.3 * pi, 0.5 * pi}) {
    const auto cs = class_states(12, 2, p, th_m);
    REQUIRE(cs.size() == 11);
    double total = 0;
    for (const auto& c : cs) {
      total += c.class_p;
      CHECK(4 * (c.identity_coeff + c.flat_coeff) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(c.ratio_c == doctest::Approx(c.flat_coeff / c.identity_coeff).epsilon(1e-12));
      const double f = p.f(), big_n = 12;
      const double gp = 1 + std::sin(th_m), gm = 1 - std::sin(th_m);
      const double expect = (std::pow(f, big_n) - 1) * std::pow(gp, c.nu_plus) * std::pow(gm, 10 - c.nu_plus) /
                            (std::pow(2.0, big_n) - std::pow(f, big_n));
      CHECK(c.ratio_c == doctest::Approx(expect).epsilon(1e-10));
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));

    // Flipping the z component of the axis leaves every class unchanged;
    // flipping the x component (phi_m -> phi_m + pi) swaps g+ and g-.
    const auto flipped_z = class_states(12, 2, p, pi - th_m);
    for (std::size_t i = 0; i < cs.size(); ++i) {
      CHECK(flipped_z[i].born_p == doctest::Approx(cs[i].born_p).epsilon(1e-10));
      CHECK(flipped_z[i].ratio_c == doctest::Approx(cs[i].ratio_c).epsilon(1e-10));
    }
    const auto mirrored = class_states(12, 2, p, th_m, pi);
    for (std::size_t i = 0; i < cs.size(); ++i) {
      CHECK(mirrored[i].born_p == doctest::Approx(cs[cs.size() - 1 - i].born_p).epsilon(1e-10));
      CHECK(mirrored[i].ratio_c == doctest::Approx(cs[cs.size() - 1 - i].ratio_c).epsilon(1e-10));
    }
  }
  CHECK_THROWS_AS(class_states(12, 2, {pi / 2, 0.0}, 0.3), Error);
}

TEST_CASE("class states match the exhaustive average at N = 3") {
  const TiltedParams p{pi / 4, pi / 4};
  const double th_m = 0.37 * pi;
  const Bipartition part{1, 2};
  const auto basis = MeasurementBasis::uniform(2, th_m);
  // Block diagonal of the unnormalised projected states, one 2x2 block per outcome.
  const MatrixFunctional fn = [&](const StateVector& s) {
    const auto pe = build_projected_ensemble(s, part, basis, 0.0 + 1e-300);
    CMatrix out = CMatrix::Zero(8, 8);
    for (std::size_t i = 0; i < pe.size(); ++i) {
      const auto v = pe.state(i);
      const auto o = static_cast<Eigen::Index>(2 * pe.outcome(i));
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) out(o + a, o + b) = pe.prob(i) * v[a] * std::conj(v[b]);
    }
    return out;
  };
  const CMatrix avg = brute_force_permutation_average(make_tilted_state(3, p), fn).matrix;
  const auto cs = class_states(3, 1, p, th_m);
  for (std::uint64_t nu = 0; nu < 4; ++nu) {
    // Outcome bit 0 is aligned with the axis.
    const int nu_plus = 2 - std::popcount(nu);
    const auto& c = cs[static_cast<std::size_t>(nu_plus)];
    const auto blk = avg.block(static_cast<Eigen::Index>(2 * nu), static_cast<Eigen::Index>(2 * nu), 2, 2);
    CHECK(blk.trace().real() == doctest::Approx(c.born_p).epsilon(1e-10));
    CHECK(std::abs(blk(0, 0) - c.born_p * (c.identity_coeff + c.flat_coeff)) < 1e-12);
    CHECK(std::abs(blk(0, 1) - c.born_p * c.flat_coeff) < 1e-12);
  }
}

TEST_CASE("mean state") {
  const auto flat = mean_state_coeffs(8, {pi / 2, pi / 2});
  CHECK(flat.flat_coeff == doctest::Approx(0.0));
  CHECK(flat.identity_coeff == doctest::Approx(1.0 / 256));
  for (int n : {3, 10, 40}) {
    const auto m = mean_state_coeffs(n, {0.9, 0.3});
    CHECK(std::ldexp(m.identity_coeff + m.flat_coeff, n) == doctest::Approx(1.0).epsilon(1e-12));
  }
  const TiltedParams p{pi / 4, pi / 4};
  const MatrixFunctional proj = [](const StateVector& s) {
    const auto a = s.amplitudes();
    const Eigen::Map<const Eigen::VectorXcd> v(a.data(), static_cast<Eigen::Index>(a.size()));
    return CMatrix(v * v.adjoint());
  };
  const CMatrix avg = brute_force_permutation_average(make_tilted_state(3, p), proj).matrix;
  const auto m = mean_state_coeffs(3, p);
  const CMatrix model = m.identity_coeff * CMatrix::Identity(8, 8) + m.flat_coeff * CMatrix::Ones(8, 8);
  CHECK((avg - model).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("annealed IPR predictor") {
  const auto trivial = annealed_ipr_prediction(1.0, 1.0, 1.0, 64.0);
  CHECK(trivial.value == doctest::Approx(64.0));
  CHECK(trivial.phase == IprPhase::NonErgodic);
  CHECK(annealed_ipr_prediction(1.0, 1.0, 4.0, 4.0).phase == IprPhase::Marginal);
  CHECK(annealed_ipr_prediction(0.01, 0.01, 4.0, 64.0).phase == IprPhase::Ergodic);
  CHECK(std::string(to_string(IprPhase::Ergodic)) == "ergodic");

  CHECK(annealed_rate_mixed(0.4, 0.6) == doctest::Approx(0.0));
  CHECK(annealed_rate_mixed(0.2, 0.3) > 0.0);
  CHECK(annealed_rate_mixed(0.6, 0.6) < 0.0);
  // Mixed model at finite N: the phase flips across alpha0 + alpha_m = 1.
  const int n = 400, n_a = 2, n_b = n - n_a;
  for (double a0 : {0.3, 0.5}) {
    const double lipr0 = -a0 * n * std::log(2.0);
    const auto below = annealed_ipr_prediction_log(lipr0, -(0.95 - a0) * n_b * std::log(2.0), n_a, n_b);
    const auto above = annealed_ipr_prediction_log(lipr0, -(1.05 - a0) * n_b * std::log(2.0), n_a, n_b);
    CHECK(below.phase == IprPhase::NonErgodic);
    CHECK(above.phase == IprPhase::Ergodic);
  }

  const TiltedParams p{pi / 4, pi / 4};
  const double boundary = annealed_boundary_tilted(p);
  CHECK(boundary / pi == doctest::Approx(0.304).epsilon(0.003));
  CHECK(annealed_rate_tilted(p, boundary) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(annealed_rate_tilted(p, 0.1 * pi) > 0.0);
  CHECK(annealed_rate_tilted(p, 0.45 * pi) < 0.0);
}
