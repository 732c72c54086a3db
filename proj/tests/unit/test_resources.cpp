#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "permtherm/error.hpp"
#include "permtherm/permdyn.hpp"
#include "permtherm/projens.hpp"
#include "permtherm/resources.hpp"

using namespace permtherm;
using std::numbers::pi;

namespace {

std::vector<cplx> random_vector(std::size_t d, Rng& rng) {
  std::vector<cplx> a(d);
  double norm = 0;
  for (auto& x : a) {
    x = cplx(rng.normal(), rng.normal());
    norm += std::norm(x);
  }
  for (auto& x : a) x /= std::sqrt(norm);
  return a;
}

}  // namespace

TEST_CASE("coherence examples") {
  CHECK(relative_entropy_of_coherence(std::vector<cplx>{1.0, 0.0}) == 0.0);
  const double h = 1 / std::sqrt(2.0);
  CHECK(relative_entropy_of_coherence(std::vector<cplx>{h, h}) == doctest::Approx(std::log(2.0)));
  CHECK_THROWS_AS(relative_entropy_of_coherence(std::vector<cplx>{1.0, 1.0}), Error);
  CHECK(haar_average_coherence(1) == 0.0);
  CHECK(haar_average_coherence(2) == doctest::Approx(0.5));
  CHECK(haar_average_coherence(4) == doctest::Approx(13.0 / 12.0));
}

TEST_CASE("IPR and dominance examples") {
  CHECK(ipr(std::vector<cplx>{0.0, 1.0, 0.0}) == 1.0);
  CHECK(ipr(std::vector<cplx>(8, 1 / std::sqrt(8.0))) == doctest::Approx(1.0 / 8));
  const double th = 0.9;
  const auto s = make_tilted_state(5, {th, 0.4});
  const double single = std::pow(std::sin(th / 2), 4) + std::pow(std::cos(th / 2), 4);
  CHECK(ipr(s.amplitudes()) == doctest::Approx(std::pow(single, 5)));

  CHECK(std::isinf(dominance_ratio(std::vector<cplx>{0.0, 1.0, 0.0})));
  CHECK(dominance_ratio(std::vector<cplx>(4, 0.5)) == doctest::Approx(1.0));
  CHECK(dominance_ratio(std::vector<cplx>{std::sqrt(0.8), std::sqrt(0.2)}) == doctest::Approx(4.0));
  CHECK_THROWS_AS(dominance_ratio(std::vector<cplx>{1.0}), Error);
  CHECK(max_weight(std::vector<cplx>{std::sqrt(0.2), std::sqrt(0.8)}) == doctest::Approx(0.8));
}

TEST_CASE("functional invariances") {
  Rng rng(1);
  for (int t = 0; t < 10; ++t) {
    auto v = random_vector(16, rng);
    const double c = relative_entropy_of_coherence(v), r = ipr(v);
    CHECK(r >= 1.0 / 16 - 1e-15);
    CHECK(c <= std::log(16.0) + 1e-12);
    auto w = v;
    std::reverse(w.begin(), w.end());
    for (auto& x : w) x *= std::polar(1.0, rng.uniform01() * 2 * pi);
    CHECK(relative_entropy_of_coherence(w) == doctest::Approx(c).epsilon(1e-12));
    CHECK(ipr(w) == doctest::Approx(r).epsilon(1e-12));

    const StateVector s(4, v);
    const auto p = apply_global_permutation(s, sample_permutation(16, rng));
    CHECK(relative_entropy_of_coherence(p.amplitudes()) == doctest::Approx(c).epsilon(1e-12));
    CHECK(ipr(p.amplitudes()) == doctest::Approx(r).epsilon(1e-12));
  }
}

TEST_CASE("ensemble averages") {
  Rng rng(2);
  const auto cl = sample_reference_ensemble(ReferenceKind::Classical, 4, 200, rng);
  const auto c = ensemble_average(cl, Functional::Coherence);
  CHECK(c.mean == 0.0);
  CHECK(c.standard_error == 0.0);

  const auto haar = sample_reference_ensemble(ReferenceKind::ComplexHaar, 4, 10000, rng);
  const auto h = ensemble_average(haar, Functional::Coherence, kDefaultHistogramBins);
  CHECK(std::abs(h.mean - 13.0 / 12.0) < 0.01);
  CHECK(h.standard_error > 0.0);
  CHECK(h.n_samples == 10000);
  REQUIRE(h.histogram);
  CHECK(h.histogram->edges.size() == 51);
  CHECK(h.histogram->edges.back() == doctest::Approx(std::log(4.0)));
  double total = 0;
  for (double w : h.histogram->weights) total += w;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

  const auto i = ensemble_average(haar, Functional::Ipr, 10);
  CHECK(i.mean >= 0.25);
  CHECK(i.mean <= 1.0);
  CHECK(i.histogram->edges.front() == doctest::Approx(0.25));
}

TEST_CASE("single-state ensemble") {
  const auto s = make_tilted_state(3, {0.8, 0.2});
  const auto pe = build_projected_ensemble(s, {2, 1}, MeasurementBasis::uniform(1, 0.8, 0.2));
  REQUIRE(pe.size() == 1);
  const auto st = ensemble_average(pe, Functional::Coherence);
  CHECK(st.mean == doctest::Approx(relative_entropy_of_coherence(pe.state(0))));
  CHECK(st.standard_error == 0.0);
}
