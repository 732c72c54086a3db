#include "permtherm/resources.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "permtherm/error.hpp"

namespace permtherm {

namespace {

void require_unit_norm(std::span<const cplx> state, const char* who) {
  double norm = 0.0;
  for (const cplx& c : state) norm += std::norm(c);
  require(std::abs(norm - 1.0) <= 1e-6, ErrorKind::Parameter,
          std::string(who) + ": state is not normalised (norm^2 = " + std::to_string(norm) + ")");
}

}  // namespace

double relative_entropy_of_coherence(std::span<const cplx> state) {
  require_unit_norm(state, "coherence");
  double h = 0.0;
  for (const cplx& c : state) {
    const double p = std::norm(c);
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

double haar_average_coherence(std::size_t d_a) {
  require(d_a >= 1, ErrorKind::Parameter, "haar_average_coherence: d_a must be positive");
  double sum = 0.0;
  for (std::size_t k = 2; k <= d_a; ++k) sum += 1.0 / static_cast<double>(k);
  return sum;
}

double ipr(std::span<const cplx> state) {
  double sum = 0.0;
  for (const cplx& c : state) {
    const double p = std::norm(c);
    sum += p * p;
  }
  return sum;
}

double dominance_ratio(std::span<const cplx> state) {
  require(state.size() >= 2, ErrorKind::Dimension, "dominance_ratio: dimension must be >= 2");
  double first = 0.0, second = 0.0;
  for (const cplx& c : state) {
    const double p = std::norm(c);
    if (p > first) {
      second = first;
      first = p;
    } else if (p > second) {
      second = p;
    }
  }
  if (second < 1e-28) return std::numeric_limits<double>::infinity();
  return first / second;
}

double max_weight(std::span<const cplx> state) {
  double best = 0.0;
  for (const cplx& c : state) best = std::max(best, std::norm(c));
  return best;
}

EnsembleStatistic ensemble_average(const ProjectedEnsemble& pe, Functional functional,
                                   std::optional<int> bins) {
  require(pe.size() > 0, ErrorKind::Degenerate, "ensemble_average: empty ensemble");
  const std::size_t n = pe.size();
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i)
    values[i] = functional == Functional::Coherence ? relative_entropy_of_coherence(pe.state(i))
                                                    : ipr(pe.state(i));

  double mean = 0.0, sum_p2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean += pe.prob(i) * values[i];
    sum_p2 += pe.prob(i) * pe.prob(i);
  }
  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i) var += pe.prob(i) * (values[i] - mean) * (values[i] - mean);

  EnsembleStatistic stat;
  stat.mean = mean;
  stat.n_samples = n;
  const double n_eff = 1.0 / sum_p2;
  stat.standard_error = n_eff > 1.0 ? std::sqrt(var / n_eff) : 0.0;

  if (bins && *bins > 0) {
    const auto d = static_cast<double>(pe.d_a());
    const double lo = functional == Functional::Coherence ? 0.0 : 1.0 / d;
    const double hi = functional == Functional::Coherence ? std::log(d) : 1.0;
    Histogram hist;
    const int nb = *bins;
    hist.edges.resize(static_cast<std::size_t>(nb) + 1);
    for (int b = 0; b <= nb; ++b) hist.edges[static_cast<std::size_t>(b)] = lo + (hi - lo) * b / nb;
    hist.weights.assign(static_cast<std::size_t>(nb), 0.0);
    const double width = hi > lo ? hi - lo : 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      auto b = static_cast<long>(std::floor((values[i] - lo) / width * nb));
      b = std::clamp(b, 0L, static_cast<long>(nb - 1));
      hist.weights[static_cast<std::size_t>(b)] += pe.prob(i);
    }
    stat.histogram = std::move(hist);
  }
  return stat;
}

}  // namespace permtherm
