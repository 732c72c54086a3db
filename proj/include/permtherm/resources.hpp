#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "permtherm/projens.hpp"
#include "permtherm/qstate.hpp"

namespace permtherm {

struct Histogram {
  std::vector<double> edges;    // bins + 1 ascending edges
  std::vector<double> weights;  // probability mass per bin, sums to 1
};

struct EnsembleStatistic {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t n_samples = 0;
  std::optional<Histogram> histogram;
};

/// Shannon entropy (nats) of |c_z|^2. Throws Parameter if the squared norm
/// deviates from 1 by more than 1e-6.
double relative_entropy_of_coherence(std::span<const cplx> state);

/// sum_{k=2}^{d_a} 1/k.
double haar_average_coherence(std::size_t d_a);

/// sum_z |c_z|^4.
double ipr(std::span<const cplx> state);

/// |c_(1)|^2 / |c_(2)|^2 of the two largest magnitudes; +infinity when the
/// second is below 1e-28. Throws Dimension for a one-dimensional state.
double dominance_ratio(std::span<const cplx> state);

/// Largest Born weight max_z |c_z|^2.
double max_weight(std::span<const cplx> state);

enum class Functional { Coherence, Ipr };

/// Probability-weighted mean over the PE. The standard error is
/// sqrt(var_p / n_eff) with n_eff = 1 / sum p^2 (0 if n_eff <= 1).
/// With bins > 0, also a p-weighted histogram; coherence uses [0, ln d_A],
/// IPR uses [1/d_A, 1].
EnsembleStatistic ensemble_average(const ProjectedEnsemble& pe, Functional functional,
                                   std::optional<int> bins = std::nullopt);

inline constexpr int kDefaultHistogramBins = 50;

}  // namespace permtherm
