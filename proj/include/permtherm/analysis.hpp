#pragma once

#include <span>
#include <string>
#include <vector>

#include "permtherm/qstate.hpp"

namespace permtherm {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

/// Arithmetic mean and sample standard deviation (M - 1) over sqrt(M).
/// Throws Parameter for fewer than two samples.
MeanSe mean_se(std::span<const double> samples);

struct CurvePoint {
  double x = 0.0;
  double y = 0.0;
  double y_err = 0.0;
};

/// One system size; x strictly increasing.
struct SizeCurve {
  int size = 0;
  std::vector<CurvePoint> points;
};

using CurveFamily = std::vector<SizeCurve>;

struct CrossingEstimate {
  double x_star = 0.0;
  double x_star_err = 0.0;
  std::string method = "two-size-linear";
};

/// Crossing of the two-point lines of `a` and `b`, which must share the
/// same two x values. Error from first-order propagation of the four y
/// errors. Throws Degenerate for parallel lines or no sign change.
CrossingEstimate crossing_point(const SizeCurve& a, const SizeCurve& b);

/// Piecewise-linear resampling of a curve onto `xs` (each inside its
/// range). Errors combine as sqrt(w^2 e_i^2 + (1-w)^2 e_j^2).
SizeCurve resample(const SizeCurve& curve, std::span<const double> xs);

/// Picks the first adjacent pair of shared x values (after resampling both
/// curves onto the union grid inside their common range) where the
/// difference changes sign, then calls crossing_point on it.
CrossingEstimate bracketed_crossing(const SizeCurve& a, const SizeCurve& b);

struct CollapseResult {
  double nu = 0.0;
  double nu_err = 0.0;
  double objective = 0.0;
  std::vector<double> grid;
  std::vector<double> objectives;  // NaN where the overlap window was empty
};

/// 0.5, 0.55, ..., 2.5.
std::vector<double> default_nu_grid();

/// Collapse objective for one nu: mean over 100 common points of the
/// across-size variance of curves rescaled to u = (x - x*) N^{1/nu}.
/// Returns NaN when the overlap window is empty.
double collapse_objective(const CurveFamily& curves, double x_star, double nu);

/// Scans `nu_grid` (ties: smallest nu); nu_err is half the spread of the
/// leave-one-size-out argmins. Needs >= 3 sizes with >= 4 points each.
CollapseResult fss_collapse(const CurveFamily& curves, double x_star,
                            const std::vector<double>& nu_grid = default_nu_grid());

/// -p ln p - (1-p) ln(1-p).
double binary_entropy(double p);

/// theta_m in [0, pi/2] with H2(cos^2(theta0/2)) + H2(cos^2(theta_m/2)) = ln 2.
double coherence_matched_threshold(double theta0);

struct Theorem2Result {
  double empirical_prob = 0.0;
  double bound = 0.0;
  double threshold = 0.0;  // omega^{N^alpha}
};

/// max(cot^2, tan^2) of theta0/2. Throws Domain for theta0 in {0, pi/2, pi}.
double dominance_omega(double theta0);

/// Lower bound 1 - (d_A(d_A-1)/2 (2[N^a]+3)/sqrt(pi N) + d_A(d_A-1)/2^{N+1}).
double theorem2_bound(int num_qubits, int n_a, double alpha);

/// Upper bound m(m-1)/2 (2[N^a]+3)/sqrt(pi N).
double lemma1_bound(int m, int num_qubits, double alpha);

/// Fraction of dominance ratios >= omega^{N^alpha} and the matching bound.
Theorem2Result theorem2_suite(std::span<const double> ratios, int num_qubits, int n_a,
                              double alpha, const TiltedParams& params);

/// Least-squares slope of y against x.
double linear_fit_slope(std::span<const double> x, std::span<const double> y);

}  // namespace permtherm
