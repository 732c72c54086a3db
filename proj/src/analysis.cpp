#include "permtherm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "permtherm/error.hpp"

namespace permtherm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Linear interpolation of (x, y) at u; `x` ascending and u inside its range.
double interpolate(const std::vector<double>& x, const std::vector<double>& y, double u) {
  auto it = std::upper_bound(x.begin(), x.end(), u);
  std::size_t j = static_cast<std::size_t>(it - x.begin());
  if (j == 0) j = 1;
  if (j >= x.size()) j = x.size() - 1;
  const std::size_t i = j - 1;
  const double w = (x[j] - u) / (x[j] - x[i]);
  return w * y[i] + (1.0 - w) * y[j];
}

void check_curve(const SizeCurve& c, const char* who) {
  for (std::size_t i = 1; i < c.points.size(); ++i)
    require(c.points[i].x > c.points[i - 1].x, ErrorKind::Parameter,
            std::string(who) + ": x values must be strictly increasing");
}

}  // namespace

MeanSe mean_se(std::span<const double> samples) {
  require(samples.size() >= 2, ErrorKind::Parameter, "mean_se: need at least two samples");
  const auto m = static_cast<double>(samples.size());
  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= m;
  double ss = 0.0;
  for (double s : samples) ss += (s - mean) * (s - mean);
  return {mean, std::sqrt(ss / (m - 1.0)) / std::sqrt(m)};
}

CrossingEstimate crossing_point(const SizeCurve& a, const SizeCurve& b) {
  require(a.points.size() == 2 && b.points.size() == 2, ErrorKind::Parameter,
          "crossing_point: each curve needs exactly two points");
  const double x0 = a.points[0].x, x1 = a.points[1].x;
  require(b.points[0].x == x0 && b.points[1].x == x1, ErrorKind::Parameter,
          "crossing_point: curves must share the same two x values");
  require(x1 > x0, ErrorKind::Parameter, "crossing_point: x values must be increasing");

  const double d0 = a.points[0].y - b.points[0].y;
  const double d1 = a.points[1].y - b.points[1].y;
  require(d0 != d1, ErrorKind::Degenerate, "crossing_point: lines are parallel");
  require(d0 * d1 <= 0.0, ErrorKind::Degenerate, "crossing_point: no sign change in the bracket");

  const double h = x1 - x0;
  const double den = d0 - d1;
  CrossingEstimate est;
  est.x_star = x0 + h * d0 / den;
  const double dx_dd0 = -h * d1 / (den * den);
  const double dx_dd1 = h * d0 / (den * den);
  const double var0 = a.points[0].y_err * a.points[0].y_err + b.points[0].y_err * b.points[0].y_err;
  const double var1 = a.points[1].y_err * a.points[1].y_err + b.points[1].y_err * b.points[1].y_err;
  est.x_star_err = std::sqrt(dx_dd0 * dx_dd0 * var0 + dx_dd1 * dx_dd1 * var1);
  return est;
}

SizeCurve resample(const SizeCurve& curve, std::span<const double> xs) {
  check_curve(curve, "resample");
  require(curve.points.size() >= 2, ErrorKind::Parameter, "resample: need at least two points");
  const auto& p = curve.points;
  SizeCurve out{curve.size, {}};
  for (double x : xs) {
    require(x >= p.front().x - 1e-12 && x <= p.back().x + 1e-12, ErrorKind::Domain,
            "resample: x outside the curve's range");
    std::size_t j = 1;
    while (j + 1 < p.size() && p[j].x < x) ++j;
    const std::size_t i = j - 1;
    const double w = std::clamp((p[j].x - x) / (p[j].x - p[i].x), 0.0, 1.0);
    out.points.push_back({x, w * p[i].y + (1.0 - w) * p[j].y,
                          std::sqrt(w * w * p[i].y_err * p[i].y_err +
                                    (1.0 - w) * (1.0 - w) * p[j].y_err * p[j].y_err)});
  }
  return out;
}

CrossingEstimate bracketed_crossing(const SizeCurve& a, const SizeCurve& b) {
  require(a.points.size() >= 2 && b.points.size() >= 2, ErrorKind::Parameter,
          "bracketed_crossing: need at least two points per curve");
  const double lo = std::max(a.points.front().x, b.points.front().x);
  const double hi = std::min(a.points.back().x, b.points.back().x);
  require(hi > lo, ErrorKind::Degenerate, "bracketed_crossing: curves do not overlap in x");
  std::vector<double> xs;
  for (const auto* c : {&a, &b})
    for (const auto& pt : c->points)
      if (pt.x >= lo - 1e-12 && pt.x <= hi + 1e-12) xs.push_back(std::clamp(pt.x, lo, hi));
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end(), [](double u, double v) { return std::abs(u - v) < 1e-12; }),
           xs.end());
  const SizeCurve ra = resample(a, xs), rb = resample(b, xs);
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double d0 = ra.points[i].y - rb.points[i].y;
    const double d1 = ra.points[i + 1].y - rb.points[i + 1].y;
    if (d0 * d1 <= 0.0 && d0 != d1)
      return crossing_point(SizeCurve{a.size, {ra.points[i], ra.points[i + 1]}},
                            SizeCurve{b.size, {rb.points[i], rb.points[i + 1]}});
  }
  fail(ErrorKind::Degenerate, "bracketed_crossing: no sign change between the curves");
}

std::vector<double> default_nu_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) grid.push_back(0.5 + 0.05 * i);
  return grid;
}

double collapse_objective(const CurveFamily& curves, double x_star, double nu) {
  std::vector<std::vector<double>> us, ys;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (const auto& c : curves) {
    const double scale = std::pow(static_cast<double>(c.size), 1.0 / nu);
    std::vector<double> u, y;
    for (const auto& p : c.points) {
      u.push_back((p.x - x_star) * scale);
      y.push_back(p.y);
    }
    lo = std::max(lo, u.front());
    hi = std::min(hi, u.back());
    us.push_back(std::move(u));
    ys.push_back(std::move(y));
  }
  if (!(hi > lo)) return kNaN;

  constexpr int kGrid = 100;
  double total = 0.0;
  for (int g = 0; g < kGrid; ++g) {
    const double u = lo + (hi - lo) * g / (kGrid - 1);
    double mean = 0.0, sq = 0.0;
    for (std::size_t c = 0; c < us.size(); ++c) {
      const double v = interpolate(us[c], ys[c], u);
      mean += v;
      sq += v * v;
    }
    const auto n = static_cast<double>(us.size());
    mean /= n;
    total += std::max(0.0, sq / n - mean * mean);
  }
  return total / kGrid;
}

namespace {

// Returns (nu, objective) or NaN nu if every candidate was skipped.
std::pair<double, double> scan(const CurveFamily& curves, double x_star,
                               const std::vector<double>& grid, std::vector<double>* objectives) {
  double best_nu = kNaN, best_obj = kNaN;
  for (double nu : grid) {
    const double obj = collapse_objective(curves, x_star, nu);
    if (objectives) objectives->push_back(obj);
    if (std::isnan(obj)) continue;
    if (std::isnan(best_obj) || obj < best_obj || (obj == best_obj && nu < best_nu)) {
      best_obj = obj;
      best_nu = nu;
    }
  }
  return {best_nu, best_obj};
}

}  // namespace

CollapseResult fss_collapse(const CurveFamily& curves, double x_star,
                            const std::vector<double>& nu_grid) {
  require(curves.size() >= 3, ErrorKind::Parameter, "fss_collapse: need at least three sizes");
  require(!nu_grid.empty(), ErrorKind::Parameter, "fss_collapse: empty nu grid");
  for (const auto& c : curves) {
    require(c.points.size() >= 4, ErrorKind::Parameter,
            "fss_collapse: need at least four points per size");
    require(c.size > 0, ErrorKind::Parameter, "fss_collapse: sizes must be positive");
    check_curve(c, "fss_collapse");
  }
  for (double nu : nu_grid) require(nu > 0.0, ErrorKind::Parameter, "fss_collapse: nu must be positive");

  CollapseResult result;
  result.grid = nu_grid;
  const auto [nu, obj] = scan(curves, x_star, nu_grid, &result.objectives);
  require(!std::isnan(nu), ErrorKind::Degenerate, "fss_collapse: overlap window empty for every nu");
  result.nu = nu;
  result.objective = obj;

  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t drop = 0; drop < curves.size(); ++drop) {
    CurveFamily subset;
    for (std::size_t c = 0; c < curves.size(); ++c)
      if (c != drop) subset.push_back(curves[c]);
    const double sub_nu = scan(subset, x_star, nu_grid, nullptr).first;
    if (std::isnan(sub_nu)) continue;
    lo = std::min(lo, sub_nu);
    hi = std::max(hi, sub_nu);
  }
  result.nu_err = hi >= lo ? 0.5 * (hi - lo) : 0.0;
  return result;
}

double binary_entropy(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log(p);
  if (p < 1.0) h -= (1.0 - p) * std::log(1.0 - p);
  return h;
}

double coherence_matched_threshold(double theta0) {
  require(theta0 > 0.0 && theta0 < std::numbers::pi, ErrorKind::Domain,
          "coherence_matched_threshold: theta0 must lie in (0, pi)");
  auto h = [](double theta) { return binary_entropy(std::pow(std::cos(theta / 2), 2)); };
  const double target = std::log(2.0) - h(theta0);
  if (target <= 0.0) return 0.0;
  // h is increasing on [0, pi/2] from 0 to ln 2.
  double lo = 0.0, hi = std::numbers::pi / 2;
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double dominance_omega(double theta0) {
  const double t = std::tan(theta0 / 2);
  const double t2 = t * t;
  require(std::abs(std::sin(theta0)) > 1e-12 && std::abs(t2 - 1.0) > 1e-12, ErrorKind::Domain,
          "dominance_omega: theta0 must avoid {0, pi/2, pi}");
  return std::max(t2, 1.0 / t2);
}

double lemma1_bound(int m, int num_qubits, double alpha) {
  require(m >= 2 && num_qubits >= 1 && alpha > 0.0, ErrorKind::Parameter,
          "lemma1_bound: need m >= 2, N >= 1, alpha > 0");
  const double k = std::floor(std::pow(static_cast<double>(num_qubits), alpha));
  return m * (m - 1.0) / 2.0 * (2.0 * k + 3.0) / std::sqrt(std::numbers::pi * num_qubits);
}

double theorem2_bound(int num_qubits, int n_a, double alpha) {
  require(n_a >= 1 && n_a < num_qubits, ErrorKind::Parameter, "theorem2_bound: need 1 <= N_A < N");
  const double d_a = std::ldexp(1.0, n_a);
  return 1.0 - (lemma1_bound(static_cast<int>(d_a), num_qubits, alpha) +
                d_a * (d_a - 1.0) / std::ldexp(1.0, num_qubits + 1));
}

Theorem2Result theorem2_suite(std::span<const double> ratios, int num_qubits, int n_a,
                              double alpha, const TiltedParams& params) {
  require(!ratios.empty(), ErrorKind::Parameter, "theorem2_suite: no samples");
  Theorem2Result out;
  out.threshold = std::pow(dominance_omega(params.theta0), std::pow(num_qubits, alpha));
  std::size_t hits = 0;
  for (double r : ratios)
    if (r >= out.threshold) ++hits;
  out.empirical_prob = static_cast<double>(hits) / static_cast<double>(ratios.size());
  out.bound = theorem2_bound(num_qubits, n_a, alpha);
  return out;
}

double linear_fit_slope(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size() && x.size() >= 2, ErrorKind::Parameter,
          "linear_fit_slope: need matching arrays of length >= 2");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  require(sxx > 0.0, ErrorKind::Degenerate, "linear_fit_slope: x values are all equal");
  return sxy / sxx;
}

}  // namespace permtherm
