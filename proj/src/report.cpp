#include "permtherm/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "permtherm/error.hpp"
#include "permtherm/oracle.hpp"
#include "permtherm/weingarten.hpp"

namespace permtherm {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
  return fields;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::vector<SweepRecord> read_records(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::Io, "read_records: cannot open '" + path + "'");
  std::vector<SweepRecord> out;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.empty() || line[0] == '#' || line == kCsvHeader) continue;
    const auto f = split_csv(line);
    require(f.size() == 9, ErrorKind::Io,
            "read_records: " + path + ":" + std::to_string(line_no) + " does not have 9 fields");
    try {
      out.push_back({f[0], std::stoi(f[1]), std::stoi(f[2]), std::stod(f[3]), std::stoi(f[4]), f[5],
                     std::stod(f[6]), std::stod(f[7]), static_cast<std::size_t>(std::stoull(f[8]))});
    } catch (const std::exception&) {
      fail(ErrorKind::Io, "read_records: " + path + ":" + std::to_string(line_no) + " is malformed");
    }
  }
  return out;
}

CurveFamily curves_from_records(const std::vector<SweepRecord>& records,
                                const std::string& observable, int k) {
  std::map<int, std::vector<CurvePoint>> by_size;
  for (const auto& r : records)
    if (r.observable == observable && r.k == k) by_size[r.num_qubits].push_back({r.axis_value, r.mean, r.se});
  CurveFamily family;
  for (auto& [n, pts] : by_size) {
    std::sort(pts.begin(), pts.end(), [](const CurvePoint& a, const CurvePoint& b) { return a.x < b.x; });
    family.push_back({n, std::move(pts)});
  }
  return family;
}

std::string analyze_crossing(const std::vector<SweepRecord>& records, const std::string& observable,
                             int k, std::optional<std::pair<int, int>> sizes) {
  const CurveFamily family = curves_from_records(records, observable, k);
  require(family.size() >= 2, ErrorKind::Parameter,
          "analyze crossing: need at least two sizes of '" + observable + "'");
  auto pick = [&](int n) -> const SizeCurve& {
    for (const auto& c : family)
      if (c.size == n) return c;
    fail(ErrorKind::Parameter, "analyze crossing: size " + std::to_string(n) + " not in the records");
  };
  const SizeCurve& a = sizes ? pick(sizes->first) : family[family.size() - 2];
  const SizeCurve& b = sizes ? pick(sizes->second) : family.back();
  const CrossingEstimate est = bracketed_crossing(a, b);
  return dump({{"analysis", "crossing"}, {"observable", observable}, {"k", k},
               {"sizes", {a.size, b.size}}, {"x_star", est.x_star},
               {"x_star_err", est.x_star_err}, {"method", est.method}});
}

std::string analyze_fss(const std::vector<SweepRecord>& records, const std::string& observable,
                        int k, double x_star, const std::vector<double>& nu_grid) {
  const CurveFamily family = curves_from_records(records, observable, k);
  require(family.size() >= 3, ErrorKind::Parameter,
          "analyze fss: need at least three sizes of '" + observable + "'");
  const CollapseResult res = fss_collapse(family, x_star, nu_grid);
  std::vector<int> sizes;
  for (const auto& c : family) sizes.push_back(c.size);
  json objectives = json::array();
  for (double o : res.objectives) objectives.push_back(std::isnan(o) ? json(nullptr) : json(o));
  return dump({{"analysis", "fss"}, {"observable", observable}, {"k", k}, {"sizes", sizes},
               {"x_star", x_star}, {"nu", res.nu}, {"nu_err", res.nu_err},
               {"objective", res.objective}, {"grid", res.grid}, {"objectives", objectives}});
}

std::string analyze_distributions(const std::string& hist_path) {
  std::ifstream in(hist_path);
  require(in.good(), ErrorKind::Io, "analyze distributions: cannot open '" + hist_path + "'");
  std::ostringstream os;
  os << "N,axis_value,bin_lo,bin_hi,weight\n";
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      fail(ErrorKind::Io, std::string("analyze distributions: ") + e.what());
    }
    const auto edges = j.at("edges").get<std::vector<double>>();
    const auto weights = j.at("weights").get<std::vector<double>>();
    require(edges.size() == weights.size() + 1, ErrorKind::Io,
            "analyze distributions: edges and weights disagree");
    for (std::size_t b = 0; b < weights.size(); ++b)
      os << j.at("N").get<int>() << ',' << format_double(j.at("axis_value").get<double>()) << ','
         << format_double(edges[b]) << ',' << format_double(edges[b + 1]) << ','
         << format_double(weights[b]) << "\n";
  }
  return os.str();
}

std::vector<ValidationCheck> run_validation(int num_qubits) {
  require(num_qubits >= 2 && num_qubits <= kMaxBruteForceQubits, ErrorKind::Parameter,
          "validate: N must lie in [2, 3]");
  std::vector<ValidationCheck> checks;
  auto add = [&](std::string name, double err, double tol) {
    std::ostringstream d;
    d << "max_abs_err=" << format_double(err) << " tol=" << format_double(tol);
    checks.push_back({std::move(name), err <= tol, d.str()});
  };
  const int n = num_qubits;
  const Bipartition part{1, n - 1};
  const TiltedParams tilted{kPi / 4, kPi / 4};
  const StateVector psi0 = make_tilted_state(n, tilted);

  const ScalarFunctional purity_fn = [&](const StateVector& s) {
    return purity(reduced_density_matrix(s, part));
  };
  const double brute = brute_force_permutation_average(psi0, purity_fn).value;
  add("expected_purity_tilted", std::abs(brute - expected_purity_exact(n, 1, tilted)), 1e-10);

  const MixedParams mixed(1.0 / n, n);
  const double brute_mixed = brute_force_permutation_average(make_mixed_state(mixed), purity_fn).value;
  add("expected_purity_mixed", std::abs(brute_mixed - expected_purity_exact(1, mixed)), 1e-10);

  const MatrixFunctional projector = [](const StateVector& s) {
    const auto a = s.amplitudes();
    const Eigen::Map<const Eigen::VectorXcd> v(a.data(), static_cast<Eigen::Index>(a.size()));
    return CMatrix(v * v.adjoint());
  };
  const CMatrix avg = brute_force_permutation_average(psi0, projector).matrix;
  const MeanState ms = mean_state_coeffs(n, tilted);
  const auto d = static_cast<Eigen::Index>(psi0.dim());
  const CMatrix model = ms.identity_coeff * CMatrix::Identity(d, d) + ms.flat_coeff * CMatrix::Ones(d, d);
  add("mean_state", (avg - model).cwiseAbs().maxCoeff(), 1e-12);

  for (std::int64_t dim : {16, 32}) {
    const auto a = weingarten_exact(4, dim), b = weingarten_mobius(4, dim);
    add("weingarten_routes_d" + std::to_string(dim), (a.wg - b.wg).cwiseAbs().maxCoeff(), 1e-10);
  }
  const auto w2 = weingarten_exact(2, 8);
  Eigen::Matrix2d expect;
  expect << 1.0 / 7, -1.0 / 56, -1.0 / 56, 1.0 / 56;
  add("weingarten_order2_d8", (w2.wg - expect).cwiseAbs().maxCoeff(), 1e-15);

  const auto parts = enumerate_partitions(4);
  double inversion_err = 0.0;
  for (const auto& x : parts)
    for (const auto& y : parts) {
      std::int64_t sum = 0;
      for (const auto& z : parts)
        if (refines(x, z) && refines(z, y)) sum += mobius(x, z);
      const std::int64_t delta = (x == y) ? 1 : 0;
      if (refines(x, y)) inversion_err = std::max(inversion_err, std::abs(static_cast<double>(sum - delta)));
    }
  add("mobius_inversion", inversion_err, 0.0);

  double total = 0.0;
  for (const auto& cs : class_states(n, 1, tilted, 0.3 * kPi)) total += cs.class_p;
  add("class_probability_completeness", std::abs(total - 1.0), 1e-10);
  return checks;
}

std::string validation_json(const std::vector<ValidationCheck>& checks) {
  json arr = json::array();
  bool all = true;
  for (const auto& c : checks) {
    arr.push_back({{"check", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    all = all && c.pass;
  }
  return dump({{"analysis", "validate"}, {"all_pass", all}, {"checks", arr}});
}

}  // namespace permtherm
