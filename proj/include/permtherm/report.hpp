#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "permtherm/analysis.hpp"
#include "permtherm/sweep.hpp"

namespace permtherm {

/// Data rows of a sweep CSV (comment lines and the header are skipped).
std::vector<SweepRecord> read_records(const std::string& path);

/// One curve per N of the chosen (observable, k): x = axis_value,
/// y = mean, y_err = se, sorted by x. Sizes ascending.
CurveFamily curves_from_records(const std::vector<SweepRecord>& records,
                                const std::string& observable, int k);

/// Crossing between two sizes (default: the two largest), as JSON text.
std::string analyze_crossing(const std::vector<SweepRecord>& records, const std::string& observable,
                             int k, std::optional<std::pair<int, int>> sizes = std::nullopt);

/// Finite-size-scaling collapse at fixed x_star, as JSON text.
std::string analyze_fss(const std::vector<SweepRecord>& records, const std::string& observable,
                        int k, double x_star, const std::vector<double>& nu_grid = default_nu_grid());

/// Histogram sidecar rendered as CSV rows N,axis_value,bin_lo,bin_hi,weight.
std::string analyze_distributions(const std::string& hist_path);

struct ValidationCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Exact-oracle checks at N qubits (N <= 3): expected purity, mean state,
/// Weingarten routes, Moebius inversion, class-state completeness.
std::vector<ValidationCheck> run_validation(int num_qubits = 3);

std::string validation_json(const std::vector<ValidationCheck>& checks);

}  // namespace permtherm
