#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "permtherm/qstate.hpp"
#include "permtherm/resources.hpp"

namespace permtherm {

enum class Model { Tilted, Mixed };
enum class Dynamics { Global, Brickwork };
enum class Observable { TraceDistHaar, TraceDistCl, TraceDistOHaar, Coherence, Ipr, Dominance, Purity };
enum class AxisRounding { Strict, Nearest };

const char* to_string(Model m);
const char* to_string(Observable o);
Observable parse_observable(const std::string& name);

/// True for observables that carry a moment order k (the trace distances).
bool is_moment_observable(Observable o);

struct ExperimentConfig {
  Model model = Model::Tilted;
  Dynamics dynamics = Dynamics::Global;
  int gate_width = 3;
  int depth = 0;              // brickwork layers; 0 means use depth_over_n
  double depth_over_n = 0.0;
  int average_from = -1;      // >= 0: average observables over layers [average_from, depth]

  std::vector<int> sizes;
  int n_a = 2;

  double theta0_over_pi = 0.25;
  double phi0_over_pi = 0.25;
  double alpha0 = 0.5;

  std::vector<double> axis;   // theta_m / pi (tilted) or alpha_m (mixed)
  double phi_m_over_pi = 0.0;
  AxisRounding rounding = AxisRounding::Strict;

  std::vector<int> moments{2};
  std::vector<Observable> observables;
  int samples = 100;
  std::map<int, int> samples_by_size;
  std::uint64_t master_seed = 0;
  std::string output = "sweep.csv";
  int histogram_bins = 0;

  int samples_for(int num_qubits) const;
  int depth_for(int num_qubits) const;
};

/// Parses the YAML schema documented in the README. Throws Io for syntax
/// errors, Parameter for invalid values.
ExperimentConfig parse_config(const std::string& yaml_text);
ExperimentConfig load_config(const std::string& path);

/// Throws Parameter when the config violates its invariants.
void validate_config(const ExperimentConfig& cfg);

/// Canonical, fully resolved YAML rendering (used as the file header).
std::string echo_config(const ExperimentConfig& cfg);

struct SweepRecord {
  std::string model;
  int num_qubits = 0;
  int n_a = 0;
  double axis_value = 0.0;
  int k = 0;
  std::string observable;
  double mean = 0.0;
  double se = 0.0;
  std::size_t n_samples = 0;
};

inline const char* kCsvHeader = "model,N,n_a,axis_value,k,observable,mean,se,n_samples";

std::string format_double(double v);
std::string format_record(const SweepRecord& r);

struct GridPoint {
  std::size_t index = 0;
  int num_qubits = 0;
  double axis_value = 0.0;  // value written to the CSV
  int x_count = -1;         // mixed model: number of x-measured B qubits
};

/// Grid in size-major order with the effective axis value of each point.
std::vector<GridPoint> build_grid(const ExperimentConfig& cfg);

struct GridResult {
  std::vector<SweepRecord> records;
  std::optional<Histogram> coherence_histogram;  // sample-averaged
};

/// Evaluates every observable on every sample of one grid point. Sample s
/// uses the stream derived from (master_seed, grid index, s).
GridResult run_grid_point(const ExperimentConfig& cfg, const GridPoint& point, int threads);

struct SweepSummary {
  std::size_t points_total = 0;
  std::size_t points_skipped = 0;
  std::size_t records_written = 0;
};

/// Runs the whole grid, appending one block of rows per grid point to
/// cfg.output and histograms to cfg.output + ".hist.jsonl". Grid points
/// already complete in an existing output with the same config header are
/// kept and skipped.
SweepSummary run_sweep(const ExperimentConfig& cfg, int threads);

}  // namespace permtherm
