#include "permtherm/sweep.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "permtherm/analysis.hpp"
#include "permtherm/error.hpp"
#include "permtherm/parallel.hpp"
#include "permtherm/permdyn.hpp"
#include "permtherm/projens.hpp"

namespace permtherm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDominanceWeight = 0.99;

struct NamedObservable {
  Observable value;
  const char* name;
};

constexpr NamedObservable kObservableNames[] = {
    {Observable::TraceDistHaar, "trace_dist_haar"}, {Observable::TraceDistCl, "trace_dist_cl"},
    {Observable::TraceDistOHaar, "trace_dist_ohaar"}, {Observable::Coherence, "coherence"},
    {Observable::Ipr, "ipr"}, {Observable::Dominance, "dominance"}, {Observable::Purity, "purity"}};

template <class T>
T get_or(const YAML::Node& node, const char* key, T fallback) {
  const YAML::Node child = node[key];
  return child ? child.as<T>() : fallback;
}

bool is_integer(double v) { return std::abs(v - std::round(v)) <= 1e-9; }

}  // namespace

const char* to_string(Model m) { return m == Model::Tilted ? "tilted" : "mixed"; }

const char* to_string(Observable o) {
  for (const auto& entry : kObservableNames)
    if (entry.value == o) return entry.name;
  return "unknown";
}

Observable parse_observable(const std::string& name) {
  for (const auto& entry : kObservableNames)
    if (name == entry.name) return entry.value;
  fail(ErrorKind::Parameter, "unknown observable '" + name + "'");
}

bool is_moment_observable(Observable o) {
  return o == Observable::TraceDistHaar || o == Observable::TraceDistCl ||
         o == Observable::TraceDistOHaar;
}

int ExperimentConfig::samples_for(int num_qubits) const {
  auto it = samples_by_size.find(num_qubits);
  return it == samples_by_size.end() ? samples : it->second;
}

int ExperimentConfig::depth_for(int num_qubits) const {
  if (depth > 0) return depth;
  return static_cast<int>(std::lround(depth_over_n * num_qubits));
}

ExperimentConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    fail(ErrorKind::Io, std::string("config: ") + e.what());
  }
  require(root.IsMap(), ErrorKind::Io, "config: top level must be a mapping");

  ExperimentConfig cfg;
  try {
    const auto model = get_or<std::string>(root, "model", "tilted");
    if (model == "tilted") cfg.model = Model::Tilted;
    else if (model == "mixed") cfg.model = Model::Mixed;
    else fail(ErrorKind::Parameter, "config: model must be 'tilted' or 'mixed'");

    if (const YAML::Node dyn = root["dynamics"]) {
      const auto kind = get_or<std::string>(dyn, "kind", "global");
      if (kind == "global") cfg.dynamics = Dynamics::Global;
      else if (kind == "brickwork") cfg.dynamics = Dynamics::Brickwork;
      else fail(ErrorKind::Parameter, "config: dynamics.kind must be 'global' or 'brickwork'");
      cfg.gate_width = get_or(dyn, "gate_width", cfg.gate_width);
      cfg.depth = get_or(dyn, "depth", cfg.depth);
      cfg.depth_over_n = get_or(dyn, "depth_over_n", cfg.depth_over_n);
      cfg.average_from = get_or(dyn, "average_from", cfg.average_from);
    }

    require(static_cast<bool>(root["sizes"]), ErrorKind::Parameter, "config: 'sizes' is required");
    cfg.sizes = root["sizes"].as<std::vector<int>>();
    cfg.n_a = get_or(root, "n_a", cfg.n_a);

    if (const YAML::Node t = root["tilted"]) {
      cfg.theta0_over_pi = get_or(t, "theta0_over_pi", cfg.theta0_over_pi);
      cfg.phi0_over_pi = get_or(t, "phi0_over_pi", cfg.phi0_over_pi);
    }
    if (const YAML::Node m = root["mixed"]) cfg.alpha0 = get_or(m, "alpha0", cfg.alpha0);

    const YAML::Node sweep = root["sweep"];
    require(static_cast<bool>(sweep), ErrorKind::Parameter, "config: 'sweep' is required");
    const char* axis_key = cfg.model == Model::Tilted ? "theta_m_over_pi" : "alpha_m";
    require(static_cast<bool>(sweep[axis_key]), ErrorKind::Parameter,
            std::string("config: sweep.") + axis_key + " is required for this model");
    cfg.axis = sweep[axis_key].as<std::vector<double>>();
    cfg.phi_m_over_pi = get_or(sweep, "phi_m_over_pi", cfg.phi_m_over_pi);
    const auto rounding = get_or<std::string>(sweep, "rounding", "strict");
    if (rounding == "strict") cfg.rounding = AxisRounding::Strict;
    else if (rounding == "nearest") cfg.rounding = AxisRounding::Nearest;
    else fail(ErrorKind::Parameter, "config: sweep.rounding must be 'strict' or 'nearest'");

    if (root["moments"]) cfg.moments = root["moments"].as<std::vector<int>>();
    require(static_cast<bool>(root["observables"]), ErrorKind::Parameter,
            "config: 'observables' is required");
    for (const auto& name : root["observables"].as<std::vector<std::string>>())
      cfg.observables.push_back(parse_observable(name));

    cfg.samples = get_or(root, "samples", cfg.samples);
    if (root["samples_by_size"]) cfg.samples_by_size = root["samples_by_size"].as<std::map<int, int>>();
    cfg.master_seed = get_or<std::uint64_t>(root, "master_seed", cfg.master_seed);
    cfg.output = get_or(root, "output", cfg.output);
    cfg.histogram_bins = get_or(root, "histogram_bins", cfg.histogram_bins);
  } catch (const YAML::Exception& e) {
    fail(ErrorKind::Parameter, std::string("config: ") + e.what());
  }
  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::Io, "config: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate_config(const ExperimentConfig& cfg) {
  auto check = [](bool ok, const std::string& what) { require(ok, ErrorKind::Parameter, "config: " + what); };
  check(!cfg.sizes.empty(), "sizes must not be empty");
  check(!cfg.axis.empty(), "sweep axis must not be empty");
  check(!cfg.observables.empty(), "observables must not be empty");
  const int min_size = *std::min_element(cfg.sizes.begin(), cfg.sizes.end());
  for (int n : cfg.sizes) check(n >= 2 && n <= kMaxQubits, "every size must lie in [2, 26]");
  check(cfg.n_a >= 1 && cfg.n_a < min_size, "need 1 <= n_a < min(sizes)");
  check(cfg.samples >= 2, "samples must be >= 2");
  for (const auto& [n, s] : cfg.samples_by_size) check(s >= 2, "samples_by_size entries must be >= 2");
  check(cfg.histogram_bins >= 0, "histogram_bins must be >= 0");

  bool has_moment = false;
  for (Observable o : cfg.observables) has_moment = has_moment || is_moment_observable(o);
  if (has_moment) {
    check(!cfg.moments.empty(), "moments must not be empty");
    for (int k : cfg.moments) {
      check(k >= 1 && k <= 4, "moments must lie in [1, 4]");
      check(std::pow(2.0, cfg.n_a * k) <= static_cast<double>(kDefaultMomentCap),
            "d_A^k exceeds the moment cap");
      for (Observable o : cfg.observables)
        check(o != Observable::TraceDistOHaar || k <= 2, "trace_dist_ohaar supports k <= 2 only");
    }
  }

  if (cfg.dynamics == Dynamics::Brickwork) {
    for (int n : cfg.sizes) {
      check(cfg.gate_width >= 1 && cfg.gate_width <= n, "gate_width must lie in [1, N]");
      check(cfg.depth_for(n) >= 0, "brickwork depth must be >= 0");
      check(cfg.average_from <= cfg.depth_for(n), "average_from must not exceed the depth");
    }
  }

  if (cfg.model == Model::Mixed) {
    check(cfg.alpha0 >= 0.0 && cfg.alpha0 <= 1.0, "alpha0 must lie in [0, 1]");
    for (double a : cfg.axis) check(a >= 0.0 && a <= 1.0, "alpha_m values must lie in [0, 1]");
    if (cfg.rounding == AxisRounding::Strict) {
      for (int n : cfg.sizes) {
        check(is_integer(cfg.alpha0 * n), "alpha0 * N must be an integer for every size");
        for (double a : cfg.axis)
          check(is_integer(a * (n - cfg.n_a)), "alpha_m * N_B must be an integer for every size");
      }
    }
  }
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string echo_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  auto list = [&](const auto& values, auto fmt) {
    os << "[";
    for (std::size_t i = 0; i < values.size(); ++i) os << (i ? ", " : "") << fmt(values[i]);
    os << "]\n";
  };
  auto as_int = [](int v) { return std::to_string(v); };
  os << "model: " << to_string(cfg.model) << "\n";
  os << "dynamics:\n  kind: " << (cfg.dynamics == Dynamics::Global ? "global" : "brickwork") << "\n";
  if (cfg.dynamics == Dynamics::Brickwork) {
    os << "  gate_width: " << cfg.gate_width << "\n  depth: " << cfg.depth
       << "\n  depth_over_n: " << format_double(cfg.depth_over_n)
       << "\n  average_from: " << cfg.average_from << "\n";
  }
  os << "sizes: ";
  list(cfg.sizes, as_int);
  os << "n_a: " << cfg.n_a << "\n";
  if (cfg.model == Model::Tilted) {
    os << "tilted:\n  theta0_over_pi: " << format_double(cfg.theta0_over_pi)
       << "\n  phi0_over_pi: " << format_double(cfg.phi0_over_pi) << "\n";
    os << "sweep:\n  theta_m_over_pi: ";
    list(cfg.axis, format_double);
    os << "  phi_m_over_pi: " << format_double(cfg.phi_m_over_pi) << "\n";
  } else {
    os << "mixed:\n  alpha0: " << format_double(cfg.alpha0) << "\n";
    os << "sweep:\n  alpha_m: ";
    list(cfg.axis, format_double);
  }
  os << "  rounding: " << (cfg.rounding == AxisRounding::Strict ? "strict" : "nearest") << "\n";
  os << "moments: ";
  list(cfg.moments, as_int);
  os << "observables: ";
  list(cfg.observables, [](Observable o) { return std::string(to_string(o)); });
  os << "samples: " << cfg.samples << "\n";
  if (!cfg.samples_by_size.empty()) {
    os << "samples_by_size: {";
    bool first = true;
    for (const auto& [n, s] : cfg.samples_by_size) {
      os << (first ? "" : ", ") << n << ": " << s;
      first = false;
    }
    os << "}\n";
  }
  os << "master_seed: " << cfg.master_seed << "\n";
  os << "histogram_bins: " << cfg.histogram_bins << "\n";
  return os.str();
}

std::string format_record(const SweepRecord& r) {
  std::ostringstream os;
  os << r.model << ',' << r.num_qubits << ',' << r.n_a << ',' << format_double(r.axis_value) << ','
     << r.k << ',' << r.observable << ',' << format_double(r.mean) << ',' << format_double(r.se)
     << ',' << r.n_samples;
  return os.str();
}

std::vector<GridPoint> build_grid(const ExperimentConfig& cfg) {
  std::vector<GridPoint> grid;
  for (int n : cfg.sizes) {
    const int n_b = n - cfg.n_a;
    for (double a : cfg.axis) {
      GridPoint p;
      p.index = grid.size();
      p.num_qubits = n;
      p.axis_value = a;
      if (cfg.model == Model::Mixed) {
        p.x_count = static_cast<int>(std::lround(a * n_b));
        if (cfg.rounding == AxisRounding::Nearest) p.axis_value = static_cast<double>(p.x_count) / n_b;
      }
      grid.push_back(p);
    }
  }
  return grid;
}

namespace {

struct Slot {
  Observable observable;
  int k;
};

std::vector<Slot> make_slots(const ExperimentConfig& cfg) {
  std::vector<Slot> slots;
  for (Observable o : cfg.observables) {
    if (is_moment_observable(o))
      for (int k : cfg.moments) slots.push_back({o, k});
    else
      slots.push_back({o, 0});
  }
  return slots;
}

StateVector initial_state(const ExperimentConfig& cfg, int n) {
  if (cfg.model == Model::Tilted)
    return make_tilted_state(n, TiltedParams{cfg.theta0_over_pi * kPi, cfg.phi0_over_pi * kPi});
  const double y = std::round(cfg.alpha0 * n);
  return make_mixed_state(MixedParams(y / n, n));
}

struct References {
  std::map<int, MomentOperator> haar, classical, ohaar;
};

struct Evaluation {
  std::vector<double> values;
  std::vector<double> histogram;  // empty unless requested
};

class PointEvaluator {
 public:
  PointEvaluator(const ExperimentConfig& cfg, const GridPoint& point)
      : cfg_(cfg), slots_(make_slots(cfg)), part_{cfg.n_a, point.num_qubits - cfg.n_a},
        basis_(cfg.model == Model::Tilted
                   ? MeasurementBasis::uniform(part_.n_b, point.axis_value * kPi, cfg.phi_m_over_pi * kPi)
                   : MeasurementBasis::mixed(part_.n_b, point.x_count)) {
    for (const Slot& s : slots_) {
      if (s.observable == Observable::TraceDistHaar && !refs_.haar.count(s.k))
        refs_.haar.emplace(s.k, haar_moment(part_.d_a(), s.k));
      if (s.observable == Observable::TraceDistCl && !refs_.classical.count(s.k))
        refs_.classical.emplace(s.k, classical_moment(part_.d_a(), s.k));
      if (s.observable == Observable::TraceDistOHaar && !refs_.ohaar.count(s.k))
        refs_.ohaar.emplace(s.k, orthogonal_haar_moment(part_.d_a(), s.k));
      needs_pe_ = needs_pe_ || s.observable != Observable::Purity;
      wants_hist_ = wants_hist_ || (s.observable == Observable::Coherence && cfg.histogram_bins > 0);
    }
  }

  const std::vector<Slot>& slots() const { return slots_; }
  bool wants_histogram() const { return wants_hist_; }

  Evaluation evaluate(const StateVector& state) const {
    Evaluation out;
    out.values.reserve(slots_.size());
    std::optional<ProjectedEnsemble> pe;
    if (needs_pe_) pe.emplace(build_projected_ensemble(state, part_, basis_));
    std::map<int, MomentOperator> moments;
    auto moment = [&](int k) -> const MomentOperator& {
      auto it = moments.find(k);
      if (it == moments.end()) it = moments.emplace(k, pe_moment(*pe, k)).first;
      return it->second;
    };
    for (const Slot& s : slots_) {
      switch (s.observable) {
        case Observable::TraceDistHaar:
          out.values.push_back(trace_distance(moment(s.k), refs_.haar.at(s.k)));
          break;
        case Observable::TraceDistCl:
          out.values.push_back(trace_distance(moment(s.k), refs_.classical.at(s.k)));
          break;
        case Observable::TraceDistOHaar:
          out.values.push_back(trace_distance(moment(s.k), refs_.ohaar.at(s.k)));
          break;
        case Observable::Coherence: {
          std::optional<int> bins;
          if (wants_hist_ && out.histogram.empty()) bins = cfg_.histogram_bins;
          EnsembleStatistic st = ensemble_average(*pe, Functional::Coherence, bins);
          if (st.histogram) out.histogram = st.histogram->weights;
          out.values.push_back(st.mean);
          break;
        }
        case Observable::Ipr:
          out.values.push_back(ensemble_average(*pe, Functional::Ipr).mean);
          break;
        case Observable::Dominance: {
          double frac = 0.0;
          for (std::size_t i = 0; i < pe->size(); ++i)
            if (max_weight(pe->state(i)) > kDominanceWeight) frac += pe->prob(i);
          out.values.push_back(frac);
          break;
        }
        case Observable::Purity:
          out.values.push_back(purity(reduced_density_matrix(state, part_)));
          break;
      }
    }
    return out;
  }

 private:
  const ExperimentConfig& cfg_;
  std::vector<Slot> slots_;
  Bipartition part_;
  MeasurementBasis basis_;
  References refs_;
  bool needs_pe_ = false;
  bool wants_hist_ = false;
};

void accumulate(Evaluation& into, const Evaluation& e) {
  if (into.values.empty()) {
    into = e;
    return;
  }
  for (std::size_t i = 0; i < e.values.size(); ++i) into.values[i] += e.values[i];
  for (std::size_t i = 0; i < e.histogram.size(); ++i) into.histogram[i] += e.histogram[i];
}

void scale(Evaluation& e, double factor) {
  for (double& v : e.values) v *= factor;
  for (double& v : e.histogram) v *= factor;
}

}  // namespace

GridResult run_grid_point(const ExperimentConfig& cfg, const GridPoint& point, int threads) {
  const int n = point.num_qubits;
  const PointEvaluator evaluator(cfg, point);
  const StateVector psi0 = initial_state(cfg, n);
  const SeedSpec seeds{cfg.master_seed};
  const auto n_samples = static_cast<std::size_t>(cfg.samples_for(n));

  std::vector<Evaluation> per_sample(n_samples);
  parallel_for(n_samples, threads, [&](std::size_t s) {
    Rng rng = seeds.stream({point.index, s});
    if (cfg.dynamics == Dynamics::Global) {
      per_sample[s] = evaluator.evaluate(
          apply_global_permutation(psi0, sample_permutation(psi0.dim(), rng)));
      return;
    }
    const BrickworkConfig bw{cfg.gate_width, cfg.depth_for(n)};
    if (cfg.average_from < 0) {
      per_sample[s] = evaluator.evaluate(evolve_brickwork(psi0, bw, rng));
      return;
    }
    Evaluation sum;
    int count = 0;
    if (cfg.average_from == 0) {
      sum = evaluator.evaluate(psi0);
      ++count;
    }
    evolve_brickwork(psi0, bw, rng, [&](int layer, const StateVector& state) {
      if (layer < cfg.average_from) return;
      accumulate(sum, evaluator.evaluate(state));
      ++count;
    });
    scale(sum, 1.0 / count);
    per_sample[s] = std::move(sum);
  });

  GridResult result;
  const auto& slots = evaluator.slots();
  std::vector<double> column(n_samples);
  for (std::size_t j = 0; j < slots.size(); ++j) {
    for (std::size_t s = 0; s < n_samples; ++s) column[s] = per_sample[s].values[j];
    const MeanSe stat = mean_se(column);
    result.records.push_back({to_string(cfg.model), n, cfg.n_a, point.axis_value, slots[j].k,
                              to_string(slots[j].observable), stat.mean, stat.se, n_samples});
  }
  if (evaluator.wants_histogram()) {
    Histogram hist;
    const double hi = std::log(static_cast<double>(std::size_t{1} << cfg.n_a));
    for (int b = 0; b <= cfg.histogram_bins; ++b) hist.edges.push_back(hi * b / cfg.histogram_bins);
    hist.weights.assign(static_cast<std::size_t>(cfg.histogram_bins), 0.0);
    for (const auto& e : per_sample)
      for (std::size_t b = 0; b < e.histogram.size(); ++b) hist.weights[b] += e.histogram[b];
    for (double& w : hist.weights) w /= static_cast<double>(n_samples);
    result.coherence_histogram = std::move(hist);
  }
  return result;
}

namespace {

std::string header_text(const ExperimentConfig& cfg) {
  std::ostringstream os;
  std::istringstream echo(echo_config(cfg));
  for (std::string line; std::getline(echo, line);) os << "# " << line << "\n";
  os << kCsvHeader << "\n";
  return os.str();
}

std::string histogram_line(const ExperimentConfig& cfg, const GridPoint& p, const Histogram& h) {
  std::ostringstream os;
  os << "{\"model\":\"" << to_string(cfg.model) << "\",\"N\":" << p.num_qubits
     << ",\"n_a\":" << cfg.n_a << ",\"axis_value\":" << format_double(p.axis_value)
     << ",\"observable\":\"coherence\",\"edges\":[";
  for (std::size_t i = 0; i < h.edges.size(); ++i) os << (i ? "," : "") << format_double(h.edges[i]);
  os << "],\"weights\":[";
  for (std::size_t i = 0; i < h.weights.size(); ++i) os << (i ? "," : "") << format_double(h.weights[i]);
  os << "]}";
  return os.str();
}

std::vector<std::string> read_lines(const std::string& path) {
  std::vector<std::string> lines;
  std::ifstream in(path, std::ios::binary);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::size_t start = 0;
  for (std::size_t pos; (pos = content.find('\n', start)) != std::string::npos; start = pos + 1)
    lines.push_back(content.substr(start, pos - start));
  return lines;  // a trailing partial line is dropped
}

// Key shared by CSV rows and histogram lines of one grid point.
std::string point_key(int n, const std::string& axis) { return std::to_string(n) + "|" + axis; }

}  // namespace

SweepSummary run_sweep(const ExperimentConfig& cfg, int threads) {
  validate_config(cfg);
  const auto grid = build_grid(cfg);
  const std::size_t rows_per_point = make_slots(cfg).size();
  const std::string header = header_text(cfg);
  const std::string hist_path = cfg.output + ".hist.jsonl";
  const bool wants_hist = cfg.histogram_bins > 0 &&
      std::find(cfg.observables.begin(), cfg.observables.end(), Observable::Coherence) != cfg.observables.end();

  // Completed grid points of a previous run with the identical header.
  std::map<std::string, std::vector<std::string>> done_rows;
  std::map<std::string, std::string> done_hist;
  if (std::filesystem::exists(cfg.output)) {
    const auto lines = read_lines(cfg.output);
    std::string existing_header;
    std::size_t i = 0;
    for (; i < lines.size() && (lines[i].rfind("# ", 0) == 0 || lines[i] == kCsvHeader); ++i)
      existing_header += lines[i] + "\n";
    require(existing_header == header, ErrorKind::Io,
            "run_sweep: '" + cfg.output + "' exists with a different config; choose another output");
    for (; i < lines.size(); ++i) {
      std::vector<std::string> fields;
      std::stringstream ss(lines[i]);
      for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
      if (fields.size() != 9) continue;
      done_rows[point_key(std::stoi(fields[1]), fields[3])].push_back(lines[i]);
    }
    if (wants_hist && std::filesystem::exists(hist_path)) {
      for (const auto& line : read_lines(hist_path)) {
        const auto n_pos = line.find("\"N\":");
        const auto a_pos = line.find("\"axis_value\":");
        if (n_pos == std::string::npos || a_pos == std::string::npos) continue;
        const int n = std::stoi(line.substr(n_pos + 4));
        const auto a_end = line.find(',', a_pos);
        done_hist[point_key(n, line.substr(a_pos + 13, a_end - a_pos - 13))] = line;
      }
    }
  }

  SweepSummary summary;
  summary.points_total = grid.size();
  std::vector<bool> reuse(grid.size(), false);
  for (const auto& p : grid) {
    const std::string key = point_key(p.num_qubits, format_double(p.axis_value));
    auto it = done_rows.find(key);
    reuse[p.index] = it != done_rows.end() && it->second.size() == rows_per_point &&
                     (!wants_hist || done_hist.count(key));
  }

  if (const auto dir = std::filesystem::path(cfg.output).parent_path(); !dir.empty())
    std::filesystem::create_directories(dir);
  std::ofstream out(cfg.output, std::ios::binary | std::ios::trunc);
  require(out.good(), ErrorKind::Io, "run_sweep: cannot write '" + cfg.output + "'");
  std::ofstream hist_out;
  if (wants_hist) {
    hist_out.open(hist_path, std::ios::binary | std::ios::trunc);
    require(hist_out.good(), ErrorKind::Io, "run_sweep: cannot write '" + hist_path + "'");
  }
  out << header;
  out.flush();

  for (const auto& p : grid) {
    const std::string key = point_key(p.num_qubits, format_double(p.axis_value));
    if (reuse[p.index]) {
      for (const auto& line : done_rows[key]) out << line << "\n";
      if (wants_hist) hist_out << done_hist[key] << "\n";
      ++summary.points_skipped;
    } else {
      const GridResult result = run_grid_point(cfg, p, threads);
      for (const auto& r : result.records) out << format_record(r) << "\n";
      if (wants_hist && result.coherence_histogram)
        hist_out << histogram_line(cfg, p, *result.coherence_histogram) << "\n";
    }
    summary.records_written += rows_per_point;
    out.flush();
    if (wants_hist) hist_out.flush();
    require(out.good(), ErrorKind::Io, "run_sweep: write to '" + cfg.output + "' failed");
  }
  return summary;
}

}  // namespace permtherm
