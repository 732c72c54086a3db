#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "permtherm/error.hpp"
#include "permtherm/kernels/kernels.hpp"
#include "permtherm/parallel.hpp"
#include "permtherm/report.hpp"
#include "permtherm/sweep.hpp"

namespace {

using namespace permtherm;

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  require(out.good(), ErrorKind::Io, "cannot write '" + out_path + "'");
  out << text;
}

int error_line(const std::string& kind, const std::string& message) {
  std::cerr << nlohmann::json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random permutation dynamics: projected-ensemble sweeps and analysis"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string out_path;
  app.add_option("--seed", seed, "Override the config's master seed");
  app.add_option("--threads", threads, "Worker threads (default: PERMTHERM_THREADS or all cores)")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", out_path, "Output file (sweep CSV or analysis report)");

  auto* sweep = app.add_subcommand("run-sweep", "Run a parameter sweep from a YAML config");
  std::string config_path;
  sweep->add_option("config", config_path, "Config file")->required();

  auto* analyze = app.add_subcommand("analyze", "Post-process sweep output");
  analyze->require_subcommand(1);

  std::string observable = "trace_dist_haar";
  int k = 2;
  std::vector<int> sizes;
  std::string csv_path;
  auto* crossing = analyze->add_subcommand("crossing", "Two-size crossing point");
  crossing->add_option("records", csv_path, "Sweep CSV")->required();
  crossing->add_option("--observable", observable, "Observable name");
  crossing->add_option("--k", k, "Moment order (0 for non-moment observables)");
  crossing->add_option("--sizes", sizes, "Two sizes to cross (default: the two largest)")->expected(2);

  double x_star = 0.5;
  auto* fss = analyze->add_subcommand("fss", "Finite-size-scaling collapse");
  fss->add_option("records", csv_path, "Sweep CSV")->required();
  fss->add_option("--observable", observable, "Observable name");
  fss->add_option("--k", k, "Moment order (0 for non-moment observables)");
  fss->add_option("--x-star", x_star, "Critical point held fixed")->required();

  std::string hist_path;
  auto* dist = analyze->add_subcommand("distributions", "Histogram sidecar to CSV");
  dist->add_option("histograms", hist_path, "Histogram JSON-lines file")->required();

  int validate_n = 3;
  auto* validate = analyze->add_subcommand("validate", "Exact-oracle checks");
  validate->add_option("--n", validate_n, "Qubit count (2 or 3)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return error_line("usage", e.what());
  }

  try {
    const int n_threads = resolve_threads(threads);
    if (*sweep) {
      ExperimentConfig cfg = load_config(config_path);
      if (seed) cfg.master_seed = *seed;
      if (!out_path.empty()) cfg.output = out_path;
      const SweepSummary s = run_sweep(cfg, n_threads);
      std::cerr << "wrote " << cfg.output << ": " << s.points_total << " grid points ("
                << s.points_skipped << " reused), " << s.records_written << " rows, kernels="
                << kernels::to_string(kernels::active().backend) << ", threads=" << n_threads << "\n";
      return 0;
    }
    if (*crossing) {
      std::optional<std::pair<int, int>> pair;
      if (sizes.size() == 2) pair = std::make_pair(sizes[0], sizes[1]);
      emit(analyze_crossing(read_records(csv_path), observable, k, pair), out_path);
    } else if (*fss) {
      emit(analyze_fss(read_records(csv_path), observable, k, x_star), out_path);
    } else if (*dist) {
      emit(analyze_distributions(hist_path), out_path);
    } else if (*validate) {
      const auto checks = run_validation(validate_n);
      emit(validation_json(checks), out_path);
      for (const auto& c : checks)
        if (!c.pass) return 1;
    }
    return 0;
  } catch (const Error& e) {
    return error_line(to_string(e.kind()), e.what());
  } catch (const std::exception& e) {
    return error_line("internal", e.what());
  }
}
