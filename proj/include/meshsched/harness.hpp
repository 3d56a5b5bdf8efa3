#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "meshsched/rational.hpp"
#include "meshsched/schedule.hpp"

namespace meshsched {

// One experimental campaign: the grid of cells to visit, how many instances
// per cell, which engines to run on each instance, and reproducibility knobs.
struct SweepConfig {
  std::vector<int> n_values{60};
  std::vector<int> delta_values{4};
  int networks_per_cell = 1;
  int groups_per_network = 1;
  std::vector<NumberingScheme> schemes{NumberingScheme::nd_bf};
  std::vector<std::string> algs{"ser", "sera"};  // empty: graph statistics only
  std::vector<int> b_values{1};
  std::string mode = "estimate";  // "estimate" or "period"
  uint64_t seed = 1;
  long long max_iters = 200'000;  // period-detection cap
  long long t_max = 200'000;      // estimator slot cap
  Rational tol{1, 1000};          // estimator relative tolerance
  // Path-set sizes to evaluate per group; empty means every P in 1..n/2.
  std::vector<int> p_values;
  std::string out_dir = "sweep-out";
  int threads = 4;
  bool save_artifacts = true;

  // Full experimental grid; expect hours of compute.
  static SweepConfig paper_preset();
  // Scaled-down grid sized for minutes on a workstation.
  static SweepConfig desk_preset();
};

SweepConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const SweepConfig& cfg);

struct ResultRow {
  int n = 0, delta = 0, network_id = 0, group_id = 0, path_count = 0;
  std::string alg;     // "ser", "sera", or "none" for graph-only rows
  std::string scheme;  // "" when no engine ran
  int buffer_capacity = 0;  // 0 when not applicable
  std::string status;  // "ok" or an error name
  bool has_graph = false;
  Rational throughput, rho;
  long long period = 0;     // period mode only
  long long delivered = 0;  // period mode only
  long long iterations = 0;
  long long wall_micros = 0;  // kept out of results.csv; see timings.csv

  Rational p_prime() const { return Rational(2ll * path_count, n); }
};

struct SweepResult {
  std::vector<ResultRow> rows;  // sorted on (n, delta, net, group, P, alg, scheme, B)
};

// Runs the whole grid on cfg.threads workers. Output is a pure function of
// the config: per-instance seeds are derived, rows are sorted, and timings
// stay out of the result rows. Per-instance failures become row statuses.
// With save_artifacts the generated networks and path groups land under
// out_dir as JSON for later distribution reports.
SweepResult run_sweep(const SweepConfig& cfg);

void write_results_csv(const std::string& path, const std::vector<ResultRow>& rows);
void write_timings_csv(const std::string& path, const std::vector<ResultRow>& rows);

// Reads the saved network and path artifacts under out_dir and writes
// degree_dist.csv and path_size_dist.csv histograms, one row per
// (n, delta, value). Throws Error(missing_artifacts) when there is nothing
// to read.
void emit_distributions(const std::string& out_dir);

}  // namespace meshsched
