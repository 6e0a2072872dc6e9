#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dpasync/mpac.hpp"
#include "dpasync/oscillator.hpp"

namespace dpasync {

enum class Algorithm { mpac, dfpc };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& name);

/// One sweep cell: everything that identifies a simulation condition except
/// the algorithm, so that paired runs share topologies and noise streams.
struct CellParams {
  int n_nodes = 20;
  double connectivity = 0.5;
  double snr_db = 0.0;
};

struct ExperimentConfig {
  std::vector<int> n_nodes{20};
  std::vector<double> connectivity{0.5};
  std::vector<double> snr_db{0.0};
  std::vector<Algorithm> algorithms{Algorithm::mpac, Algorithm::dfpc};
  int trials = 1000;
  int max_iterations = 500;
  double eta_deg = 1.0;  // values <= 0 disable early stopping
  std::uint64_t seed = 1;
  SimulationParams sim;     // snr field is overridden per cell from snr_db
  double gamma = 1e12;
  double node_weight = 1.0;

  int n_threads = 0;  // 0: hardware concurrency
};

/// Validates every module precondition reachable from the config; throws
/// std::invalid_argument naming the offending key.
void validate_config(const ExperimentConfig& config);

struct TrialRecord {
  int trial = 0;
  Algorithm algorithm = Algorithm::mpac;
  int n_nodes = 0;
  double connectivity = 0.0;
  double snr_db = 0.0;
  std::optional<int> convergence_iteration;  // absent: did not converge
  double final_sigma_phi_deg = 0.0;          // state reading at the last iteration run
  double final_sigma_phi_components_deg = 0.0;
  std::vector<double> sigma_phi_state_trace_deg;
  std::vector<double> sigma_phi_components_trace_deg;

  bool operator==(const TrialRecord&) const = default;
};

/// Aggregates over the trials of one (algorithm, N, c, SNR) cell. Iteration
/// statistics cover converged trials only; non-convergence is counted
/// separately. Final-sigma statistics cover all trials.
struct CellAggregate {
  Algorithm algorithm = Algorithm::mpac;
  int n_nodes = 0;
  double connectivity = 0.0;
  double snr_db = 0.0;
  int trials = 0;
  int converged_count = 0;
  double mean_convergence_iters = 0.0;  // NaN when no trial converged
  double sd_convergence_iters = 0.0;    // NaN when fewer than 2 converged
  double mean_final_sigma_phi_deg = 0.0;
  double sd_final_sigma_phi_deg = 0.0;
};

struct SweepResult {
  std::vector<CellAggregate> cells;
};

/// Seed derivation (documented contract, stable across releases):
///   trial_seed  = derive(master, n_nodes, bits(connectivity), bits(snr_db), trial)
///   topology    <- derive(trial_seed, 'T')
///   init states <- derive(trial_seed, 'I')
///   node n      <- derive(trial_seed, 'N', n)
/// The algorithm is deliberately absent so MPAC/DFPC trials are paired, and
/// keys are parameter hashes (not sweep indices) so adding cells never
/// perturbs other cells' streams.
std::uint64_t trial_seed(std::uint64_t master, const CellParams& cell, int trial);

/// Runs one trial: fresh topology, random initial states, then per-iteration
/// evolve / observe / consensus update / retune, recording both sigma_phi
/// readings. Stops at the first state-reading sigma_phi <= eta_deg (if
/// eta_deg > 0) or at max_iterations.
TrialRecord run_trial(const ExperimentConfig& config, const CellParams& cell,
                      Algorithm algorithm, int trial);

/// Cartesian product of the config lists x trials, in parallel. Aggregation
/// is a deterministic reduction independent of completion order.
SweepResult run_sweep(const ExperimentConfig& config);

/// run_sweep that also returns every TrialRecord (ordered by cell, trial).
SweepResult run_sweep(const ExperimentConfig& config, std::vector<TrialRecord>& records);

enum class OutputFormat { csv, json };

/// Writes the sweep aggregate table. CSV columns:
///   algorithm, n_nodes, connectivity, snr_db, trials, converged_count,
///   mean_convergence_iters, sd_convergence_iters,
///   mean_final_sigma_phi_deg, sd_final_sigma_phi_deg
/// JSON mirrors the schema. Numbers carry 17 significant digits.
void emit_results(const SweepResult& result, OutputFormat format, const std::string& path);
std::string format_results(const SweepResult& result, OutputFormat format);

/// Inverse of the JSON form of format_results/emit_results.
SweepResult parse_results_json(const std::string& text);

/// Per-trial trace table: "trial,k,sigma_phi_deg_state,sigma_phi_deg_components".
void write_trace(const std::vector<TrialRecord>& records, const std::string& path);

/// Flat key = value config file (comma-separated lists, '#' comments).
/// Unknown keys, type mismatches and infeasible combinations are reported
/// with the key name. Absent keys keep their defaults.
ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

/// Command-line values that take precedence over config-file values.
struct ConfigOverrides {
  std::vector<int> n_nodes;  // empty: keep
  std::vector<double> connectivity;
  std::vector<double> snr_db;
  std::vector<Algorithm> algorithms;
  std::optional<int> trials;
  std::optional<int> max_iterations;
  std::optional<double> eta_deg;
  std::optional<std::uint64_t> seed;
  std::optional<double> gamma;
  std::optional<int> n_threads;
};

ExperimentConfig apply_overrides(ExperimentConfig config, const ConfigOverrides& overrides);

/// Config from an optional file plus overrides, validated. An empty path
/// starts from the defaults.
ExperimentConfig parse_config(const std::string& path, const ConfigOverrides& overrides);

}  // namespace dpasync
