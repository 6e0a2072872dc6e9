#include "dpasync/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "dpasync/baseline_dfpc.hpp"
#include "dpasync/metrics.hpp"

namespace dpasync {

std::string to_string(Algorithm a) { return a == Algorithm::mpac ? "mpac" : "dfpc"; }

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "mpac") return Algorithm::mpac;
  if (name == "dfpc") return Algorithm::dfpc;
  throw std::invalid_argument("unknown algorithm '" + name + "' (expected mpac or dfpc)");
}

void validate_config(const ExperimentConfig& config) {
  if (config.n_nodes.empty()) throw std::invalid_argument("n_nodes: list must not be empty");
  for (int n : config.n_nodes)
    if (n < 2) throw std::invalid_argument("n_nodes: need at least 2 nodes");
  if (config.connectivity.empty())
    throw std::invalid_argument("connectivity: list must not be empty");
  for (double c : config.connectivity) {
    if (!(c >= 0.0) || c > 1.0)
      throw std::invalid_argument("connectivity: values must lie in [0, 1]");
    for (int n : config.n_nodes) {
      if (edge_budget(n, c) < n - 1) {
        std::ostringstream msg;
        msg << "connectivity: c=" << c << " infeasible for n_nodes=" << n
            << " (minimum is " << min_connectivity(n) << ")";
        throw std::invalid_argument(msg.str());
      }
    }
  }
  if (config.snr_db.empty()) throw std::invalid_argument("snr_db: list must not be empty");
  if (config.algorithms.empty())
    throw std::invalid_argument("algorithms: list must not be empty");
  if (config.trials < 1) throw std::invalid_argument("trials: must be at least 1");
  if (config.max_iterations < 1)
    throw std::invalid_argument("max_iterations: must be at least 1");
  if (!(config.gamma > 0.0) || !std::isfinite(config.gamma))
    throw std::invalid_argument("gamma: must be positive and finite");
  if (!(config.node_weight > 0.0) || !std::isfinite(config.node_weight))
    throw std::invalid_argument("node_weight: must be positive and finite");
  for (double snr_db : config.snr_db) {
    SimulationParams p = config.sim;
    p.snr = std::pow(10.0, snr_db / 10.0);
    build_noise_model(p);  // throws on degenerate physics
  }
}

std::uint64_t trial_seed(std::uint64_t master, const CellParams& cell, int trial) {
  return derive_seed(master, static_cast<std::uint64_t>(cell.n_nodes),
                     seed_tag(cell.connectivity), seed_tag(cell.snr_db),
                     static_cast<std::uint64_t>(trial));
}

namespace {

constexpr std::uint64_t kTopologyTag = 'T';
constexpr std::uint64_t kInitTag = 'I';
constexpr std::uint64_t kNodeTag = 'N';

}  // namespace

TrialRecord run_trial(const ExperimentConfig& config, const CellParams& cell,
                      Algorithm algorithm, int trial) {
  SimulationParams params = config.sim;
  params.snr = std::pow(10.0, cell.snr_db / 10.0);
  const NoiseModel noise = build_noise_model(params);
  const int n = cell.n_nodes;

  const std::uint64_t base = trial_seed(config.seed, cell, trial);
  Rng topo_rng(derive_seed(base, kTopologyTag));
  Rng init_rng(derive_seed(base, kInitTag));
  std::vector<Rng> node_rngs;
  node_rngs.reserve(n);
  for (int i = 0; i < n; ++i)
    node_rngs.emplace_back(derive_seed(base, kNodeTag, static_cast<std::uint64_t>(i)));

  const NetworkTopology topology = generate_random_topology(n, cell.connectivity, topo_rng);
  std::vector<OscillatorState> states = init_states(params, n, init_rng);

  const MpacConfig mpac_config = MpacConfig::uniform(n, config.gamma, config.node_weight);
  MpacState mpac_state;
  MixingMatrix mix;
  if (algorithm == Algorithm::mpac) {
    // Frequencies run carrier-relative, so the f_c initialization of the
    // coarse averages is an offset of zero.
    mpac_state = init_mpac(topology, mpac_config, 0.0);
  } else {
    mix = metropolis_weights(topology);
  }

  TrialRecord rec;
  rec.trial = trial;
  rec.algorithm = algorithm;
  rec.n_nodes = n;
  rec.connectivity = cell.connectivity;
  rec.snr_db = cell.snr_db;

  const double eta_rad = rad_from_deg(config.eta_deg);
  std::vector<Observation> observations(n);
  std::vector<double> phi(n), components(n);
  Eigen::VectorXd f_obs(n), th_obs(n);

  for (int k = 1; k <= config.max_iterations; ++k) {
    for (int i = 0; i < n; ++i) {
      evolve(states[i], noise, params, node_rngs[i]);
      observe(states[i], noise, node_rngs[i]);
      observations[i] = {states[i].freq_offset_obs, states[i].phase_obs};
      components[i] =
          total_phase_error(states[i].last_drift, states[i].last_freq_meas_err,
                            states[i].last_jitter, states[i].last_phase_meas_err,
                            params.update_interval);
    }

    if (algorithm == Algorithm::mpac) {
      mpac_state = mpac_iteration(mpac_state, observations, mpac_config);
      for (int i = 0; i < n; ++i) {
        states[i].freq_offset_true = mpac_state.consensus_freq[i];
        states[i].phase_true = mpac_state.consensus_phase[i];
      }
    } else {
      for (int i = 0; i < n; ++i) {
        f_obs[i] = observations[i].freq;
        th_obs[i] = observations[i].phase;
      }
      auto [f_next, th_next] = dfpc_step(f_obs, th_obs, mix);
      for (int i = 0; i < n; ++i) {
        states[i].freq_offset_true = f_next[i];
        states[i].phase_true = th_next[i];
      }
    }

    for (int i = 0; i < n; ++i)
      phi[i] = total_interval_phase(states[i].freq_offset_true, states[i].phase_true,
                                    params.update_interval);
    const double sigma_state_deg = deg_from_rad(sigma_phi(phi));
    const double sigma_comp_deg = deg_from_rad(sigma_phi(components));
    rec.sigma_phi_state_trace_deg.push_back(sigma_state_deg);
    rec.sigma_phi_components_trace_deg.push_back(sigma_comp_deg);
    rec.final_sigma_phi_deg = sigma_state_deg;
    rec.final_sigma_phi_components_deg = sigma_comp_deg;

    if (config.eta_deg > 0.0 && rad_from_deg(sigma_state_deg) <= eta_rad) {
      rec.convergence_iteration = k;
      break;
    }
  }
  return rec;
}

namespace {

struct TaskKey {
  Algorithm algorithm;
  CellParams cell;
};

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v) {
  if (v.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

void parallel_for(int count, int n_threads, const std::function<void(int)>& body) {
  if (n_threads <= 0) {
    n_threads = static_cast<int>(std::thread::hardware_concurrency());
    if (n_threads <= 0) n_threads = 1;
  }
  n_threads = std::min(n_threads, count);
  if (n_threads <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> cursor{0};
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (int t = 0; t < n_threads; ++t) {
    pool.emplace_back([&] {
      for (int i = cursor.fetch_add(1); i < count; i = cursor.fetch_add(1)) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& config, std::vector<TrialRecord>& records) {
  validate_config(config);

  std::vector<TaskKey> cells;
  for (Algorithm alg : config.algorithms)
    for (int n : config.n_nodes)
      for (double c : config.connectivity)
        for (double snr : config.snr_db) cells.push_back({alg, {n, c, snr}});

  records.assign(static_cast<std::size_t>(cells.size()) * config.trials, {});
  const int total = static_cast<int>(records.size());
  parallel_for(total, config.n_threads, [&](int idx) {
    const TaskKey& key = cells[idx / config.trials];
    const int trial = idx % config.trials;
    records[idx] = run_trial(config, key.cell, key.algorithm, trial);
  });

  SweepResult result;
  result.cells.reserve(cells.size());
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    const TaskKey& key = cells[ci];
    CellAggregate agg;
    agg.algorithm = key.algorithm;
    agg.n_nodes = key.cell.n_nodes;
    agg.connectivity = key.cell.connectivity;
    agg.snr_db = key.cell.snr_db;
    agg.trials = config.trials;
    std::vector<double> iters, finals;
    for (int t = 0; t < config.trials; ++t) {
      const TrialRecord& rec = records[ci * config.trials + t];
      finals.push_back(rec.final_sigma_phi_deg);
      if (rec.convergence_iteration) iters.push_back(*rec.convergence_iteration);
    }
    agg.converged_count = static_cast<int>(iters.size());
    agg.mean_convergence_iters = mean_of(iters);
    agg.sd_convergence_iters = sd_of(iters);
    agg.mean_final_sigma_phi_deg = mean_of(finals);
    agg.sd_final_sigma_phi_deg = sd_of(finals);
    result.cells.push_back(agg);
  }
  return result;
}

SweepResult run_sweep(const ExperimentConfig& config) {
  std::vector<TrialRecord> records;
  return run_sweep(config, records);
}

namespace {

std::string full_precision(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

nlohmann::json cell_to_json(const CellAggregate& c) {
  nlohmann::json j;
  j["algorithm"] = to_string(c.algorithm);
  j["n_nodes"] = c.n_nodes;
  j["connectivity"] = c.connectivity;
  j["snr_db"] = c.snr_db;
  j["trials"] = c.trials;
  j["converged_count"] = c.converged_count;
  // JSON has no NaN literal; absent-statistics serialize as null.
  auto num_or_null = [](double v) {
    return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v);
  };
  j["mean_convergence_iters"] = num_or_null(c.mean_convergence_iters);
  j["sd_convergence_iters"] = num_or_null(c.sd_convergence_iters);
  j["mean_final_sigma_phi_deg"] = c.mean_final_sigma_phi_deg;
  j["sd_final_sigma_phi_deg"] = c.sd_final_sigma_phi_deg;
  return j;
}

CellAggregate cell_from_json(const nlohmann::json& j) {
  CellAggregate c;
  c.algorithm = algorithm_from_string(j.at("algorithm").get<std::string>());
  c.n_nodes = j.at("n_nodes").get<int>();
  c.connectivity = j.at("connectivity").get<double>();
  c.snr_db = j.at("snr_db").get<double>();
  c.trials = j.at("trials").get<int>();
  c.converged_count = j.at("converged_count").get<int>();
  auto num_or_nan = [&](const char* key) {
    const auto& v = j.at(key);
    return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
  };
  c.mean_convergence_iters = num_or_nan("mean_convergence_iters");
  c.sd_convergence_iters = num_or_nan("sd_convergence_iters");
  c.mean_final_sigma_phi_deg = j.at("mean_final_sigma_phi_deg").get<double>();
  c.sd_final_sigma_phi_deg = j.at("sd_final_sigma_phi_deg").get<double>();
  return c;
}

}  // namespace

std::string format_results(const SweepResult& result, OutputFormat format) {
  if (format == OutputFormat::json) {
    nlohmann::json j;
    j["cells"] = nlohmann::json::array();
    for (const auto& c : result.cells) j["cells"].push_back(cell_to_json(c));
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "algorithm,n_nodes,connectivity,snr_db,trials,converged_count,"
        "mean_convergence_iters,sd_convergence_iters,"
        "mean_final_sigma_phi_deg,sd_final_sigma_phi_deg\n";
  for (const auto& c : result.cells) {
    os << to_string(c.algorithm) << ',' << c.n_nodes << ',' << full_precision(c.connectivity)
       << ',' << full_precision(c.snr_db) << ',' << c.trials << ',' << c.converged_count
       << ',' << full_precision(c.mean_convergence_iters) << ','
       << full_precision(c.sd_convergence_iters) << ','
       << full_precision(c.mean_final_sigma_phi_deg) << ','
       << full_precision(c.sd_final_sigma_phi_deg) << '\n';
  }
  return os.str();
}

void emit_results(const SweepResult& result, OutputFormat format, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << format_results(result, format);
  if (!out) throw std::runtime_error("write failed: " + path);
}

SweepResult parse_results_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  SweepResult result;
  for (const auto& cj : j.at("cells")) result.cells.push_back(cell_from_json(cj));
  return result;
}

void write_trace(const std::vector<TrialRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open trace file: " + path);
  out << "algorithm,n_nodes,connectivity,snr_db,trial,k,"
         "sigma_phi_deg_state,sigma_phi_deg_components\n";
  out.precision(17);
  for (const auto& rec : records) {
    for (std::size_t k = 0; k < rec.sigma_phi_state_trace_deg.size(); ++k) {
      out << to_string(rec.algorithm) << ',' << rec.n_nodes << ',' << rec.connectivity << ','
          << rec.snr_db << ',' << rec.trial << ',' << (k + 1) << ','
          << rec.sigma_phi_state_trace_deg[k] << ',' << rec.sigma_phi_components_trace_deg[k]
          << '\n';
    }
  }
}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

double parse_double(const std::string& key, const std::string& text) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(key + ": expected a number, got '" + text + "'");
  }
}

long long parse_int(const std::string& key, const std::string& text) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(key + ": expected an integer, got '" + text + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw std::invalid_argument(key + ": expected true/false, got '" + text + "'");
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig config;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "n_nodes") {
      config.n_nodes.clear();
      for (const auto& item : split_list(value))
        config.n_nodes.push_back(static_cast<int>(parse_int(key, item)));
    } else if (key == "connectivity") {
      config.connectivity.clear();
      for (const auto& item : split_list(value))
        config.connectivity.push_back(parse_double(key, item));
    } else if (key == "snr_db") {
      config.snr_db.clear();
      for (const auto& item : split_list(value))
        config.snr_db.push_back(parse_double(key, item));
    } else if (key == "algorithms") {
      config.algorithms.clear();
      for (const auto& item : split_list(value))
        config.algorithms.push_back(algorithm_from_string(item));
    } else if (key == "trials") {
      config.trials = static_cast<int>(parse_int(key, value));
    } else if (key == "max_iterations") {
      config.max_iterations = static_cast<int>(parse_int(key, value));
    } else if (key == "eta_deg") {
      config.eta_deg = parse_double(key, value);
    } else if (key == "seed") {
      config.seed = static_cast<std::uint64_t>(parse_int(key, value));
    } else if (key == "carrier_freq") {
      config.sim.carrier_freq = parse_double(key, value);
    } else if (key == "sample_rate") {
      config.sim.sample_rate = parse_double(key, value);
    } else if (key == "update_interval") {
      config.sim.update_interval = parse_double(key, value);
    } else if (key == "beta1") {
      config.sim.beta1 = parse_double(key, value);
    } else if (key == "beta2") {
      config.sim.beta2 = parse_double(key, value);
    } else if (key == "jitter_power_db") {
      config.sim.jitter_power_db = parse_double(key, value);
    } else if (key == "init_freq_rel_sd") {
      config.sim.init_freq_rel_sd = parse_double(key, value);
    } else if (key == "crlb_freq_scaled_by_fs") {
      config.sim.crlb_freq_scaled_by_fs = parse_bool(key, value);
    } else if (key == "gamma") {
      config.gamma = parse_double(key, value);
    } else if (key == "node_weight") {
      config.node_weight = parse_double(key, value);
    } else if (key == "n_threads") {
      config.n_threads = static_cast<int>(parse_int(key, value));
    } else {
      throw std::invalid_argument("unknown config key '" + key + "' on line " +
                                  std::to_string(line_no));
    }
  }
  return config;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

ExperimentConfig apply_overrides(ExperimentConfig config, const ConfigOverrides& o) {
  if (!o.n_nodes.empty()) config.n_nodes = o.n_nodes;
  if (!o.connectivity.empty()) config.connectivity = o.connectivity;
  if (!o.snr_db.empty()) config.snr_db = o.snr_db;
  if (!o.algorithms.empty()) config.algorithms = o.algorithms;
  if (o.trials) config.trials = *o.trials;
  if (o.max_iterations) config.max_iterations = *o.max_iterations;
  if (o.eta_deg) config.eta_deg = *o.eta_deg;
  if (o.seed) config.seed = *o.seed;
  if (o.gamma) config.gamma = *o.gamma;
  if (o.n_threads) config.n_threads = *o.n_threads;
  return config;
}

ExperimentConfig parse_config(const std::string& path, const ConfigOverrides& overrides) {
  ExperimentConfig config;
  if (!path.empty()) config = parse_config_file(path);
  config = apply_overrides(config, overrides);
  validate_config(config);
  return config;
}

}  // namespace dpasync
