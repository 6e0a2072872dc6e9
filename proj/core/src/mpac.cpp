#include "dpasync/mpac.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dpasync {

double f_gamma(double x, double gamma) { return gamma * x / (gamma + x); }

const MpacMessage& MpacState::message_from(int m, int n) const {
  for (int e : incoming[n])
    if (edge_src[e] == m) return messages[e];
  throw std::out_of_range("no directed edge between the given nodes");
}

namespace {

void validate_config(const NetworkTopology& topology, const MpacConfig& config) {
  if (!(config.gamma > 0.0) || !std::isfinite(config.gamma))
    throw std::invalid_argument("gamma must be positive and finite");
  if (static_cast<int>(config.node_weights.size()) != topology.n_nodes)
    throw std::invalid_argument("node_weights size must match n_nodes");
  for (double w : config.node_weights)
    if (!(w > 0.0) || !std::isfinite(w))
      throw std::invalid_argument("node weights must be positive and finite");
}

}  // namespace

MpacState init_mpac(const NetworkTopology& topology, const MpacConfig& config,
                    double init_freq) {
  validate_config(topology, config);

  MpacState state;
  state.topology = &topology;
  const int n_dir = 2 * topology.edge_count();
  state.edge_src.reserve(n_dir);
  state.edge_dst.reserve(n_dir);
  state.incoming.assign(topology.n_nodes, {});
  for (const auto& [m, n] : topology.edges) {
    state.edge_src.push_back(m);
    state.edge_dst.push_back(n);
    state.incoming[n].push_back(static_cast<int>(state.edge_src.size()) - 1);
    state.edge_src.push_back(n);
    state.edge_dst.push_back(m);
    state.incoming[m].push_back(static_cast<int>(state.edge_src.size()) - 1);
  }

  state.messages.resize(n_dir);
  for (int e = 0; e < n_dir; ++e) {
    state.messages[e].mu_f = init_freq;
    state.messages[e].mu_theta = std::numbers::pi;
    state.messages[e].scale = f_gamma(config.node_weights[state.edge_src[e]], config.gamma);
  }
  state.consensus_freq.assign(topology.n_nodes, init_freq);
  state.consensus_phase.assign(topology.n_nodes, std::numbers::pi);
  state.iteration = 0;
  return state;
}

Observation update_node(int node, const Observation& obs, const MpacState& state,
                        const MpacConfig& config) {
  const double w = config.node_weights[node];
  double scale_sum = w;
  double freq_num = w * obs.freq;
  double phase_num = w * obs.phase;
  for (int e : state.incoming[node]) {
    const MpacMessage& msg = state.messages[e];
    scale_sum += msg.scale;
    freq_num += msg.scale * msg.mu_f;
    phase_num += msg.scale * msg.mu_theta;
  }
  return Observation{freq_num / scale_sum, phase_num / scale_sum};
}

MpacMessage compute_outgoing(int node, int recipient, const Observation& obs,
                             const MpacState& state, const MpacConfig& config) {
  const double w = config.node_weights[node];
  double scale_sum = w;
  double freq_num = w * obs.freq;
  double phase_num = w * obs.phase;
  bool recipient_is_neighbor = false;
  for (int e : state.incoming[node]) {
    if (state.edge_src[e] == recipient) {  // exclusive: drop the recipient's message
      recipient_is_neighbor = true;
      continue;
    }
    const MpacMessage& msg = state.messages[e];
    scale_sum += msg.scale;
    freq_num += msg.scale * msg.mu_f;
    phase_num += msg.scale * msg.mu_theta;
  }
  if (!recipient_is_neighbor)
    throw std::invalid_argument("compute_outgoing: recipient is not a neighbor");
  MpacMessage out;
  out.mu_f = freq_num / scale_sum;
  out.mu_theta = phase_num / scale_sum;
  out.scale = f_gamma(scale_sum, config.gamma);
  return out;
}

MpacState mpac_iteration(const MpacState& state, std::span<const Observation> observations,
                         const MpacConfig& config) {
  const NetworkTopology& topo = *state.topology;
  if (static_cast<int>(observations.size()) != topo.n_nodes)
    throw std::invalid_argument("observation count must match n_nodes");

  MpacState next = state;  // copies edge structure; messages overwritten below
  for (int n = 0; n < topo.n_nodes; ++n) {
    const Observation upd = update_node(n, observations[n], state, config);
    next.consensus_freq[n] = upd.freq;
    next.consensus_phase[n] = upd.phase;
  }
  for (int e = 0; e < state.directed_edge_count(); ++e) {
    const int src = state.edge_src[e];
    next.messages[e] = compute_outgoing(src, state.edge_dst[e], observations[src], state, config);
  }
  next.iteration = state.iteration + 1;
  return next;
}

}  // namespace dpasync
