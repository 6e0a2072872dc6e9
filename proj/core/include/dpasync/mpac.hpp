#pragma once

#include <span>
#include <vector>

#include "dpasync/graph.hpp"

namespace dpasync {

/// Damping map gamma*x / (gamma + x): keeps message scales positive and
/// strictly below gamma, which is what makes the message passing converge on
/// cyclic graphs as well as trees.
double f_gamma(double x, double gamma);

struct MpacConfig {
  double gamma = 1e12;
  std::vector<double> node_weights;  // w_n > 0 per node

  static MpacConfig uniform(int n_nodes, double gamma = 1e12, double weight = 1.0) {
    return MpacConfig{gamma, std::vector<double>(n_nodes, weight)};
  }
};

/// Message carried on a directed edge m -> n.
struct MpacMessage {
  double mu_f = 0.0;      // coarse frequency average, same units as the inputs
  double mu_theta = 0.0;  // coarse phase average, rad
  double scale = 0.0;     // damped weight sum, in (0, gamma)
};

/// Synchronous message-passing state. All iteration-k quantities are computed
/// from the iteration-(k-1) inbox, so node evaluation order never matters.
/// Holds a non-owning pointer to the (immutable) topology.
struct MpacState {
  const NetworkTopology* topology = nullptr;

  // Directed edge e: edge_src[e] -> edge_dst[e]; undirected edge i maps to
  // directed ids 2i and 2i+1, which are each other's reversal.
  std::vector<int> edge_src;
  std::vector<int> edge_dst;
  std::vector<std::vector<int>> incoming;  // node -> incoming directed edge ids

  std::vector<MpacMessage> messages;   // indexed by directed edge id
  std::vector<double> consensus_freq;  // f_n(k)
  std::vector<double> consensus_phase; // theta_n(k)
  int iteration = 0;

  int directed_edge_count() const { return static_cast<int>(edge_src.size()); }
  static int reverse_edge(int edge_id) { return edge_id ^ 1; }

  /// Inbox lookup for the directed edge m -> n. Throws if absent.
  const MpacMessage& message_from(int m, int n) const;
};

/// Per-node observation pair handed to the update rules.
struct Observation {
  double freq = 0.0;
  double phase = 0.0;
};

/// Validates the config (positive finite gamma, positive weights, size match)
/// and builds the iteration-0 state: every directed message m -> n starts as
/// (init_freq, pi, f_gamma(w_m)) and consensus values start at the common
/// initialization. Throws std::invalid_argument on bad config.
MpacState init_mpac(const NetworkTopology& topology, const MpacConfig& config,
                    double init_freq);

/// Consensus update for one node from its full inbox:
///   f_n(k) = (w_n f_obs + sum_m s_{m->n} mu^f_{m->n}) / s_n(k),
///   s_n(k) = w_n + sum_m s_{m->n}
/// and the same combination for the phase.
Observation update_node(int node, const Observation& obs, const MpacState& state,
                        const MpacConfig& config);

/// Outgoing message node -> recipient: the same weighted average with the
/// recipient's own incoming message excluded from the sums, and
/// scale = f_gamma(w_n + sum_{l != recipient} s_{l->n}).
MpacMessage compute_outgoing(int node, int recipient, const Observation& obs,
                             const MpacState& state, const MpacConfig& config);

/// One synchronous round: step (a) updates every node's consensus values,
/// steps (b)+(c) recompute every directed message. Everything reads only the
/// previous round's inbox. Returns the iteration-(k+1) state.
MpacState mpac_iteration(const MpacState& state, std::span<const Observation> observations,
                         const MpacConfig& config);

}  // namespace dpasync
