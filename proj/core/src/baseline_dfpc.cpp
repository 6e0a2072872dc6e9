#include "dpasync/baseline_dfpc.hpp"

#include <algorithm>
#include <stdexcept>

namespace dpasync {

MixingMatrix metropolis_weights(const NetworkTopology& topology) {
  const int n = topology.n_nodes;
  MixingMatrix mix;
  mix.n_nodes = n;
  mix.entries = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [a, b] : topology.edges) {
    const double w = 1.0 / (1.0 + std::max(topology.degrees[a], topology.degrees[b]));
    mix.entries(a, b) = w;
    mix.entries(b, a) = w;
  }
  for (int i = 0; i < n; ++i) {
    double off = mix.entries.row(i).sum();
    mix.entries(i, i) = 1.0 - off;
  }
  return mix;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> dfpc_step(const Eigen::VectorXd& freqs_obs,
                                                      const Eigen::VectorXd& phases_obs,
                                                      const MixingMatrix& mix) {
  if (freqs_obs.size() != mix.n_nodes || phases_obs.size() != mix.n_nodes)
    throw std::invalid_argument("dfpc_step: state vector length must match n_nodes");
  return {mix.entries * freqs_obs, mix.entries * phases_obs};
}

}  // namespace dpasync
