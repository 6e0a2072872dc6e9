#pragma once

#include <Eigen/Dense>
#include <utility>

#include "dpasync/graph.hpp"

namespace dpasync {

/// Doubly-stochastic mixing matrix with the graph's sparsity pattern.
struct MixingMatrix {
  Eigen::MatrixXd entries;
  int n_nodes = 0;
};

/// Metropolis-Hastings weights: W[m][n] = 1 / (1 + max(d_m, d_n)) on edges,
/// diagonal fills each row to 1. Needs only local degree information.
MixingMatrix metropolis_weights(const NetworkTopology& topology);

/// One consensus step of the classical baseline: both observed state vectors
/// multiplied by the mixing matrix. Throws on dimension mismatch.
std::pair<Eigen::VectorXd, Eigen::VectorXd> dfpc_step(const Eigen::VectorXd& freqs_obs,
                                                      const Eigen::VectorXd& phases_obs,
                                                      const MixingMatrix& mix);

}  // namespace dpasync
