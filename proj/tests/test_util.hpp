#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "dpasync/analysis.hpp"
#include "dpasync/graph.hpp"
#include "dpasync/mpac.hpp"

namespace dpasync::testutil {

struct FixedPoint {
  std::vector<double> freq;
  std::vector<double> phase;
  int iterations = 0;
  bool settled = false;
};

/// Iterates MPAC on static observations until consensus values and message
/// scales stop moving (relative change below tol), or until max_iters.
inline FixedPoint run_to_fixed_point(const NetworkTopology& topo, const MpacConfig& config,
                                     const std::vector<Observation>& observations,
                                     double tol = 1e-13, int max_iters = 300000) {
  MpacState state = init_mpac(topo, config, 0.0);
  FixedPoint fp;
  for (int k = 1; k <= max_iters; ++k) {
    MpacState next = mpac_iteration(state, observations, config);
    double delta = 0.0, scale = 0.0;
    for (int i = 0; i < topo.n_nodes; ++i) {
      delta = std::max(delta, std::abs(next.consensus_freq[i] - state.consensus_freq[i]));
      delta = std::max(delta, std::abs(next.consensus_phase[i] - state.consensus_phase[i]));
      scale = std::max({scale, std::abs(next.consensus_freq[i]),
                        std::abs(next.consensus_phase[i])});
    }
    double scale_delta = 0.0, scale_mag = 0.0;
    for (std::size_t e = 0; e < next.messages.size(); ++e) {
      scale_delta = std::max(scale_delta,
                             std::abs(next.messages[e].scale - state.messages[e].scale));
      scale_mag = std::max(scale_mag, std::abs(next.messages[e].scale));
    }
    state = std::move(next);
    if (delta <= tol * std::max(1.0, scale) &&
        scale_delta <= tol * std::max(1.0, scale_mag)) {
      fp.settled = true;
      fp.iterations = k;
      break;
    }
    fp.iterations = k;
  }
  fp.freq = state.consensus_freq;
  fp.phase = state.consensus_phase;
  return fp;
}

/// Closed-form minimizer for uniform-weight problems on a topology.
inline Eigen::VectorXd oracle_consensus(const NetworkTopology& topo, double gamma,
                                        const Eigen::VectorXd& targets) {
  ConsensusProblem problem;
  problem.laplacian = laplacian(topo);
  problem.weights = Eigen::VectorXd::Ones(topo.n_nodes);
  problem.gamma = gamma;
  problem.targets = targets;
  return closed_form_consensus(problem);
}

inline double max_rel_error(const std::vector<double>& got, const Eigen::VectorXd& want) {
  double denom = std::max(want.cwiseAbs().maxCoeff(), 1e-30);
  double err = 0.0;
  for (int i = 0; i < want.size(); ++i)
    err = std::max(err, std::abs(got[i] - want[i]) / denom);
  return err;
}

}  // namespace dpasync::testutil
