#pragma once

#include <Eigen/Dense>

#include "dpasync/oscillator.hpp"

namespace dpasync {

/// Penalized least-squares problem whose minimizer is the message-passing
/// fixed point: argmin_x sum_n w_n |x_n - z_n|^2 + gamma sum_(m,n) |x_m - x_n|^2.
struct ConsensusProblem {
  Eigen::MatrixXd laplacian;      // L, symmetric, L*1 = 0
  Eigen::VectorXd weights;        // diagonal of W, positive
  double gamma = 1e12;            // penalty
  Eigen::VectorXd targets;        // z
  double offset_error_var = 0.0;  // sigma_e^2 of the per-interval offset errors
};

/// Closed-form minimizer x* = (gamma L + W)^-1 W z via a direct SPD solve.
///
/// Solved as the rescaled system (L + W/gamma) x = (W/gamma) z with the
/// weighted mean deflated exactly first: at gamma ~ 1e12 the condition number
/// is ~1e13 and a naive solve loses ~4 digits; deflation confines that error
/// to the 1/gamma-sized correction term. Throws std::invalid_argument on an
/// invalid problem and std::runtime_error when the solve fails.
Eigen::VectorXd closed_form_consensus(const ConsensusProblem& problem);

/// gamma -> infinity limit of the minimizer: sum w_n z_n / sum w_n.
double weighted_mean_limit(const Eigen::VectorXd& weights, const Eigen::VectorXd& targets);

/// Predicted variance of the consensus offset after n_intervals accumulated
/// i.i.d. offset-error vectors, in the gamma -> infinity, w = 1 limit:
/// n_intervals * sigma_e^2 / N.
double accumulated_error_prediction(const ConsensusProblem& problem, int n_intervals);

/// Per-interval offset-error variances feeding ConsensusProblem:
///   frequency channel: sigma_f^2 + sigma_f_meas^2
///   phase channel:     (pi T sigma_f)^2 + sigma_theta_meas^2 + sigma_theta^2
double freq_offset_error_variance(const NoiseModel& noise);
double phase_offset_error_variance(const NoiseModel& noise, const SimulationParams& params);

}  // namespace dpasync
