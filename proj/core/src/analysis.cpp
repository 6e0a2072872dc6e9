#include "dpasync/analysis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dpasync {

Eigen::VectorXd closed_form_consensus(const ConsensusProblem& problem) {
  const auto n = problem.laplacian.rows();
  if (n == 0 || problem.laplacian.cols() != n)
    throw std::invalid_argument("laplacian must be square and non-empty");
  if (problem.weights.size() != n || problem.targets.size() != n)
    throw std::invalid_argument("weights/targets size must match the laplacian");
  if (!(problem.gamma > 0.0) || !std::isfinite(problem.gamma))
    throw std::invalid_argument("gamma must be positive and finite");
  if ((problem.weights.array() <= 0.0).any())
    throw std::invalid_argument("weights must be positive");

  // Exact mean deflation: (gamma L + W)(m 1) = m W 1 because L 1 = 0, so
  // x* = m 1 + (gamma L + W)^-1 W (z - m 1) with m the weighted mean.
  const double m = problem.weights.dot(problem.targets) / problem.weights.sum();
  const Eigen::VectorXd centered = problem.targets.array() - m;

  Eigen::MatrixXd system = problem.laplacian;
  system.diagonal() += problem.weights / problem.gamma;
  const Eigen::VectorXd rhs =
      (problem.weights.array() / problem.gamma * centered.array()).matrix();

  Eigen::LDLT<Eigen::MatrixXd> ldlt(system);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("closed_form_consensus: factorization failed (disconnected graph?)");
  Eigen::VectorXd correction = ldlt.solve(rhs);
  if (!correction.allFinite())
    throw std::runtime_error("closed_form_consensus: solve produced non-finite values");
  return (correction.array() + m).matrix();
}

double weighted_mean_limit(const Eigen::VectorXd& weights, const Eigen::VectorXd& targets) {
  if (weights.size() != targets.size() || weights.size() == 0)
    throw std::invalid_argument("weights and targets must be non-empty and equal-sized");
  if ((weights.array() <= 0.0).any())
    throw std::invalid_argument("weights must be positive");
  return weights.dot(targets) / weights.sum();
}

double accumulated_error_prediction(const ConsensusProblem& problem, int n_intervals) {
  if (n_intervals < 1) throw std::invalid_argument("n_intervals must be positive");
  const double n = static_cast<double>(problem.laplacian.rows());
  return static_cast<double>(n_intervals) * problem.offset_error_var / n;
}

double freq_offset_error_variance(const NoiseModel& noise) {
  return noise.sigma_f * noise.sigma_f + noise.sigma_f_meas * noise.sigma_f_meas;
}

double phase_offset_error_variance(const NoiseModel& noise, const SimulationParams& params) {
  const double ramp = std::numbers::pi * params.update_interval * noise.sigma_f;
  return ramp * ramp + noise.sigma_theta_meas * noise.sigma_theta_meas +
         noise.sigma_theta * noise.sigma_theta;
}

}  // namespace dpasync
