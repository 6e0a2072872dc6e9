#include "dpasync/metrics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dpasync {

double total_phase_error(double drift_hz, double freq_meas_err_hz, double jitter_rad,
                         double phase_meas_err_rad, double interval_s) {
  const double two_pi_t = 2.0 * std::numbers::pi * interval_s;
  const double drift_ramp = -std::numbers::pi * interval_s * drift_hz;
  return two_pi_t * drift_hz + two_pi_t * freq_meas_err_hz + drift_ramp + jitter_rad +
         phase_meas_err_rad;
}

double total_interval_phase(double freq_offset_hz, double phase_rad, double interval_s) {
  return 2.0 * std::numbers::pi * interval_s * freq_offset_hz + phase_rad;
}

double sigma_phi(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) throw std::invalid_argument("sigma_phi needs at least 2 values");
  // Welford; the tests cross-check against a plain two-pass evaluation.
  double mean = 0.0, m2 = 0.0;
  std::size_t count = 0;
  for (double v : values) {
    ++count;
    const double d1 = v - mean;
    mean += d1 / static_cast<double>(count);
    m2 += d1 * (v - mean);
  }
  return std::sqrt(m2 / static_cast<double>(n - 1));
}

PhaseErrorReport check_convergence(std::span<const double> values, double eta_rad) {
  PhaseErrorReport report;
  report.per_node_total_phase.assign(values.begin(), values.end());
  report.sigma_phi = sigma_phi(values);
  double sum = 0.0;
  for (double v : values) sum += v;
  report.mean_phase = sum / static_cast<double>(values.size());
  report.eta = eta_rad;
  report.converged = report.sigma_phi <= eta_rad;
  return report;
}

}  // namespace dpasync
