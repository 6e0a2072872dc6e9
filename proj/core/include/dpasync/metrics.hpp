#pragma once

#include <span>
#include <vector>

namespace dpasync {

constexpr double deg_from_rad(double rad) { return rad * (180.0 / 3.14159265358979323846); }
constexpr double rad_from_deg(double deg) { return deg * (3.14159265358979323846 / 180.0); }

/// Dispersion of the per-node phase values against the convergence threshold.
struct PhaseErrorReport {
  std::vector<double> per_node_total_phase;  // rad
  double sigma_phi = 0.0;                    // rad
  double mean_phase = 0.0;                   // rad
  double eta = 0.0;                          // rad
  bool converged = false;

  double sigma_phi_deg() const { return deg_from_rad(sigma_phi); }
};

/// Five-term per-interval phase error
///   2*pi*delta_f*T + 2*pi*eps_f*T - pi*T*delta_f + delta_theta + eps_theta
/// (the drift ramp is delta_theta_f = -pi*T*delta_f).
double total_phase_error(double drift_hz, double freq_meas_err_hz, double jitter_rad,
                         double phase_meas_err_rad, double interval_s);

/// Phase a node's signal reaches at the end of an interval, relative to the
/// common carrier reference: 2*pi*T*freq_offset + phase. Referencing to the
/// carrier keeps the ~6e5 rad common term out of the dispersion arithmetic;
/// sigma_phi is translation invariant, so the statistic is unchanged.
double total_interval_phase(double freq_offset_hz, double phase_rad, double interval_s);

/// Sample standard deviation sqrt(sum |v - mean|^2 / (N-1)).
/// Throws std::invalid_argument when fewer than 2 values are given.
double sigma_phi(std::span<const double> values);

/// Evaluates sigma_phi(values) against eta (radians): converged iff <= eta.
PhaseErrorReport check_convergence(std::span<const double> values, double eta_rad);

}  // namespace dpasync
