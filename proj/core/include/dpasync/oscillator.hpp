#pragma once

#include <vector>

#include "dpasync/rng.hpp"

namespace dpasync {

/// Physical constants of a simulation run. Defaults are the 1 GHz / 10 MHz /
/// 0.1 ms operating point with beta1 = beta2 = 5e-19 and A = -53.46 dB.
struct SimulationParams {
  double carrier_freq = 1e9;        // f_c, Hz
  double sample_rate = 1e7;         // f_s, Hz
  double update_interval = 1e-4;    // T, seconds
  double snr = 1.0;                 // linear power ratio
  double beta1 = 5e-19;             // ADEV coefficients
  double beta2 = 5e-19;
  double jitter_power_db = -53.46;  // integrated phase noise power A, dB
  double init_freq_rel_sd = 1e-4;   // crystal accuracy, fraction of f_c

  // The frequency-estimation CRLB sqrt(6 / ((2pi)^2 L^3 SNR)) is a
  // normalized (cycles/sample) bound; multiplying by f_s yields Hz. The
  // flag preserves the literal unscaled reading.
  bool crlb_freq_scaled_by_fs = true;

  double sample_count() const { return update_interval * sample_rate; }  // L
};

/// Standard deviations of the four per-interval noise channels.
struct NoiseModel {
  double sigma_f = 0.0;           // frequency drift sd, Hz
  double sigma_theta = 0.0;       // phase jitter sd, rad
  double sigma_f_meas = 0.0;      // frequency-estimation sd, Hz
  double sigma_theta_meas = 0.0;  // phase-estimation sd, rad
};

/// Per-node electrical state.
///
/// Frequencies are carried as offsets from the carrier: consensus residuals
/// reach ~1e-10 Hz dispersions, below the double-precision quantum of an
/// absolute value near 1 GHz. Phases are unwrapped (real line); wrapping
/// happens only in reporting.
struct OscillatorState {
  double freq_offset_true = 0.0;  // f_n - f_c, Hz
  double phase_true = 0.0;        // rad
  double freq_offset_obs = 0.0;   // observed offset, Hz
  double phase_obs = 0.0;         // rad
  double last_drift = 0.0;          // delta f drawn this interval, Hz
  double last_jitter = 0.0;         // delta theta, rad
  double last_freq_meas_err = 0.0;  // epsilon_f, Hz
  double last_phase_meas_err = 0.0; // epsilon_theta, rad
};

inline double freq_true_hz(const OscillatorState& s, const SimulationParams& p) {
  return p.carrier_freq + s.freq_offset_true;
}
inline double freq_obs_hz(const OscillatorState& s, const SimulationParams& p) {
  return p.carrier_freq + s.freq_offset_obs;
}

/// Evaluates all four noise magnitudes:
///   sigma_f          = f_c * sqrt(beta1/T + beta2*T)          (ADEV)
///   sigma_theta      = sqrt(2 * 10^(A/10))                    (jitter)
///   sigma_theta_meas = 2 / (L * SNR)                          (CRLB)
///   sigma_f_meas     = sqrt(6 / ((2pi)^2 L^3 SNR)) [* f_s]    (CRLB)
/// Throws std::invalid_argument on degenerate params (non-finite result).
NoiseModel build_noise_model(const SimulationParams& params);

/// Draws initial states: frequency offset ~ N(0, (init_freq_rel_sd*f_c)^2),
/// phase ~ U(0, 2pi). Observations start equal to the truth.
std::vector<OscillatorState> init_states(const SimulationParams& params, int n_nodes,
                                         Rng& rng);

/// One interval of oscillator dynamics: draws drift delta_f ~ N(0, sigma_f^2)
/// and jitter delta_theta ~ N(0, sigma_theta^2), then
///   freq  += delta_f
///   phase += -pi*T*delta_f + delta_theta
void evolve(OscillatorState& state, const NoiseModel& noise,
            const SimulationParams& params, Rng& rng);

/// Fresh observation: freq_obs = freq + eps_f, phase_obs = phase + eps_theta
/// with the estimation errors drawn at the CRLB standard deviations.
void observe(OscillatorState& state, const NoiseModel& noise, Rng& rng);

}  // namespace dpasync
