#include "dpasync/oscillator.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dpasync {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

NoiseModel build_noise_model(const SimulationParams& p) {
  if (!(p.carrier_freq > 0) || !(p.sample_rate > 0) || !(p.update_interval > 0) ||
      !(p.snr > 0))
    throw std::invalid_argument("simulation params must have positive f_c, f_s, T, snr");
  const double samples = p.sample_count();
  if (!(samples >= 1.0))
    throw std::invalid_argument("sample count L = T*f_s must be at least 1");

  NoiseModel noise;
  noise.sigma_f =
      p.carrier_freq * std::sqrt(p.beta1 / p.update_interval + p.beta2 * p.update_interval);
  noise.sigma_theta = std::sqrt(2.0 * std::pow(10.0, p.jitter_power_db / 10.0));
  noise.sigma_theta_meas = 2.0 / (samples * p.snr);
  noise.sigma_f_meas =
      std::sqrt(6.0 / (kTwoPi * kTwoPi * samples * samples * samples * p.snr));
  if (p.crlb_freq_scaled_by_fs) noise.sigma_f_meas *= p.sample_rate;

  for (double v : {noise.sigma_f, noise.sigma_theta, noise.sigma_f_meas,
                   noise.sigma_theta_meas}) {
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument("noise model evaluated to a non-finite magnitude");
  }
  return noise;
}

std::vector<OscillatorState> init_states(const SimulationParams& params, int n_nodes,
                                         Rng& rng) {
  if (n_nodes < 2) throw std::invalid_argument("init_states requires at least 2 nodes");
  std::vector<OscillatorState> states(n_nodes);
  const double init_sd = params.init_freq_rel_sd * params.carrier_freq;
  for (auto& s : states) {
    s.freq_offset_true = rng.normal(0.0, init_sd);
    s.phase_true = rng.uniform(0.0, kTwoPi);
    s.freq_offset_obs = s.freq_offset_true;
    s.phase_obs = s.phase_true;
  }
  return states;
}

void evolve(OscillatorState& state, const NoiseModel& noise,
            const SimulationParams& params, Rng& rng) {
  const double drift = rng.normal(0.0, noise.sigma_f);
  const double jitter = rng.normal(0.0, noise.sigma_theta);
  state.freq_offset_true += drift;
  state.phase_true += -std::numbers::pi * params.update_interval * drift + jitter;
  state.last_drift = drift;
  state.last_jitter = jitter;
}

void observe(OscillatorState& state, const NoiseModel& noise, Rng& rng) {
  const double freq_err = rng.normal(0.0, noise.sigma_f_meas);
  const double phase_err = rng.normal(0.0, noise.sigma_theta_meas);
  state.freq_offset_obs = state.freq_offset_true + freq_err;
  state.phase_obs = state.phase_true + phase_err;
  state.last_freq_meas_err = freq_err;
  state.last_phase_meas_err = phase_err;
}

}  // namespace dpasync
