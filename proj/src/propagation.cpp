#include "mmroute/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mmroute/error.hpp"

namespace mmroute {

void PropagationConfig::validate() const {
  require(std::isfinite(carrier_frequency_hz) && carrier_frequency_hz >= 30e9 &&
              carrier_frequency_hz <= 300e9,
          ErrorCode::config,
          "carrier_frequency_hz must lie in the mmWave band [30e9, 300e9], got " +
              std::to_string(carrier_frequency_hz));
  require(std::isfinite(noise_min_db) && std::isfinite(noise_max_db) && noise_min_db >= 0.0 &&
              noise_min_db <= noise_max_db,
          ErrorCode::config, "noise bounds must satisfy 0 <= noise_min_db <= noise_max_db");
}

double distance(Position a, Position b) {
  return std::hypot(b.x - a.x, b.y - a.y);
}

double fsl(double d, double f, const PropagationConfig& cfg) {
  require(d > 0.0, ErrorCode::degenerate_geometry, "fsl: colocated stations (distance 0)");
  require(f > 0.0, ErrorCode::contract_violation, "fsl: carrier frequency must be positive");
  const double argument = 4.0 * std::numbers::pi * d * f / kSpeedOfLight;
  if (cfg.power_domain == PowerDomain::verbatim_linear) {
    const double gain = 1.0 / argument;
    return gain * gain;
  }
  return 20.0 * std::log10(argument);
}

double angle_to_power(double alpha_degrees) {
  if (alpha_degrees >= 0.0 && alpha_degrees <= 90.0) return 1.0 - alpha_degrees / 90.0;
  return 0.0;
}

double interference_angle(Position victim_rx, Position intended_tx, Position interferer_tx) {
  const double ux = intended_tx.x - victim_rx.x;
  const double uy = intended_tx.y - victim_rx.y;
  const double vx = interferer_tx.x - victim_rx.x;
  const double vy = interferer_tx.y - victim_rx.y;
  const double nu = std::hypot(ux, uy);
  const double nv = std::hypot(vx, vy);
  require(nu > 0.0 && nv > 0.0, ErrorCode::degenerate_geometry,
          "interference_angle: receiver coincides with a transmitter");
  const double cosine = std::clamp((ux * vx + uy * vy) / (nu * nv), -1.0, 1.0);
  return std::acos(cosine) * 180.0 / std::numbers::pi;
}

double sample_noise(RandomStream& rng, const PropagationConfig& cfg) {
  return rng.uniform(cfg.noise_min_db, cfg.noise_max_db);
}

}  // namespace mmroute
