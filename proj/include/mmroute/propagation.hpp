#pragma once

#include "mmroute/rng.hpp"

namespace mmroute {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

struct Position {
  double x = 0.0;  // meters
  double y = 0.0;  // meters

  friend bool operator==(const Position&, const Position&) = default;
};

/// How power arithmetic is carried out.
///  decibel:          FSL = 20 log10(4 pi d f / c), subtracted from dB powers.
///  verbatim_linear:  FSL = (c / (4 pi d f))^2, subtracted as written.
enum class PowerDomain { decibel, verbatim_linear };

struct PropagationConfig {
  double carrier_frequency_hz = 60e9;
  double noise_min_db = 0.0;
  double noise_max_db = 0.0;
  PowerDomain power_domain = PowerDomain::decibel;

  /// Throws Error(config) on an out-of-band frequency or bad noise bounds.
  void validate() const;
};

double distance(Position a, Position b);

/// Free-space path loss over d meters at f hertz in the configured domain.
/// Throws Error(degenerate_geometry) when d == 0.
double fsl(double d, double f, const PropagationConfig& cfg);

/// Triangular receive-antenna directivity: 1 - alpha/90 on [0, 90], else 0.
double angle_to_power(double alpha_degrees);

/// Angle in degrees at victim_rx between the rays toward intended_tx and
/// interferer_tx, in [0, 180]. Throws Error(degenerate_geometry) if
/// victim_rx coincides with either other point.
double interference_angle(Position victim_rx, Position intended_tx, Position interferer_tx);

/// One uniform draw from [noise_min_db, noise_max_db].
double sample_noise(RandomStream& rng, const PropagationConfig& cfg);

}  // namespace mmroute
