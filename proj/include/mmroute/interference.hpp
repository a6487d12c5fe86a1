#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mmroute/ids.hpp"
#include "mmroute/propagation.hpp"
#include "mmroute/rng.hpp"
#include "mmroute/topology.hpp"

namespace mmroute {

/// Ordered transmit powers; index 0 means the link is off.
class PowerLadder {
 public:
  /// Requires levels[0] == 0, strictly increasing, finite. Throws Error(config).
  explicit PowerLadder(std::vector<double> levels);

  std::size_t size() const { return levels_.size(); }
  std::size_t top_index() const { return levels_.size() - 1; }
  double power(std::size_t index) const { return levels_.at(index); }
  const std::vector<double>& levels() const { return levels_; }

  /// Level scaled into [0, 1] by the top power; this is the action space.
  double normalized(std::size_t index) const;

  /// Index of the normalized level nearest to `value`, ties toward the lower.
  std::size_t snap(double value) const;

 private:
  std::vector<double> levels_;
};

/// One ladder index per link, indexed by link id.
struct PowerAssignment {
  std::vector<std::size_t> levels;

  friend bool operator==(const PowerAssignment&, const PowerAssignment&) = default;
};

/// Geometric coupling of interferer l' onto victim l.
struct CouplingEntry {
  double coupling = 0.0;   // AngleToPower of the arrival angle, in [0, 1]
  double distance = 0.0;   // interferer transmitter to victim receiver
  double path_loss = 0.0;  // FSL over `distance`
};

/// L x L interference structure, precomputed once per topology.
class InterferenceModel {
 public:
  InterferenceModel(std::size_t link_count, std::vector<CouplingEntry> entries,
                    std::vector<double> own_path_loss);

  std::size_t size() const { return link_count_; }
  const CouplingEntry& at(LinkId victim, LinkId interferer) const {
    return entries_[victim.index() * link_count_ + interferer.index()];
  }
  double own_path_loss(LinkId l) const { return own_path_loss_[l.index()]; }

 private:
  std::size_t link_count_;
  std::vector<CouplingEntry> entries_;
  std::vector<double> own_path_loss_;
};

/// Victim l = Si -> Sj, interferer l' = Sk -> Sn: stores
/// AngleToPower(angle at Sj between Si and Sk) and FSL(|Sk Sj|). Pairs sharing
/// a transmitter, or whose interferer transmits from Sj, get coupling 0.
/// Throws Error(degenerate_geometry) when distinct stations coincide where
/// links meet.
InterferenceModel build_interference_model(const Topology& topology, const PropagationConfig& cfg);

struct LinkRadioState {
  double p_received = 0.0;
  double p_effective = 0.0;
  double capacity = 0.0;  // packets per second
  std::int64_t packets_this_step = 0;
};

/// P - FSL(link) - eta.
double received_power(const InterferenceModel& model, LinkId l, double tx_power, double noise);
double received_power(const InterferenceModel& model, LinkId l, double tx_power, RandomStream& rng,
                      const PropagationConfig& cfg);

/// coupling * max(0, P' - FSL(Sk, Sj) - eta').
double interference_term(const InterferenceModel& model, LinkId victim, LinkId interferer,
                         double p_interferer, double noise);
double interference_term(const InterferenceModel& model, LinkId victim, LinkId interferer,
                         double p_interferer, RandomStream& rng, const PropagationConfig& cfg);

/// Capacity from received and effective power: clamp(eff / rx, 0, 1) * nominal,
/// zero when rx <= 0.
double link_capacity(double p_received, double p_effective, double nominal_capacity);

/// packets per step = floor(capacity * dt).
std::int64_t packets_per_step(double capacity, double dt);

/// Per-link radio state for one step. `noise` holds one draw per link, used
/// for the link both as receiver and as interferer.
std::vector<LinkRadioState> adopt_interference(const Topology& topology,
                                               const InterferenceModel& model,
                                               const PowerAssignment& assignment,
                                               const PowerLadder& ladder,
                                               std::span<const double> noise, double dt);

/// Identifies an episode for noise and scheduler streams.
struct EpisodeKey {
  std::uint64_t namespace_tag = 0;  // eval vs. training episodes
  std::uint64_t index = 0;
};

/// One draw per link for (episode, step); independent of evaluation order.
std::vector<double> step_noise(std::uint64_t noise_seed, EpisodeKey episode, std::uint64_t step,
                               std::size_t link_count, const PropagationConfig& cfg);

}  // namespace mmroute
