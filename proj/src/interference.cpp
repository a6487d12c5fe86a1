#include "mmroute/interference.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mmroute/error.hpp"

namespace mmroute {

PowerLadder::PowerLadder(std::vector<double> levels) : levels_(std::move(levels)) {
  require(!levels_.empty() && levels_.front() == 0.0, ErrorCode::config,
          "power ladder must start with 0 (off)");
  for (std::size_t i = 1; i < levels_.size(); ++i) {
    require(std::isfinite(levels_[i]) && levels_[i] > levels_[i - 1], ErrorCode::config,
            "power ladder must be strictly increasing");
  }
}

double PowerLadder::normalized(std::size_t index) const {
  if (levels_.size() == 1) return 0.0;
  return levels_.at(index) / levels_.back();
}

std::size_t PowerLadder::snap(double value) const {
  std::size_t best = 0;
  double best_gap = std::abs(value - normalized(0));
  for (std::size_t i = 1; i < levels_.size(); ++i) {
    const double gap = std::abs(value - normalized(i));
    if (gap < best_gap) {
      best = i;
      best_gap = gap;
    }
  }
  return best;
}

InterferenceModel::InterferenceModel(std::size_t link_count, std::vector<CouplingEntry> entries,
                                     std::vector<double> own_path_loss)
    : link_count_(link_count),
      entries_(std::move(entries)),
      own_path_loss_(std::move(own_path_loss)) {
  require(entries_.size() == link_count_ * link_count_ && own_path_loss_.size() == link_count_,
          ErrorCode::contract_violation, "interference model: inconsistent dimensions");
}

InterferenceModel build_interference_model(const Topology& topology, const PropagationConfig& cfg) {
  cfg.validate();
  const std::size_t n = topology.link_count();
  const double f = cfg.carrier_frequency_hz;
  std::vector<double> own(n);
  for (const Link& l : topology.links()) {
    const double d = distance(topology.position(l.src), topology.position(l.dst));
    require(d > 0.0, ErrorCode::degenerate_geometry,
            "stations '" + topology.station(l.src).name + "' and '" +
                topology.station(l.dst).name + "' are colocated");
    own[l.id.index()] = fsl(d, f, cfg);
  }

  std::vector<CouplingEntry> entries(n * n);
  for (const Link& victim : topology.links()) {
    const Position rx = topology.position(victim.dst);
    const Position tx = topology.position(victim.src);
    for (const Link& interferer : topology.links()) {
      if (interferer.id == victim.id) continue;
      if (interferer.src == victim.src || interferer.src == victim.dst) continue;
      const Position itx = topology.position(interferer.src);
      CouplingEntry& e = entries[victim.id.index() * n + interferer.id.index()];
      e.distance = distance(itx, rx);
      require(e.distance > 0.0, ErrorCode::degenerate_geometry,
              "stations '" + topology.station(interferer.src).name + "' and '" +
                  topology.station(victim.dst).name + "' are colocated");
      e.coupling = angle_to_power(interference_angle(rx, tx, itx));
      e.path_loss = fsl(e.distance, f, cfg);
    }
  }
  return InterferenceModel(n, std::move(entries), std::move(own));
}

double received_power(const InterferenceModel& model, LinkId l, double tx_power, double noise) {
  return tx_power - model.own_path_loss(l) - noise;
}

double received_power(const InterferenceModel& model, LinkId l, double tx_power, RandomStream& rng,
                      const PropagationConfig& cfg) {
  return received_power(model, l, tx_power, sample_noise(rng, cfg));
}

double interference_term(const InterferenceModel& model, LinkId victim, LinkId interferer,
                         double p_interferer, double noise) {
  if (victim == interferer) return 0.0;
  const CouplingEntry& e = model.at(victim, interferer);
  if (e.coupling == 0.0) return 0.0;
  return e.coupling * std::max(0.0, p_interferer - e.path_loss - noise);
}

double interference_term(const InterferenceModel& model, LinkId victim, LinkId interferer,
                         double p_interferer, RandomStream& rng, const PropagationConfig& cfg) {
  return interference_term(model, victim, interferer, p_interferer, sample_noise(rng, cfg));
}

double link_capacity(double p_received, double p_effective, double nominal_capacity) {
  if (!(p_received > 0.0)) return 0.0;
  return std::clamp(p_effective / p_received, 0.0, 1.0) * nominal_capacity;
}

std::int64_t packets_per_step(double capacity, double dt) {
  return static_cast<std::int64_t>(std::floor(capacity * dt));
}

std::vector<LinkRadioState> adopt_interference(const Topology& topology,
                                               const InterferenceModel& model,
                                               const PowerAssignment& assignment,
                                               const PowerLadder& ladder,
                                               std::span<const double> noise, double dt) {
  const std::size_t n = topology.link_count();
  require(assignment.levels.size() == n && noise.size() == n && model.size() == n,
          ErrorCode::contract_violation, "adopt_interference: vector length mismatch");
  std::vector<LinkRadioState> state(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (assignment.levels[v] == 0) continue;
    const LinkId victim{v};
    LinkRadioState& s = state[v];
    s.p_received = received_power(model, victim, ladder.power(assignment.levels[v]), noise[v]);
    double interference = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == v || assignment.levels[i] == 0) continue;
      interference += interference_term(model, victim, LinkId{i},
                                        ladder.power(assignment.levels[i]), noise[i]);
    }
    s.p_effective = s.p_received - interference;
    s.capacity = link_capacity(s.p_received, s.p_effective, topology.link(victim).nominal_capacity);
    s.packets_this_step = packets_per_step(s.capacity, dt);
  }
  return state;
}

std::vector<double> step_noise(std::uint64_t noise_seed, EpisodeKey episode, std::uint64_t step,
                               std::size_t link_count, const PropagationConfig& cfg) {
  std::vector<double> out(link_count);
  for (std::size_t l = 0; l < link_count; ++l) {
    RandomStream rng(derive_seed(noise_seed, {episode.namespace_tag, episode.index, step, l}));
    out[l] = sample_noise(rng, cfg);
  }
  return out;
}

}  // namespace mmroute
