#include "mmroute/environment.hpp"

#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "mmroute/error.hpp"

namespace mmroute {

void DemandConfig::validate() const {
  require(flows_min >= 0 && flows_min <= flows_max, ErrorCode::config,
          "demand: need 0 <= flows_min <= flows_max");
  require(packets_min >= 1 && packets_min <= packets_max, ErrorCode::config,
          "demand: need 1 <= packets_min <= packets_max");
}

void EnvironmentConfig::validate() const {
  propagation.validate();
  demand.validate();
  require(std::isfinite(dt) && dt > 0.0, ErrorCode::config, "dt must be positive");
  require(std::isfinite(beta), ErrorCode::config, "beta must be finite");
  require(max_steps >= 0, ErrorCode::config, "max_steps must be non-negative");
}

EpisodeSpec generate_demand_random(const Topology& topology, const DemandConfig& cfg,
                                   RandomStream& rng,
                                   std::shared_ptr<const InterferenceModel> interference) {
  cfg.validate();
  const std::size_t n = topology.station_count();
  require(n >= 2, ErrorCode::topology, "demand generation needs at least two stations");

  EpisodeSpec spec;
  spec.interference = std::move(interference);
  spec.demand_matrix.assign(n, std::vector<std::int64_t>(n, 0));
  const std::int64_t flows = rng.uniform_int(cfg.flows_min, cfg.flows_max);
  for (std::int64_t k = 0; k < flows; ++k) {
    const std::size_t src = rng.index(n);
    std::size_t dst = rng.index(n - 1);
    if (dst >= src) ++dst;
    const std::int64_t packets = rng.uniform_int(cfg.packets_min, cfg.packets_max);
    spec.demand_matrix[src][dst] += packets;
    spec.total_packets += packets;
    spec.flows.push_back(
        {FlowBundle::along(static_cast<FlowId>(k),
                           topology.shortest_path(StationId{src}, StationId{dst}), packets),
         0});
  }
  return spec;
}

std::vector<EpisodeSpec> generate_eval_list(const Topology& topology, const EnvironmentConfig& cfg,
                                            std::size_t count,
                                            std::shared_ptr<const InterferenceModel> interference) {
  RandomStream rng(derive_seed(cfg.seeds.demand, {kEvalEpisodes}));
  std::vector<EpisodeSpec> list;
  list.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    list.push_back(generate_demand_random(topology, cfg.demand, rng, interference));
  }
  return list;
}

PowerAssignment convert_actions_to_edges(std::span<const double> actions, const PowerLadder& ladder,
                                         const Topology& topology) {
  require(actions.size() == topology.link_count(), ErrorCode::malformed_action,
          "action length " + std::to_string(actions.size()) + " does not match link count " +
              std::to_string(topology.link_count()));
  PowerAssignment out;
  out.levels.reserve(actions.size());
  for (std::size_t i = 0; i < actions.size(); ++i) {
    const double a = actions[i];
    require(a >= 0.0 && a <= 1.0, ErrorCode::malformed_action,
            "action entry " + std::to_string(i) + " is outside [0, 1]");
    out.levels.push_back(ladder.snap(a));
  }
  return out;
}

double reward(std::int64_t delivered, std::int64_t dropped, double beta) {
  return static_cast<double>(delivered) - beta * static_cast<double>(dropped);
}

Environment::Environment(std::shared_ptr<const Topology> topology,
                         std::shared_ptr<const InterferenceModel> model, EnvironmentConfig cfg,
                         std::shared_ptr<const std::vector<EpisodeSpec>> eval_list)
    : topology_(std::move(topology)),
      model_(std::move(model)),
      cfg_(std::move(cfg)),
      eval_list_(std::move(eval_list)),
      demand_rng_(derive_seed(cfg_.seeds.demand, {kTrainingEpisodes})) {
  require(topology_ && model_ && model_->size() == topology_->link_count(),
          ErrorCode::contract_violation, "environment: model does not match topology");
  cfg_.validate();
  stations_.reserve(topology_->station_count());
  for (std::size_t s = 0; s < topology_->station_count(); ++s) {
    stations_.emplace_back(*topology_, StationId{s});
  }
}

Observation Environment::reset() {
  EpisodeSpec spec = generate_demand_random(*topology_, cfg_.demand, demand_rng_, model_);
  return reset_with(spec, {kTrainingEpisodes, training_episodes_++});
}

Observation Environment::reset_custom(std::size_t index) {
  require(eval_list_ && index < eval_list_->size(), ErrorCode::not_found,
          "eval episode " + std::to_string(index) + " does not exist (list size " +
              std::to_string(eval_list_size()) + ")");
  return reset_with((*eval_list_)[index], {kEvalEpisodes, index});
}

Observation Environment::reset_with(const EpisodeSpec& spec, EpisodeKey key) {
  episode_ = spec;
  key_ = key;
  for (Station& s : stations_) s.initialize_out_queues();
  injected_.assign(episode_.flows.size(), false);
  next_bundle_id_ = episode_.flows.size();
  scheduler_rng_ = RandomStream(derive_seed(cfg_.seeds.scheduler, {key.namespace_tag, key.index}));
  step_count_ = 0;
  delivered_ = 0;
  dropped_ = 0;
  started_ = true;
  truncated_ = false;
  if (cfg_.inject_on_reset) dropped_ += inject_due_flows();
  refresh_noise();
  update_done();
  return get_state_observation();
}

std::int64_t Environment::inject_due_flows() {
  std::int64_t dropped = 0;
  for (std::size_t i = 0; i < episode_.flows.size(); ++i) {
    const FlowSeed& seed = episode_.flows[i];
    if (injected_[i] || seed.inject_step > step_count_) continue;
    injected_[i] = true;
    const std::int64_t admitted = stations_[seed.bundle.source.index()].add_flow(seed.bundle);
    dropped += seed.bundle.packet_count - admitted;
  }
  return dropped;
}

StepResult Environment::step(const PowerAssignment& assignment) {
  require(started_, ErrorCode::lifecycle, "step called before reset");
  require(!done_, ErrorCode::lifecycle, "step called after the episode finished");
  const std::size_t n = topology_->link_count();
  require(assignment.levels.size() == n, ErrorCode::contract_violation,
          "assignment length does not match link count");
  for (std::size_t level : assignment.levels) {
    require(level < cfg_.ladder.size(), ErrorCode::contract_violation,
            "assignment holds an index outside the power ladder");
  }

  StepResult result;
  StepInfo& info = result.info;
  info.requested = assignment;

  // Zero per-step counters, then activate subject to transceivers.
  for (Station& s : stations_) s.zero_bw();
  for (Station& s : stations_) {
    std::map<StationId, std::size_t> levels;
    for (const auto& [neighbor, _] : s.out_links()) {
      levels[neighbor] = assignment.levels[topology_->link_id(s.id(), neighbor).index()];
    }
    update_active_links(stations_, *topology_, s.id(), levels);
  }
  info.active.levels.assign(n, 0);
  for (const Link& l : topology_->links()) {
    info.active.levels[l.id.index()] = stations_[l.src.index()].buffer(l.dst).power();
  }

  const auto radio =
      adopt_interference(*topology_, *model_, info.active, cfg_.ladder, noise_, cfg_.dt);
  info.packets_this_step.resize(n);
  for (const Link& l : topology_->links()) {
    info.packets_this_step[l.id.index()] = radio[l.id.index()].packets_this_step;
    stations_[l.src.index()].buffer(l.dst).set_link_max_capacity(radio[l.id.index()].packets_this_step);
  }

  info.dropped += inject_due_flows();
  process_flows(info.delivered, info.dropped);

  delivered_ += info.delivered;
  dropped_ += info.dropped;
  ++step_count_;
  refresh_noise();
  update_done();

  info.delivered_total = delivered_;
  info.dropped_total = dropped_;
  info.buffered = buffered();
  info.pending = pending();
  info.remaining = remaining();
  info.step_count = step_count_;
  info.truncated = truncated_;
  result.reward = reward(info.delivered, info.dropped, cfg_.beta);
  result.done = done_;
  result.observation = get_state_observation();
  return result;
}

StepResult Environment::step_actions(std::span<const double> actions) {
  require(started_, ErrorCode::lifecycle, "step called before reset");
  require(!done_, ErrorCode::lifecycle, "step called after the episode finished");
  return step(convert_actions_to_edges(actions, cfg_.ladder, *topology_));
}

void Environment::process_flows(std::int64_t& delivered, std::int64_t& dropped) {
  // Drain every active link first so a bundle advances at most one hop per step.
  std::vector<FlowBundle> in_flight;
  for (const Link& l : topology_->links()) {
    Buffer& b = stations_[l.src.index()].buffer(l.dst);
    if (b.power() == 0) continue;
    while (b.remaining_bw() > 0 && b.total_flows() > 0) {
      FlowBundle moved = b.dequeue_head(b.remaining_bw(), next_bundle_id_);
      if (moved.id == next_bundle_id_) ++next_bundle_id_;
      in_flight.push_back(std::move(moved));
    }
  }
  for (FlowBundle& f : in_flight) {
    const std::int64_t arrived = packet_step(f);
    if (arrived > 0) {
      delivered += arrived;
      continue;
    }
    const std::int64_t offered = f.packet_count;
    dropped += offered - stations_[f.current_location.index()].add_flow(std::move(f));
  }
}

void Environment::refresh_noise() {
  noise_ = step_noise(cfg_.seeds.noise, key_, static_cast<std::uint64_t>(step_count_),
                      topology_->link_count(), cfg_.propagation);
}

void Environment::update_done() {
  const bool finished = remaining() == 0;
  const bool capped = step_count_ >= cfg_.step_cap(episode_.total_packets);
  done_ = finished || capped;
  truncated_ = !finished && capped;
}

Observation Environment::get_state_observation() const {
  Observation obs;
  obs.reserve(observation_size());
  for (const Station& s : stations_) {
    for (const BufferObservation& b : s.get_buffers_observations()) {
      obs.push_back(static_cast<double>(b.packets));
      obs.push_back(b.load);
      obs.push_back(static_cast<double>(b.dropped));
    }
  }
  return obs;
}

std::int64_t Environment::get_dropped_packets() const {
  std::int64_t total = 0;
  for (const Station& s : stations_) total += s.get_dropped_packets();
  return total;
}

std::int64_t Environment::buffered() const {
  std::int64_t total = 0;
  for (const Station& s : stations_) total += s.get_total_data();
  return total;
}

std::int64_t Environment::pending() const {
  std::int64_t total = 0;
  for (std::size_t i = 0; i < episode_.flows.size(); ++i) {
    if (!injected_[i]) total += episode_.flows[i].bundle.packet_count;
  }
  return total;
}

StepContext Environment::step_context() const {
  return StepContext{*topology_, *model_, cfg_.ladder, noise_, cfg_.dt};
}

}  // namespace mmroute
