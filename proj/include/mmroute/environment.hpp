#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "mmroute/flow.hpp"
#include "mmroute/interference.hpp"
#include "mmroute/schedulers.hpp"
#include "mmroute/station.hpp"
#include "mmroute/topology.hpp"

namespace mmroute {

struct DemandConfig {
  std::int64_t flows_min = 1;
  std::int64_t flows_max = 1;
  std::int64_t packets_min = 1;
  std::int64_t packets_max = 1;

  void validate() const;
};

struct Seeds {
  std::uint64_t topology = 0;
  std::uint64_t demand = 0;
  std::uint64_t scheduler = 0;
  std::uint64_t noise = 0;
};

struct EnvironmentConfig {
  PropagationConfig propagation;
  PowerLadder ladder{{0.0, 1.0}};
  double dt = 1.0;  // seconds per step
  DemandConfig demand;
  double beta = 1.0;            // drop penalty in the reward
  std::int64_t max_steps = 0;   // 0: 10 x total packets
  bool inject_on_reset = true;  // reset() returns the post-injection snapshot
  Seeds seeds;

  std::int64_t step_cap(std::int64_t total_packets) const {
    return max_steps > 0 ? max_steps : 10 * total_packets;
  }
  void validate() const;
};

struct FlowSeed {
  FlowBundle bundle;
  std::int64_t inject_step = 0;
};

/// Everything needed to replay one episode's demand.
struct EpisodeSpec {
  std::vector<std::vector<std::int64_t>> demand_matrix;  // [source][destination]
  std::int64_t total_packets = 0;
  std::vector<FlowSeed> flows;
  std::shared_ptr<const InterferenceModel> interference;
};

/// Draws the flow count, then per flow a uniform ordered (source, destination)
/// pair and a uniform packet count; routes each flow on its shortest path.
EpisodeSpec generate_demand_random(const Topology& topology, const DemandConfig& cfg,
                                   RandomStream& rng,
                                   std::shared_ptr<const InterferenceModel> interference);

/// The evaluation episodes shared by every scheduler in a run.
std::vector<EpisodeSpec> generate_eval_list(const Topology& topology, const EnvironmentConfig& cfg,
                                            std::size_t count,
                                            std::shared_ptr<const InterferenceModel> interference);

/// Snaps each action entry in [0, 1] to the nearest ladder level. Throws
/// Error(malformed_action) on a length mismatch or an out-of-range entry.
PowerAssignment convert_actions_to_edges(std::span<const double> actions, const PowerLadder& ladder,
                                         const Topology& topology);

double reward(std::int64_t delivered, std::int64_t dropped, double beta);

using Observation = std::vector<double>;

struct StepInfo {
  std::int64_t delivered = 0;  // this step
  std::int64_t dropped = 0;    // this step
  std::int64_t delivered_total = 0;
  std::int64_t dropped_total = 0;
  std::int64_t buffered = 0;
  std::int64_t pending = 0;  // flows not yet injected
  std::int64_t remaining = 0;
  std::int64_t step_count = 0;
  bool truncated = false;
  PowerAssignment requested;
  PowerAssignment active;  // after transceiver limits
  std::vector<std::int64_t> packets_this_step;
};

struct StepResult {
  Observation observation;
  double reward = 0.0;
  bool done = false;
  StepInfo info;
};

/// The episode machine. Strictly sequential: one reset, then steps until done.
class Environment {
 public:
  Environment(std::shared_ptr<const Topology> topology,
              std::shared_ptr<const InterferenceModel> model, EnvironmentConfig cfg,
              std::shared_ptr<const std::vector<EpisodeSpec>> eval_list = nullptr);

  /// Fresh random training episode.
  Observation reset();
  /// Replays eval episode `index`. Throws Error(not_found) when out of range.
  Observation reset_custom(std::size_t index);
  /// Starts `spec` under the given noise/scheduler stream key.
  Observation reset_with(const EpisodeSpec& spec, EpisodeKey key);

  /// Throws Error(lifecycle) before reset or after done.
  StepResult step(const PowerAssignment& assignment);
  StepResult step_actions(std::span<const double> actions);

  Observation get_state_observation() const;
  /// Drops recorded by all buffers since the start of the current step.
  std::int64_t get_dropped_packets() const;

  /// Inputs for choosing the next step's powers.
  StepContext step_context() const;
  RandomStream& scheduler_rng() { return scheduler_rng_; }

  const Topology& topology() const { return *topology_; }
  const InterferenceModel& model() const { return *model_; }
  const EnvironmentConfig& config() const { return cfg_; }
  const EpisodeSpec& episode() const { return episode_; }
  const std::vector<Station>& stations() const { return stations_; }
  std::size_t eval_list_size() const { return eval_list_ ? eval_list_->size() : 0; }
  std::size_t observation_size() const { return 3 * topology_->link_count(); }

  bool started() const { return started_; }
  bool done() const { return done_; }
  bool truncated() const { return truncated_; }
  std::int64_t step_count() const { return step_count_; }
  std::int64_t delivered() const { return delivered_; }
  std::int64_t dropped() const { return dropped_; }
  std::int64_t buffered() const;
  std::int64_t pending() const;
  std::int64_t remaining() const { return episode_.total_packets - delivered_ - dropped_; }
  std::int64_t total_packets() const { return episode_.total_packets; }

 private:
  std::int64_t inject_due_flows();
  void process_flows(std::int64_t& delivered, std::int64_t& dropped);
  void refresh_noise();
  void update_done();

  std::shared_ptr<const Topology> topology_;
  std::shared_ptr<const InterferenceModel> model_;
  EnvironmentConfig cfg_;
  std::shared_ptr<const std::vector<EpisodeSpec>> eval_list_;

  std::vector<Station> stations_;
  EpisodeSpec episode_;
  std::vector<bool> injected_;
  EpisodeKey key_;
  std::vector<double> noise_;  // draws for the upcoming step
  RandomStream demand_rng_;
  RandomStream scheduler_rng_;
  std::uint64_t training_episodes_ = 0;
  FlowId next_bundle_id_ = 0;

  bool started_ = false;
  bool done_ = false;
  bool truncated_ = false;
  std::int64_t step_count_ = 0;
  std::int64_t delivered_ = 0;
  std::int64_t dropped_ = 0;
};

inline constexpr std::uint64_t kEvalEpisodes = 0;
inline constexpr std::uint64_t kTrainingEpisodes = 1;

}  // namespace mmroute
