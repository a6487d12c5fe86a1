#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mmroute/environment.hpp"
#include "mmroute/schedulers.hpp"
#include "mmroute/topology.hpp"

namespace mmroute {

/// A run-config file: topology, radio and demand parameters, seeds and the
/// evaluation plan. Schema in docs/config.md.
struct RunConfig {
  TopologySpec topology;
  EnvironmentConfig env;
  std::vector<SchedulerKind> schedulers{SchedulerKind::profitable};
  std::size_t episodes = 1;
  std::size_t eval_list_size = 1;

  /// Throws Error(config) for malformed configs and Error(spec) for a
  /// malformed topology file. A relative "topology" path resolves against
  /// `base_dir`.
  static RunConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
  static RunConfig load(const std::filesystem::path& path);

  /// Applies "topology=7"-style overrides to the seed block.
  void apply_seed_override(std::string_view assignment);

  /// Cross-field checks (episodes fit in the eval list, ladder usable, ...).
  void validate() const;
};

/// The immutable, shareable part of a run: topology, interference model and
/// the pre-generated evaluation episodes.
struct Scenario {
  std::shared_ptr<const Topology> topology;
  std::shared_ptr<const InterferenceModel> model;
  std::shared_ptr<const std::vector<EpisodeSpec>> eval_list;
  EnvironmentConfig env;

  static Scenario build(const RunConfig& cfg);
  Environment make_environment() const;
};

}  // namespace mmroute
