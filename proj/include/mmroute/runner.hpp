#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include <json.hpp>

#include "mmroute/config.hpp"

namespace mmroute {

struct EpisodeReport {
  std::size_t episode_index = 0;
  SchedulerKind scheduler = SchedulerKind::profitable;
  std::int64_t steps = 0;
  std::int64_t delivered = 0;
  std::int64_t dropped = 0;
  std::int64_t total_packets = 0;
  bool truncated = false;
  double wall_time_s = 0.0;
};

struct TraceStep {
  std::int64_t step = 0;
  PowerAssignment assignment;
  std::vector<std::int64_t> packets_this_step;
  std::int64_t delivered = 0;
  std::int64_t dropped = 0;
  std::vector<std::uint32_t> order;  // Profitable's visit order; empty otherwise
};

struct EpisodeTrace {
  std::size_t episode_index = 0;
  SchedulerKind scheduler = SchedulerKind::profitable;
  std::int64_t total_packets = 0;
  std::size_t link_count = 0;
  std::vector<TraceStep> steps;
};

/// Replays eval episode `index` under `kind` until done.
EpisodeReport run_episode(const Scenario& scenario, SchedulerKind kind, std::size_t index,
                          EpisodeTrace* trace = nullptr);

/// Feeds a recorded trace's assignments back through a fresh environment.
EpisodeReport replay_trace(const Scenario& scenario, const EpisodeTrace& trace);

/// JSON-lines: one header line, then one line per step.
void emit_trace(const EpisodeTrace& trace, const std::filesystem::path& path);
EpisodeTrace read_trace(const std::filesystem::path& path);

void write_csv(std::ostream& out, const std::vector<EpisodeReport>& rows);
nlohmann::json summarize(const std::vector<EpisodeReport>& rows);

struct BatchOptions {
  std::filesystem::path out_dir = ".";
  std::optional<std::filesystem::path> trace_dir;
  unsigned jobs = 1;
};

struct BatchReport {
  std::vector<EpisodeReport> rows;  // scheduler-major, then episode index
  nlohmann::json summary;
};

/// Runs every configured scheduler over the first `episodes` eval episodes and
/// writes episodes.csv and summary.json into out_dir. Throws Error(io) when an
/// output cannot be written.
BatchReport run_batch(const RunConfig& cfg, const BatchOptions& options);

}  // namespace mmroute
