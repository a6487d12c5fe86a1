#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mmroute/interference.hpp"
#include "mmroute/topology.hpp"

namespace mmroute {

/// Everything a scheduler may look at when choosing powers for one step.
struct StepContext {
  const Topology& topology;
  const InterferenceModel& model;
  const PowerLadder& ladder;
  std::span<const double> noise;  // this step's per-link draws
  double dt = 1.0;
};

struct ProfitBreakdown {
  double c_plus = 0.0;   // packets l would carry this step
  double c_minus = 0.0;  // packets lost on already-decided links
  double profit = 0.0;   // c_plus - c_minus
};

struct DecidedLink {
  LinkId link;
  std::size_t level = 0;
};

/// Profit of adding `candidate` at ladder index `level` to the decided set.
ProfitBreakdown profit(const StepContext& ctx, LinkId candidate, std::size_t level,
                       std::span<const DecidedLink> decided);

/// Decision record of one Profitable pass.
struct ProfitableTrace {
  std::vector<LinkId> order;                       // visit order
  std::vector<std::optional<ProfitBreakdown>> best;  // per visit; nullopt if no power was eligible
  std::vector<DecidedLink> decided;                // in decision order
};

/// Greedy single pass over the links in a random order: each link joins the
/// decided set at its best-profit power when that profit is strictly positive
/// (ties go to the lower power), and is left off otherwise. A link is only
/// considered while both endpoints have a spare transceiver.
PowerAssignment profitable_schedule(const StepContext& ctx, RandomStream& rng,
                                    ProfitableTrace* trace = nullptr);

PowerAssignment random_schedule(const Topology& topology, const PowerLadder& ladder,
                                RandomStream& rng);

PowerAssignment full_power_schedule(const Topology& topology, const PowerLadder& ladder);

enum class SchedulerKind { profitable, random, full_power, external };

std::optional<SchedulerKind> parse_scheduler_kind(std::string_view name);
std::string_view to_string(SchedulerKind kind);

class Scheduler {
 public:
  virtual ~Scheduler() = default;
  virtual SchedulerKind kind() const = 0;
  virtual PowerAssignment schedule(const StepContext& ctx, RandomStream& rng) = 0;
};

class ProfitableScheduler final : public Scheduler {
 public:
  SchedulerKind kind() const override { return SchedulerKind::profitable; }
  PowerAssignment schedule(const StepContext& ctx, RandomStream& rng) override;
  const ProfitableTrace& last_trace() const { return last_; }

 private:
  ProfitableTrace last_;
};

class RandomScheduler final : public Scheduler {
 public:
  SchedulerKind kind() const override { return SchedulerKind::random; }
  PowerAssignment schedule(const StepContext& ctx, RandomStream& rng) override;
};

class FullPowerScheduler final : public Scheduler {
 public:
  /// Throws Error(config) if the ladder has no level above off.
  explicit FullPowerScheduler(const PowerLadder& ladder);
  SchedulerKind kind() const override { return SchedulerKind::full_power; }
  PowerAssignment schedule(const StepContext& ctx, RandomStream& rng) override;
};

/// Throws Error(config) for `external`, whose assignments come from an agent.
std::unique_ptr<Scheduler> make_scheduler(SchedulerKind kind, const PowerLadder& ladder);

}  // namespace mmroute
