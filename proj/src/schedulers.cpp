#include "mmroute/schedulers.hpp"

#include <numeric>

#include "mmroute/error.hpp"

namespace mmroute {

namespace {

double decided_interference(const StepContext& ctx, LinkId victim,
                            std::span<const DecidedLink> decided) {
  double sum = 0.0;
  for (const DecidedLink& d : decided) {
    if (d.link == victim) continue;
    sum += interference_term(ctx.model, victim, d.link, ctx.ladder.power(d.level),
                             ctx.noise[d.link.index()]);
  }
  return sum;
}

}  // namespace

ProfitBreakdown profit(const StepContext& ctx, LinkId candidate, std::size_t level,
                       std::span<const DecidedLink> decided) {
  require(level > 0 && level < ctx.ladder.size(), ErrorCode::contract_violation,
          "profit: power level must be a nonzero ladder index");
  const double power = ctx.ladder.power(level);
  const double own_noise = ctx.noise[candidate.index()];

  ProfitBreakdown out;
  const double p_rx = received_power(ctx.model, candidate, power, own_noise);
  const double p_eff = p_rx - decided_interference(ctx, candidate, decided);
  const double nominal = ctx.topology.link(candidate).nominal_capacity;
  out.c_plus = static_cast<double>(packets_per_step(link_capacity(p_rx, p_eff, nominal), ctx.dt));

  for (const DecidedLink& d : decided) {
    const double d_rx = received_power(ctx.model, d.link, ctx.ladder.power(d.level),
                                       ctx.noise[d.link.index()]);
    if (!(d_rx > 0.0)) continue;
    const double old_eff = d_rx - decided_interference(ctx, d.link, decided);
    const double new_eff = old_eff - interference_term(ctx.model, d.link, candidate, power, own_noise);
    out.c_minus +=
        (old_eff - new_eff) * ctx.topology.link(d.link).nominal_capacity / d_rx * ctx.dt;
  }
  out.profit = out.c_plus - out.c_minus;
  return out;
}

PowerAssignment profitable_schedule(const StepContext& ctx, RandomStream& rng,
                                    ProfitableTrace* trace) {
  const std::size_t n = ctx.topology.link_count();
  PowerAssignment result{std::vector<std::size_t>(n, 0)};

  std::vector<LinkId> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = LinkId{i};
  rng.shuffle(std::span(order));

  std::vector<int> spare(ctx.topology.station_count());
  for (std::size_t s = 0; s < spare.size(); ++s) {
    spare[s] = ctx.topology.station(StationId{s}).max_transceivers;
  }

  std::vector<DecidedLink> decided;
  if (trace) {
    *trace = {};
    trace->order = order;
  }
  for (LinkId l : order) {
    const Link& link = ctx.topology.link(l);
    std::optional<ProfitBreakdown> best;
    std::size_t best_level = 0;
    if (spare[link.src.index()] > 0 && spare[link.dst.index()] > 0) {
      for (std::size_t level = 1; level < ctx.ladder.size(); ++level) {
        ProfitBreakdown b = profit(ctx, l, level, decided);
        if (!best || b.profit > best->profit) {
          best = b;
          best_level = level;
        }
      }
    }
    if (trace) trace->best.push_back(best);
    if (best && best->profit > 0.0) {
      decided.push_back({l, best_level});
      result.levels[l.index()] = best_level;
      --spare[link.src.index()];
      --spare[link.dst.index()];
    }
  }
  if (trace) trace->decided = decided;
  return result;
}

PowerAssignment random_schedule(const Topology& topology, const PowerLadder& ladder,
                                RandomStream& rng) {
  PowerAssignment out{std::vector<std::size_t>(topology.link_count(), 0)};
  for (auto& level : out.levels) level = rng.index(ladder.size());
  return out;
}

PowerAssignment full_power_schedule(const Topology& topology, const PowerLadder& ladder) {
  return PowerAssignment{std::vector<std::size_t>(topology.link_count(), ladder.top_index())};
}

std::optional<SchedulerKind> parse_scheduler_kind(std::string_view name) {
  if (name == "profitable") return SchedulerKind::profitable;
  if (name == "random") return SchedulerKind::random;
  if (name == "full-power") return SchedulerKind::full_power;
  if (name == "external") return SchedulerKind::external;
  return std::nullopt;
}

std::string_view to_string(SchedulerKind kind) {
  switch (kind) {
    case SchedulerKind::profitable: return "profitable";
    case SchedulerKind::random: return "random";
    case SchedulerKind::full_power: return "full-power";
    case SchedulerKind::external: return "external";
  }
  return "unknown";
}

PowerAssignment ProfitableScheduler::schedule(const StepContext& ctx, RandomStream& rng) {
  return profitable_schedule(ctx, rng, &last_);
}

PowerAssignment RandomScheduler::schedule(const StepContext& ctx, RandomStream& rng) {
  return random_schedule(ctx.topology, ctx.ladder, rng);
}

FullPowerScheduler::FullPowerScheduler(const PowerLadder& ladder) {
  require(ladder.size() > 1, ErrorCode::config,
          "full-power scheduler needs a power ladder with a level above off");
}

PowerAssignment FullPowerScheduler::schedule(const StepContext& ctx, RandomStream&) {
  return full_power_schedule(ctx.topology, ctx.ladder);
}

std::unique_ptr<Scheduler> make_scheduler(SchedulerKind kind, const PowerLadder& ladder) {
  switch (kind) {
    case SchedulerKind::profitable: return std::make_unique<ProfitableScheduler>();
    case SchedulerKind::random: return std::make_unique<RandomScheduler>();
    case SchedulerKind::full_power: return std::make_unique<FullPowerScheduler>(ladder);
    case SchedulerKind::external: break;
  }
  fail(ErrorCode::config, "the external scheduler takes its assignments from an agent over the bridge");
}

}  // namespace mmroute
