// Acceptance suite: one PASS/FAIL line per criterion, each under a wall-clock limit.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "mmroute/bridge.hpp"
#include "mmroute/runner.hpp"
#include "mmroute/transport.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace mmroute;

namespace {

const fs::path kConfigs = MMROUTE_CONFIG_DIR;

// Empty string on success, otherwise the first failure.
using Check = std::function<std::string()>;

struct Criterion {
  std::string name;
  double limit_s;
  Check check;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// --- interference math -------------------------------------------------------

std::string interference_math() {
  for (int a = 0; a <= 180; ++a) {
    const double alpha = a;
    const double expected = alpha <= 90.0 ? 1.0 - alpha / 90.0 : 0.0;
    if (angle_to_power(alpha) != expected) return fmt("angle_to_power(%d) mismatch", a);
  }
  const PropagationConfig cfg;
  for (double d : {1.0, 7.5, 100.0, 333.3, 2500.0}) {
    const double step = fsl(2 * d, 60e9, cfg) - fsl(d, 60e9, cfg);
    if (std::abs(step - 20 * std::log10(2.0)) >= 1e-9) return fmt("fsl doubling off at d=%g", d);
  }
  const Topology t = Topology(
      {{"A", {0, 0}, 1}, {"B", {100, 0}, 1}},
      {{LinkId{0}, StationId{0}, StationId{1}, 1.0, 7.0, 10}, {LinkId{1}, StationId{1}, StationId{0}, 1.0, 7.0, 10}});
  const auto model = build_interference_model(t, cfg);
  const PowerLadder ladder({0.0, 110.0, 150.0});
  for (std::size_t level : {1u, 2u}) {
    const auto s = adopt_interference(t, model, {{level, 0}}, ladder, std::vector<double>{0.5, 0.5}, 1.0);
    if (s[0].capacity != 7.0) return fmt("zero-interference capacity %.17g", s[0].capacity);
  }
  return {};
}

// --- matrix vs direct --------------------------------------------------------

std::string matrix_vs_direct() {
  std::mt19937_64 gen(0x5eed);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    PropagationConfig cfg;
    cfg.noise_max_db = 3.0;
    if (trial % 4 == 3) cfg.power_domain = PowerDomain::verbatim_linear;
    RandomStream rng(trial);
    const Topology t = generate_topology(oracle::random_small_spec(gen, 2 + trial % 4), rng);
    const auto model = build_interference_model(t, cfg);
    const PowerLadder ladder({0.0, 95.0, 110.0, 120.0, 135.0});
    PowerAssignment assign;
    std::vector<double> powers;
    for (std::size_t l = 0; l < t.link_count(); ++l) {
      assign.levels.push_back(rng.index(ladder.size()));
      powers.push_back(ladder.power(assign.levels.back()));
    }
    const auto noise = step_noise(trial, {0, 0}, 0, t.link_count(), cfg);
    const auto s = adopt_interference(t, model, assign, ladder, noise, 1.0);
    const auto d = oracle::direct_radio(t, cfg, powers, noise);
    for (std::size_t l = 0; l < t.link_count(); ++l) worst = std::max(worst, std::abs(s[l].capacity - d[l].capacity));
  }
  if (worst >= 1e-9) return fmt("max deviation %.3g", worst);
  return {};
}

// --- profitable oracle -------------------------------------------------------

std::string profitable_oracle() {
  std::mt19937_64 gen(0xbead);
  std::size_t accepted = 0;
  for (int trial = 0; trial < 100; ++trial) {
    PropagationConfig cfg;
    cfg.noise_max_db = 2.0;
    RandomStream trng(trial);
    const Topology t =
        generate_topology(oracle::random_small_spec(gen, 2 + trial % 2, 1 + trial % 3), trng);
    const auto model = build_interference_model(t, cfg);
    std::vector<double> levels{0.0, 105.0, 115.0, 125.0};
    levels.resize(2 + trial % 3);
    const PowerLadder ladder(levels);
    const auto noise = step_noise(trial, {0, 0}, 0, t.link_count(), cfg);
    const StepContext ctx{t, model, ladder, noise, 1.0};
    RandomStream rng(derive_seed(trial, {7}));
    ProfitableTrace trace;
    const auto assign = profitable_schedule(ctx, rng, &trace);
    std::vector<oracle::OracleDecision> decisions;
    const auto expected = oracle::profitable_replay(t, cfg, levels, noise, 1.0, trace.order, &decisions);
    if (assign.levels != expected) return fmt("assignment differs on fixture %d", trial);
    for (const auto& d : decisions) {
      if (!(d.profit > 0.0)) return fmt("non-positive accepted profit on fixture %d", trial);
    }
    accepted += decisions.size();
  }
  if (accepted == 0) return "no link was ever accepted";
  return {};
}

// --- conservation ------------------------------------------------------------

std::string conservation() {
  RunConfig cfg = RunConfig::load(kConfigs / "mesh6.json");
  cfg.eval_list_size = 50;
  const Scenario sc = Scenario::build(cfg);
  std::int64_t drops = 0;
  for (SchedulerKind kind : {SchedulerKind::profitable, SchedulerKind::random, SchedulerKind::full_power}) {
    auto sched = make_scheduler(kind, sc.env.ladder);
    Environment env = sc.make_environment();
    for (std::size_t ep = 0; ep < 50; ++ep) {
      env.reset_custom(ep);
      auto holds = [&] {
        return env.pending() == 0 && env.delivered() + env.dropped() + env.buffered() == env.total_packets();
      };
      if (!holds()) return fmt("%s episode %zu violates at reset", std::string(to_string(kind)).c_str(), ep);
      while (!env.done()) {
        env.step(sched->schedule(env.step_context(), env.scheduler_rng()));
        if (!holds()) {
          return fmt("%s episode %zu violates at step %lld", std::string(to_string(kind)).c_str(), ep,
                     static_cast<long long>(env.step_count()));
        }
      }
      drops += env.dropped();
    }
  }
  if (drops == 0) return "fixture never dropped; the drop path went unexercised";
  return {};
}

// --- termination and throughput ----------------------------------------------

std::string termination_throughput() {
  const Scenario sc = Scenario::build(RunConfig::load(kConfigs / "line4.json"));
  const Topology& t = *sc.topology;
  FullPowerScheduler full(sc.env.ladder);

  // Hand-computed pipeline: one flow end to end of the line.
  const StationId a = t.station_id("A"), d = t.station_id("D");
  const Path path = t.shortest_path(a, d);
  const std::int64_t hops = static_cast<std::int64_t>(path.size()) - 1;
  const std::int64_t n = packets_per_step(t.link(t.link_id(path[0], path[1])).nominal_capacity, sc.env.dt);
  for (std::int64_t total : {1, 4, 5, 6, 23, 40}) {
    EpisodeSpec spec;
    spec.demand_matrix.assign(t.station_count(), std::vector<std::int64_t>(t.station_count(), 0));
    spec.demand_matrix[a.index()][d.index()] = total;
    spec.total_packets = total;
    spec.flows.push_back({FlowBundle::along(0, path, total), 0});
    spec.interference = sc.model;
    Environment env = sc.make_environment();
    env.reset_with(spec, {kEvalEpisodes, 1000});
    while (!env.done()) env.step(full.schedule(env.step_context(), env.scheduler_rng()));
    const std::int64_t bound = hops + (total + n - 1) / n - 1;
    if (env.delivered() != total) return fmt("full-power delivered %lld of %lld", (long long)env.delivered(), (long long)total);
    if (env.step_count() != bound) {
      return fmt("total %lld took %lld steps, expected %lld", (long long)total, (long long)env.step_count(), (long long)bound);
    }
  }

  double prof = 0, rand = 0;
  for (std::size_t ep = 0; ep < 50; ++ep) {
    const auto f = run_episode(sc, SchedulerKind::full_power, ep);
    if (f.delivered != f.total_packets) return fmt("full-power short on eval episode %zu", ep);
    prof += static_cast<double>(run_episode(sc, SchedulerKind::profitable, ep).delivered);
    rand += static_cast<double>(run_episode(sc, SchedulerKind::random, ep).delivered);
  }
  if (prof < rand) return fmt("profitable mean %.3f < random mean %.3f", prof / 50, rand / 50);
  return {};
}

// --- determinism -------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string determinism() {
  const fs::path root = fs::temp_directory_path() / "mmroute_acceptance_determinism";
  fs::remove_all(root);
  RunConfig cfg = RunConfig::load(kConfigs / "mesh6.json");
  run_batch(cfg, {root / "a", root / "a" / "traces", 1});
  run_batch(cfg, {root / "b", root / "b" / "traces", 4});
  if (slurp(root / "a" / "episodes.csv") != slurp(root / "b" / "episodes.csv")) return "episodes.csv differs";
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(root / "a" / "traces")) {
    const fs::path other = root / "b" / "traces" / e.path().filename();
    if (!fs::exists(other) || slurp(e.path()) != slurp(other)) return "trace differs: " + e.path().filename().string();
    ++files;
  }
  if (files != cfg.episodes * cfg.schedulers.size()) return fmt("expected %zu traces, found %zu", cfg.episodes * cfg.schedulers.size(), files);
  fs::remove_all(root);
  return {};
}

// --- bridge equivalence ------------------------------------------------------

std::string bridge_equivalence() {
  const Scenario sc = Scenario::build(RunConfig::load(kConfigs / "mesh6.json"));
  std::promise<std::uint16_t> bound;
  auto port = bound.get_future();
  std::jthread server([&] {
    bridge::serve_tcp(sc, "127.0.0.1", 0, 1, [&](std::uint16_t p) { bound.set_value(p); });
  });
  auto client = bridge::BridgeClient::connect("127.0.0.1", port.get());
  Environment env = sc.make_environment();
  std::mt19937_64 gen(42);
  const std::size_t links = sc.topology->link_count();
  const std::size_t levels = sc.env.ladder.size();
  std::string failure;
  auto call = [&](const nlohmann::json& m) { return nlohmann::json::parse(client.request(m.dump())); };

  call({{"kind", "hello"}, {"payload", {{"protocol_version", bridge::kProtocolVersion}}}});
  for (std::size_t ep = 0; ep < 5 && failure.empty(); ++ep) {
    const auto o = call({{"kind", "reset_custom"}, {"payload", {{"episode_index", ep}}}});
    if (o["payload"]["observation"].get<Observation>() != env.reset_custom(ep)) failure = fmt("reset %zu differs", ep);
    std::int64_t delivered_wire = 0, dropped_wire = 0;
    double reward_wire = 0, reward_direct = 0;
    while (failure.empty() && !env.done()) {
      std::vector<double> action(links);
      for (double& x : action) x = sc.env.ladder.normalized(gen() % levels);
      const auto r = call({{"kind", "step"}, {"payload", {{"action", action}}}});
      const StepResult s = env.step_actions(action);
      const auto& p = r["payload"];
      if (p["observation"].get<Observation>() != s.observation || p["reward"].get<double>() != s.reward ||
          p["done"].get<bool>() != s.done || p["info"]["delivered_step"] != s.info.delivered ||
          p["info"]["dropped_step"] != s.info.dropped) {
        failure = fmt("episode %zu step %lld differs", ep, (long long)s.info.step_count);
      }
      delivered_wire = p["info"]["delivered"];
      dropped_wire = p["info"]["dropped"];
      reward_wire += p["reward"].get<double>();
      reward_direct += s.reward;
    }
    if (failure.empty() && (delivered_wire != env.delivered() || dropped_wire != env.dropped() ||
                            reward_wire != reward_direct)) {
      failure = fmt("episode %zu totals differ", ep);
    }
  }
  call({{"kind", "close"}});
  return failure;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"interference-math", 1.0, interference_math},
      {"matrix-vs-direct", 10.0, matrix_vs_direct},
      {"profitable-oracle", 30.0, profitable_oracle},
      {"conservation", 60.0, conservation},
      {"termination-throughput", 60.0, termination_throughput},
      {"determinism", 60.0, determinism},
      {"bridge-equivalence", 60.0, bridge_equivalence},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    try {
      detail = c.check();
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (detail.empty() && secs >= c.limit_s) detail = fmt("took %.2fs, limit %.0fs", secs, c.limit_s);
    if (detail.empty()) {
      std::printf("PASS %-24s %.3fs\n", c.name.c_str(), secs);
    } else {
      std::printf("FAIL %-24s %.3fs  %s\n", c.name.c_str(), secs, detail.c_str());
      ++failed;
    }
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
