#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mmroute/error.hpp"
#include "mmroute/runner.hpp"

namespace fs = std::filesystem;

namespace mmroute {
namespace {

const fs::path kConfigs = MMROUTE_CONFIG_DIR;
const fs::path kData = MMROUTE_TEST_DATA;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("mmroute_runner_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::io;  // sentinel: callers never expect io here
}

// --- config ------------------------------------------------------------------

TEST(RunConfig, LoadsShippedConfigs) {
  const RunConfig cfg = RunConfig::load(kConfigs / "line4.json");
  EXPECT_EQ(cfg.topology.stations.size(), 4u);
  EXPECT_EQ(cfg.env.ladder.size(), 3u);
  EXPECT_EQ(cfg.schedulers.size(), 3u);
  EXPECT_EQ(cfg.episodes, 10u);
  EXPECT_EQ(cfg.eval_list_size, 50u);
  EXPECT_EQ(cfg.env.seeds.noise, 4u);
  EXPECT_NO_THROW(RunConfig::load(kConfigs / "mesh6.json"));
}

TEST(RunConfig, RejectsMalformed) {
  EXPECT_EQ(code_of([] { RunConfig::load(kData / "malformed_config.json"); }), ErrorCode::config);
  const nlohmann::json base = nlohmann::json::parse(slurp(kConfigs / "line4.json"));
  auto with = [&](const std::string& key, nlohmann::json v) {
    nlohmann::json j = base;
    j[key] = std::move(v);
    return j;
  };
  auto load = [&](const nlohmann::json& j) { RunConfig::from_json(j, kConfigs); };
  EXPECT_EQ(code_of([&] { load(with("surprise", 1)); }), ErrorCode::config);
  EXPECT_EQ(code_of([&] { load(with("dt", "fast")); }), ErrorCode::config);
  EXPECT_EQ(code_of([&] { load(with("dt", -1.0)); }), ErrorCode::config);
  EXPECT_EQ(code_of([&] { load(with("power_ladder", {5, 10})); }), ErrorCode::config);
  EXPECT_EQ(code_of([&] { load(with("episodes", 51)); }), ErrorCode::config);
  EXPECT_EQ(code_of([&] { load(with("topology", "missing.json")); }), ErrorCode::config);
}

TEST(RunConfig, DisconnectedTopologyIsTopologyError) {
  const RunConfig cfg = RunConfig::load(kData / "disconnected_config.json");
  EXPECT_EQ(code_of([&] { Scenario::build(cfg); }), ErrorCode::topology);
}

TEST(RunConfig, SeedOverride) {
  RunConfig cfg = RunConfig::load(kConfigs / "line4.json");
  cfg.apply_seed_override("demand=99");
  EXPECT_EQ(cfg.env.seeds.demand, 99u);
  EXPECT_EQ(code_of([&] { cfg.apply_seed_override("colour=1"); }), ErrorCode::config);
  EXPECT_EQ(code_of([&] { cfg.apply_seed_override("demand"); }), ErrorCode::config);
  EXPECT_EQ(code_of([&] { cfg.apply_seed_override("demand=x"); }), ErrorCode::config);
}

TEST(Scenario, EvalListSharedAcrossEnvironments) {
  const Scenario sc = Scenario::build(RunConfig::load(kConfigs / "line4.json"));
  ASSERT_EQ(sc.eval_list->size(), 50u);
  Environment a = sc.make_environment(), b = sc.make_environment();
  EXPECT_EQ(a.reset_custom(7), b.reset_custom(7));
}

// --- episodes and traces -------------------------------------------------------

TEST(Runner, EpisodeConservesAndReplays) {
  const Scenario sc = Scenario::build(RunConfig::load(kConfigs / "mesh6.json"));
  for (SchedulerKind k : {SchedulerKind::profitable, SchedulerKind::random, SchedulerKind::full_power}) {
    EpisodeTrace trace;
    const EpisodeReport r = run_episode(sc, k, 3, &trace);
    EXPECT_EQ(static_cast<std::int64_t>(trace.steps.size()), r.steps);
    EXPECT_LE(r.delivered + r.dropped, r.total_packets);
    if (!r.truncated) {
      EXPECT_EQ(r.delivered + r.dropped, r.total_packets);
    }
    const EpisodeReport again = replay_trace(sc, trace);
    EXPECT_EQ(again.delivered, r.delivered);
    EXPECT_EQ(again.dropped, r.dropped);
    EXPECT_EQ(again.steps, r.steps);
    if (k == SchedulerKind::profitable && !trace.steps.empty()) {
      EXPECT_EQ(trace.steps[0].order.size(), sc.topology->link_count());
    }
  }
}

TEST(Runner, TraceFileRoundTrip) {
  const Scenario sc = Scenario::build(RunConfig::load(kConfigs / "line4.json"));
  EpisodeTrace trace;
  run_episode(sc, SchedulerKind::profitable, 2, &trace);
  const fs::path dir = scratch("trace");
  emit_trace(trace, dir / "t.jsonl");
  std::ifstream in(dir / "t.jsonl");
  std::size_t lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  EXPECT_EQ(lines, trace.steps.size() + 1);

  const EpisodeTrace back = read_trace(dir / "t.jsonl");
  EXPECT_EQ(back.episode_index, trace.episode_index);
  EXPECT_EQ(back.scheduler, trace.scheduler);
  ASSERT_EQ(back.steps.size(), trace.steps.size());
  for (std::size_t i = 0; i < back.steps.size(); ++i) {
    EXPECT_EQ(back.steps[i].assignment.levels, trace.steps[i].assignment.levels);
    EXPECT_EQ(back.steps[i].order, trace.steps[i].order);
  }
  EXPECT_EQ(code_of([&] { read_trace(dir / "absent.jsonl"); }), ErrorCode::io);
}

TEST(Runner, CsvShape) {
  std::vector<EpisodeReport> rows{{0, SchedulerKind::random, 4, 9, 1, 10, false, 0.5},
                                  {1, SchedulerKind::full_power, 7, 3, 0, 5, true, 0.25}};
  std::ostringstream out;
  write_csv(out, rows);
  EXPECT_EQ(out.str(),
            "episode_index,scheduler,steps,delivered,dropped,total_packets,truncated\n"
            "0,random,4,9,1,10,false\n"
            "1,full-power,7,3,0,5,true\n");
}

// --- batches -------------------------------------------------------------------

TEST(Batch, RowsSummaryAndDeterminism) {
  RunConfig cfg = RunConfig::load(kConfigs / "mesh6.json");
  cfg.episodes = 4;
  const fs::path a = scratch("batch_a"), b = scratch("batch_b");
  BatchOptions oa{a, a / "traces", 1}, ob{b, b / "traces", 3};
  const BatchReport ra = run_batch(cfg, oa);
  run_batch(cfg, ob);

  EXPECT_EQ(ra.rows.size(), cfg.episodes * cfg.schedulers.size());
  EXPECT_EQ(slurp(a / "episodes.csv"), slurp(b / "episodes.csv"));
  std::size_t traces = 0;
  for (const auto& entry : fs::directory_iterator(a / "traces")) {
    ++traces;
    EXPECT_EQ(slurp(entry.path()), slurp(b / "traces" / entry.path().filename()));
  }
  EXPECT_EQ(traces, ra.rows.size());

  std::ifstream csv(a / "episodes.csv");
  std::size_t lines = 0;
  for (std::string line; std::getline(csv, line);) ++lines;
  EXPECT_EQ(lines, ra.rows.size() + 1);

  const auto summary = nlohmann::json::parse(slurp(a / "summary.json"));
  for (const auto& s : summary["schedulers"]) {
    std::int64_t delivered = 0, total = 0;
    std::size_t episodes = 0;
    for (const auto& r : ra.rows) {
      if (to_string(r.scheduler) != s["name"].get<std::string>()) continue;
      delivered += r.delivered;
      total += r.total_packets;
      ++episodes;
    }
    EXPECT_EQ(s["episodes"].get<std::size_t>(), episodes);
    EXPECT_EQ(s["delivered"].get<std::int64_t>(), delivered);
    EXPECT_EQ(s["total_packets"].get<std::int64_t>(), total);
  }
}

TEST(Batch, UnwritableOutputIsIoError) {
  RunConfig cfg = RunConfig::load(kConfigs / "line4.json");
  cfg.episodes = 1;
  const fs::path dir = scratch("blocked");
  std::ofstream(dir / "file") << "x";
  BatchOptions opts{dir / "file" / "sub", std::nullopt, 1};
  EXPECT_EQ(code_of([&] { run_batch(cfg, opts); }), ErrorCode::io);
}

}  // namespace
}  // namespace mmroute
