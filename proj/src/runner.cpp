#include "mmroute/runner.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <ostream>
#include <string>
#include <thread>

#include "mmroute/error.hpp"

namespace mmroute {

using nlohmann::json;

EpisodeReport run_episode(const Scenario& scenario, SchedulerKind kind, std::size_t index,
                          EpisodeTrace* trace) {
  const auto start = std::chrono::steady_clock::now();
  Environment env = scenario.make_environment();
  auto scheduler = make_scheduler(kind, scenario.env.ladder);
  env.reset_custom(index);
  if (trace) {
    *trace = {};
    trace->episode_index = index;
    trace->scheduler = kind;
    trace->total_packets = env.total_packets();
    trace->link_count = env.topology().link_count();
  }
  while (!env.done()) {
    PowerAssignment assignment = scheduler->schedule(env.step_context(), env.scheduler_rng());
    const std::int64_t step = env.step_count();
    StepResult r = env.step(assignment);
    if (trace) {
      TraceStep ts{step, std::move(assignment), r.info.packets_this_step, r.info.delivered,
                   r.info.dropped, {}};
      if (auto* p = dynamic_cast<ProfitableScheduler*>(scheduler.get())) {
        for (LinkId l : p->last_trace().order) ts.order.push_back(l.value);
      }
      trace->steps.push_back(std::move(ts));
    }
  }
  EpisodeReport report;
  report.episode_index = index;
  report.scheduler = kind;
  report.steps = env.step_count();
  report.delivered = env.delivered();
  report.dropped = env.dropped();
  report.total_packets = env.total_packets();
  report.truncated = env.truncated();
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

EpisodeReport replay_trace(const Scenario& scenario, const EpisodeTrace& trace) {
  Environment env = scenario.make_environment();
  env.reset_custom(trace.episode_index);
  for (const TraceStep& s : trace.steps) {
    if (env.done()) break;
    env.step(s.assignment);
  }
  EpisodeReport report;
  report.episode_index = trace.episode_index;
  report.scheduler = trace.scheduler;
  report.steps = env.step_count();
  report.delivered = env.delivered();
  report.dropped = env.dropped();
  report.total_packets = env.total_packets();
  report.truncated = env.truncated();
  return report;
}

void emit_trace(const EpisodeTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), ErrorCode::io, "cannot write trace " + path.string());
  json header = {{"type", "header"},
                 {"episode_index", trace.episode_index},
                 {"scheduler", std::string(to_string(trace.scheduler))},
                 {"total_packets", trace.total_packets},
                 {"links", trace.link_count}};
  out << header.dump() << '\n';
  for (const TraceStep& s : trace.steps) {
    json line = {{"step", s.step},
                 {"assignment", s.assignment.levels},
                 {"packets_this_step", s.packets_this_step},
                 {"delivered", s.delivered},
                 {"dropped", s.dropped}};
    if (!s.order.empty()) line["order"] = s.order;
    out << line.dump() << '\n';
  }
  require(out.good(), ErrorCode::io, "failed writing trace " + path.string());
}

EpisodeTrace read_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::io, "cannot read trace " + path.string());
  EpisodeTrace trace;
  std::string line;
  bool have_header = false;
  try {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      json j = json::parse(line);
      if (!have_header) {
        require(j.value("type", "") == "header", ErrorCode::io, "trace is missing its header");
        trace.episode_index = j.at("episode_index").get<std::size_t>();
        auto kind = parse_scheduler_kind(j.at("scheduler").get<std::string>());
        require(kind.has_value(), ErrorCode::io, "trace names an unknown scheduler");
        trace.scheduler = *kind;
        trace.total_packets = j.at("total_packets").get<std::int64_t>();
        trace.link_count = j.at("links").get<std::size_t>();
        have_header = true;
        continue;
      }
      TraceStep s;
      s.step = j.at("step").get<std::int64_t>();
      s.assignment.levels = j.at("assignment").get<std::vector<std::size_t>>();
      s.packets_this_step = j.at("packets_this_step").get<std::vector<std::int64_t>>();
      s.delivered = j.at("delivered").get<std::int64_t>();
      s.dropped = j.at("dropped").get<std::int64_t>();
      if (j.contains("order")) s.order = j.at("order").get<std::vector<std::uint32_t>>();
      trace.steps.push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::io, "malformed trace " + path.string() + ": " + e.what());
  }
  require(have_header, ErrorCode::io, "trace " + path.string() + " is empty");
  return trace;
}

void write_csv(std::ostream& out, const std::vector<EpisodeReport>& rows) {
  out << "episode_index,scheduler,steps,delivered,dropped,total_packets,truncated\n";
  for (const EpisodeReport& r : rows) {
    out << r.episode_index << ',' << to_string(r.scheduler) << ',' << r.steps << ','
        << r.delivered << ',' << r.dropped << ',' << r.total_packets << ','
        << (r.truncated ? "true" : "false") << '\n';
  }
}

json summarize(const std::vector<EpisodeReport>& rows) {
  std::vector<SchedulerKind> order;
  std::map<SchedulerKind, json> per;
  for (const EpisodeReport& r : rows) {
    if (!per.contains(r.scheduler)) {
      order.push_back(r.scheduler);
      per[r.scheduler] = {{"episodes", 0},      {"steps", 0},         {"delivered", 0},
                          {"dropped", 0},       {"total_packets", 0}, {"truncated", 0},
                          {"wall_time_s", 0.0}};
    }
    json& s = per[r.scheduler];
    s["episodes"] = s["episodes"].get<std::int64_t>() + 1;
    s["steps"] = s["steps"].get<std::int64_t>() + r.steps;
    s["delivered"] = s["delivered"].get<std::int64_t>() + r.delivered;
    s["dropped"] = s["dropped"].get<std::int64_t>() + r.dropped;
    s["total_packets"] = s["total_packets"].get<std::int64_t>() + r.total_packets;
    s["truncated"] = s["truncated"].get<std::int64_t>() + (r.truncated ? 1 : 0);
    s["wall_time_s"] = s["wall_time_s"].get<double>() + r.wall_time_s;
  }
  json out = {{"schedulers", json::array()}};
  for (SchedulerKind k : order) {
    json s = per[k];
    const auto total = s["total_packets"].get<std::int64_t>();
    s["name"] = std::string(to_string(k));
    s["delivery_ratio"] =
        total > 0 ? static_cast<double>(s["delivered"].get<std::int64_t>()) / static_cast<double>(total)
                  : 1.0;
    out["schedulers"].push_back(std::move(s));
  }
  return out;
}

namespace {

std::vector<EpisodeReport> run_scheduler(const Scenario& scenario, SchedulerKind kind,
                                         std::size_t episodes, unsigned jobs,
                                         std::vector<EpisodeTrace>* traces) {
  std::vector<EpisodeReport> reports(episodes);
  if (traces) traces->assign(episodes, {});
  auto work = [&](std::size_t worker, std::size_t stride) {
    for (std::size_t i = worker; i < episodes; i += stride) {
      reports[i] = run_episode(scenario, kind, i, traces ? &(*traces)[i] : nullptr);
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(jobs, episodes));
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
  }
  return reports;
}

}  // namespace

BatchReport run_batch(const RunConfig& cfg, const BatchOptions& options) {
  const Scenario scenario = Scenario::build(cfg);
  BatchReport batch;
  std::error_code ec;
  std::filesystem::create_directories(options.out_dir, ec);
  require(!ec, ErrorCode::io, "cannot create output directory " + options.out_dir.string());
  if (options.trace_dir) {
    std::filesystem::create_directories(*options.trace_dir, ec);
    require(!ec, ErrorCode::io, "cannot create trace directory " + options.trace_dir->string());
  }

  for (SchedulerKind kind : cfg.schedulers) {
    std::vector<EpisodeTrace> traces;
    auto rows = run_scheduler(scenario, kind, cfg.episodes, options.jobs,
                              options.trace_dir ? &traces : nullptr);
    if (options.trace_dir) {
      for (const EpisodeTrace& t : traces) {
        emit_trace(t, *options.trace_dir /
                          (std::string(to_string(kind)) + "_ep" + std::to_string(t.episode_index) +
                           ".jsonl"));
      }
    }
    batch.rows.insert(batch.rows.end(), rows.begin(), rows.end());
  }
  batch.summary = summarize(batch.rows);

  const auto csv_path = options.out_dir / "episodes.csv";
  std::ofstream csv(csv_path, std::ios::binary | std::ios::trunc);
  require(csv.good(), ErrorCode::io, "cannot write " + csv_path.string());
  write_csv(csv, batch.rows);
  require(csv.good(), ErrorCode::io, "failed writing " + csv_path.string());

  const auto summary_path = options.out_dir / "summary.json";
  std::ofstream summary(summary_path, std::ios::binary | std::ios::trunc);
  require(summary.good(), ErrorCode::io, "cannot write " + summary_path.string());
  summary << batch.summary.dump(2) << '\n';
  require(summary.good(), ErrorCode::io, "failed writing " + summary_path.string());
  return batch;
}

}  // namespace mmroute
