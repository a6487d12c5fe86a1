// mmroute: batch runner, config validator and agent bridge server.

#include <unistd.h>

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mmroute/bridge.hpp"
#include "mmroute/config.hpp"
#include "mmroute/error.hpp"
#include "mmroute/runner.hpp"
#include "mmroute/transport.hpp"

namespace {

using mmroute::Error;
using mmroute::ErrorCode;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::config: return 2;
    case ErrorCode::spec:
    case ErrorCode::topology:
    case ErrorCode::degenerate_geometry: return 3;
    default: return 1;
  }
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

mmroute::RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  auto cfg = mmroute::RunConfig::load(path);
  for (const auto& o : overrides) cfg.apply_seed_override(o);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mmWave packet-routing simulator with interference-aware power scheduling"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> seed_overrides;

  auto* run = app.add_subcommand("run", "Run every scheduler over the evaluation episodes");
  std::string trace_dir, schedulers, out_dir = ".";
  std::size_t episodes = 0;
  unsigned jobs = 1;
  run->add_option("--config", config_path, "Run-config file")->required();
  run->add_option("--trace-dir", trace_dir, "Write per-episode JSON-lines traces here");
  run->add_option("--schedulers", schedulers, "Comma-separated scheduler list (overrides config)");
  run->add_option("--episodes", episodes, "Number of evaluation episodes (overrides config)");
  run->add_option("--seed-override", seed_overrides, "name=value for topology|demand|scheduler|noise");
  run->add_option("--out", out_dir, "Directory for episodes.csv and summary.json");
  run->add_option("--jobs", jobs, "Worker threads per scheduler")->check(CLI::PositiveNumber);

  auto* validate = app.add_subcommand("validate", "Check config and topology without running");
  validate->add_option("--config", config_path, "Run-config file")->required();
  validate->add_option("--seed-override", seed_overrides, "name=value");

  auto* serve = app.add_subcommand("serve", "Serve the agent bridge protocol");
  std::string host = "127.0.0.1";
  std::uint16_t port = 5555;
  bool use_stdio = false;
  std::size_t max_sessions = 0;
  serve->add_option("--config", config_path, "Run-config file")->required();
  serve->add_option("--seed-override", seed_overrides, "name=value");
  serve->add_option("--host", host, "IPv4 address to bind");
  serve->add_option("--port", port, "TCP port (0 picks a free port)");
  serve->add_flag("--stdio", use_stdio, "Serve one session over stdin/stdout");
  serve->add_option("--max-sessions", max_sessions, "Exit after this many sessions (0: unlimited)");

  CLI11_PARSE(app, argc, argv);

  try {
    auto cfg = load_config(config_path, seed_overrides);

    if (*validate) {
      const auto scenario = mmroute::Scenario::build(cfg);
      std::cout << "ok: " << scenario.topology->station_count() << " stations, "
                << scenario.topology->link_count() << " links, " << cfg.eval_list_size
                << " eval episodes\n";
      return 0;
    }

    if (*run) {
      if (!schedulers.empty()) {
        cfg.schedulers.clear();
        for (const auto& name : split_csv(schedulers)) {
          auto kind = mmroute::parse_scheduler_kind(name);
          if (!kind) throw Error(ErrorCode::config, "unknown scheduler '" + name + "'");
          cfg.schedulers.push_back(*kind);
        }
      }
      if (episodes > 0) {
        cfg.episodes = episodes;
        if (cfg.eval_list_size < episodes) cfg.eval_list_size = episodes;
      }
      cfg.validate();
      mmroute::BatchOptions options;
      options.out_dir = out_dir;
      if (!trace_dir.empty()) options.trace_dir = trace_dir;
      options.jobs = jobs;
      const auto report = mmroute::run_batch(cfg, options);
      std::cout << report.summary.dump(2) << '\n';
      return 0;
    }

    if (*serve) {
      const auto scenario = mmroute::Scenario::build(cfg);
      if (use_stdio) {
        mmroute::bridge::serve_stream(scenario, STDIN_FILENO, STDOUT_FILENO);
        return 0;
      }
      std::optional<std::size_t> limit;
      if (max_sessions > 0) limit = max_sessions;
      mmroute::bridge::serve_tcp(scenario, host, port, limit, [](std::uint16_t bound) {
        std::cerr << "listening on port " << bound << std::endl;
      });
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error (" << mmroute::to_string(e.code()) << "): " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
