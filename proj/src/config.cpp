#include "mmroute/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <string>

#include "mmroute/error.hpp"

namespace mmroute {

using nlohmann::json;

namespace {

template <class T>
T get(const json& j, const char* key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(ErrorCode::config, where + "." + key + ": " + e.what());
  }
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& where) {
  require(j.is_object(), ErrorCode::config, where + ": expected an object");
  std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& [key, _] : j.items()) {
    require(allowed.contains(key), ErrorCode::config, where + ": unknown key '" + key + "'");
  }
}

std::pair<std::int64_t, std::int64_t> range(const json& j, const char* key, const std::string& where) {
  auto v = get<std::vector<std::int64_t>>(j, key, where);
  require(v.size() == 2, ErrorCode::config, where + "." + key + ": expected [min, max]");
  return {v[0], v[1]};
}

}  // namespace

static RunConfig parse_run_config(const json& j, const std::filesystem::path& base_dir) {
  reject_unknown(j,
                 {"topology", "propagation", "power_ladder", "dt", "demand", "beta", "max_steps",
                  "inject_on_reset", "seeds", "schedulers", "episodes", "eval_list_size"},
                 "config");
  RunConfig cfg;

  require(j.contains("topology"), ErrorCode::config, "config: missing 'topology'");
  const json& topo = j.at("topology");
  if (topo.is_string()) {
    std::filesystem::path p = topo.get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    std::ifstream in(p);
    require(in.good(), ErrorCode::config, "config: cannot open topology file " + p.string());
    json tj;
    try {
      tj = json::parse(in);
    } catch (const json::parse_error& e) {
      fail(ErrorCode::spec, "topology file " + p.string() + ": " + e.what());
    }
    cfg.topology = TopologySpec::from_json(tj);
  } else {
    cfg.topology = TopologySpec::from_json(topo);
  }

  if (j.contains("propagation")) {
    const json& p = j.at("propagation");
    reject_unknown(p, {"carrier_frequency_hz", "noise_min_db", "noise_max_db", "power_domain"},
                   "propagation");
    auto& prop = cfg.env.propagation;
    prop.carrier_frequency_hz = p.value("carrier_frequency_hz", prop.carrier_frequency_hz);
    prop.noise_min_db = p.value("noise_min_db", prop.noise_min_db);
    prop.noise_max_db = p.value("noise_max_db", prop.noise_max_db);
    const std::string domain = p.value("power_domain", std::string("decibel"));
    if (domain == "decibel") prop.power_domain = PowerDomain::decibel;
    else if (domain == "verbatim-linear") prop.power_domain = PowerDomain::verbatim_linear;
    else fail(ErrorCode::config, "propagation.power_domain: expected decibel or verbatim-linear");
  }

  require(j.contains("power_ladder"), ErrorCode::config, "config: missing 'power_ladder'");
  cfg.env.ladder = PowerLadder(get<std::vector<double>>(j, "power_ladder", "config"));
  if (j.contains("dt")) cfg.env.dt = get<double>(j, "dt", "config");
  if (j.contains("beta")) cfg.env.beta = get<double>(j, "beta", "config");
  if (j.contains("max_steps")) cfg.env.max_steps = get<std::int64_t>(j, "max_steps", "config");
  if (j.contains("inject_on_reset")) cfg.env.inject_on_reset = get<bool>(j, "inject_on_reset", "config");

  require(j.contains("demand"), ErrorCode::config, "config: missing 'demand'");
  {
    const json& d = j.at("demand");
    reject_unknown(d, {"flows", "packets"}, "demand");
    std::tie(cfg.env.demand.flows_min, cfg.env.demand.flows_max) = range(d, "flows", "demand");
    std::tie(cfg.env.demand.packets_min, cfg.env.demand.packets_max) = range(d, "packets", "demand");
  }

  if (j.contains("seeds")) {
    const json& s = j.at("seeds");
    reject_unknown(s, {"topology", "demand", "scheduler", "noise"}, "seeds");
    auto& seeds = cfg.env.seeds;
    seeds.topology = s.value("topology", seeds.topology);
    seeds.demand = s.value("demand", seeds.demand);
    seeds.scheduler = s.value("scheduler", seeds.scheduler);
    seeds.noise = s.value("noise", seeds.noise);
  }

  if (j.contains("schedulers")) {
    cfg.schedulers.clear();
    for (const auto& name : get<std::vector<std::string>>(j, "schedulers", "config")) {
      auto kind = parse_scheduler_kind(name);
      require(kind.has_value(), ErrorCode::config, "config: unknown scheduler '" + name + "'");
      cfg.schedulers.push_back(*kind);
    }
  }
  if (j.contains("episodes")) cfg.episodes = get<std::size_t>(j, "episodes", "config");
  cfg.eval_list_size = j.contains("eval_list_size")
                           ? get<std::size_t>(j, "eval_list_size", "config")
                           : cfg.episodes;
  cfg.validate();
  return cfg;
}

RunConfig RunConfig::from_json(const json& j, const std::filesystem::path& base_dir) {
  try {
    return parse_run_config(j, base_dir);
  } catch (const json::exception& e) {
    fail(ErrorCode::config, std::string("config: ") + e.what());
  }
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::config, "cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::config, "config file " + path.string() + ": " + e.what());
  }
  return from_json(j, path.parent_path());
}

void RunConfig::apply_seed_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  require(eq != std::string_view::npos, ErrorCode::config,
          "seed override must look like name=value");
  const std::string_view name = assignment.substr(0, eq);
  const std::string_view value = assignment.substr(eq + 1);
  std::uint64_t seed = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), seed);
  require(ec == std::errc{} && ptr == value.data() + value.size(), ErrorCode::config,
          "seed override value must be an unsigned integer");
  auto& seeds = env.seeds;
  if (name == "topology") seeds.topology = seed;
  else if (name == "demand") seeds.demand = seed;
  else if (name == "scheduler") seeds.scheduler = seed;
  else if (name == "noise") seeds.noise = seed;
  else fail(ErrorCode::config, "unknown seed '" + std::string(name) + "'");
}

void RunConfig::validate() const {
  env.validate();
  require(!schedulers.empty(), ErrorCode::config, "config: no schedulers listed");
  require(episodes <= eval_list_size, ErrorCode::config,
          "config: episodes exceeds eval_list_size");
  for (SchedulerKind k : schedulers) {
    if (k == SchedulerKind::full_power) {
      require(env.ladder.size() > 1, ErrorCode::config,
              "config: full-power needs a power ladder with a level above off");
    }
  }
}

Scenario Scenario::build(const RunConfig& cfg) {
  Scenario s;
  s.env = cfg.env;
  RandomStream topo_rng(cfg.env.seeds.topology);
  s.topology = std::make_shared<const Topology>(generate_topology(cfg.topology, topo_rng));
  s.model = std::make_shared<const InterferenceModel>(
      build_interference_model(*s.topology, cfg.env.propagation));
  s.eval_list = std::make_shared<const std::vector<EpisodeSpec>>(
      generate_eval_list(*s.topology, cfg.env, cfg.eval_list_size, s.model));
  return s;
}

Environment Scenario::make_environment() const {
  return Environment(topology, model, env, eval_list);
}

}  // namespace mmroute
