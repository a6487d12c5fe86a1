#include "mmroute/topology.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <set>

#include "mmroute/error.hpp"

namespace mmroute {

using nlohmann::json;

namespace {

template <class T>
T field(const json& j, const char* key, const char* where) {
  require(j.is_object() && j.contains(key), ErrorCode::spec,
          std::string(where) + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(ErrorCode::spec, std::string(where) + ": bad field '" + key + "': " + e.what());
  }
}

std::vector<bool> reachable(std::size_t n, const std::vector<Link>& links, bool reverse) {
  std::vector<std::vector<std::size_t>> adj(n);
  for (const Link& l : links) {
    if (reverse) adj[l.dst.index()].push_back(l.src.index());
    else adj[l.src.index()].push_back(l.dst.index());
  }
  std::vector<bool> seen(n, false);
  if (n == 0) return seen;
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

}  // namespace

TopologySpec TopologySpec::from_json(const json& j) {
  require(j.is_object(), ErrorCode::spec, "topology: expected a JSON object");
  TopologySpec spec;
  for (const json& s : field<json>(j, "stations", "topology")) {
    StationSpec st;
    st.name = field<std::string>(s, "name", "station");
    st.position = {field<double>(s, "x", "station"), field<double>(s, "y", "station")};
    st.max_transceivers = field<int>(s, "max_transceivers", "station");
    spec.stations.push_back(std::move(st));
  }
  for (const json& e : field<json>(j, "edges", "topology")) {
    EdgeSpec edge;
    edge.src = field<std::string>(e, "src", "edge");
    edge.dst = field<std::string>(e, "dst", "edge");
    edge.nominal_capacity = field<double>(e, "nominal_capacity", "edge");
    edge.max_packets = field<std::int64_t>(e, "max_packets", "edge");
    spec.edges.push_back(std::move(edge));
  }
  auto bounds = field<std::vector<double>>(j, "weight_bounds", "topology");
  require(bounds.size() == 2, ErrorCode::spec, "topology: weight_bounds must be [w_min, w_max]");
  spec.weight_min = bounds[0];
  spec.weight_max = bounds[1];
  return spec;
}

json TopologySpec::to_json() const {
  json j;
  j["stations"] = json::array();
  for (const StationSpec& s : stations) {
    j["stations"].push_back({{"name", s.name},
                             {"x", s.position.x},
                             {"y", s.position.y},
                             {"max_transceivers", s.max_transceivers}});
  }
  j["edges"] = json::array();
  for (const EdgeSpec& e : edges) {
    j["edges"].push_back({{"src", e.src},
                          {"dst", e.dst},
                          {"nominal_capacity", e.nominal_capacity},
                          {"max_packets", e.max_packets}});
  }
  j["weight_bounds"] = {weight_min, weight_max};
  return j;
}

Topology::Topology(std::vector<StationSpec> stations, std::vector<Link> links)
    : stations_(std::move(stations)), links_(std::move(links)) {
  const std::size_t n = stations_.size();
  adjacency_.assign(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < links_.size(); ++i) {
    const Link& l = links_[i];
    require(l.id.index() == i, ErrorCode::spec, "topology: link ids must be dense and ordered");
    require(l.src.index() < n && l.dst.index() < n, ErrorCode::spec,
            "topology: link endpoint out of range");
    require(l.src != l.dst, ErrorCode::spec, "topology: self-loop link");
    require(l.weight > 0.0 && std::isfinite(l.weight), ErrorCode::spec,
            "topology: link weights must be positive");
    auto [it, inserted] = edges_to_id_.emplace(std::pair{l.src, l.dst}, l.id);
    require(inserted, ErrorCode::spec, "topology: duplicate edge " + stations_[l.src.index()].name +
                                           " -> " + stations_[l.dst.index()].name);
    if (i > 0) {
      const Link& prev = links_[i - 1];
      require(std::pair{prev.src, prev.dst} < std::pair{l.src, l.dst}, ErrorCode::spec,
              "topology: links must be sorted by (src, dst)");
    }
    adjacency_[l.src.index()][l.dst.index()] = true;
  }
  const auto fwd = reachable(n, links_, false);
  const auto bwd = reachable(n, links_, true);
  for (std::size_t s = 0; s < n; ++s) {
    require(fwd[s] && bwd[s], ErrorCode::topology,
            "topology: graph is not strongly connected (station '" + stations_[s].name + "')");
  }
  paths_ = all_shortest_paths(n, links_);
}

StationId Topology::station_id(std::string_view name) const {
  for (std::size_t i = 0; i < stations_.size(); ++i) {
    if (stations_[i].name == name) return StationId{i};
  }
  fail(ErrorCode::not_found, "unknown station '" + std::string(name) + "'");
}

std::optional<LinkId> Topology::find_link(StationId src, StationId dst) const {
  auto it = edges_to_id_.find({src, dst});
  if (it == edges_to_id_.end()) return std::nullopt;
  return it->second;
}

LinkId Topology::link_id(StationId src, StationId dst) const {
  auto id = find_link(src, dst);
  require(id.has_value(), ErrorCode::not_found, "no link between the given stations");
  return *id;
}

std::vector<StationId> Topology::out_neighbors(StationId s) const {
  std::vector<StationId> out;
  for (std::size_t t = 0; t < stations_.size(); ++t) {
    if (adjacency_[s.index()][t]) out.emplace_back(t);
  }
  return out;
}

Topology generate_topology(const TopologySpec& spec, RandomStream& rng) {
  require(std::isfinite(spec.weight_min) && std::isfinite(spec.weight_max) &&
              spec.weight_min > 0.0 && spec.weight_min <= spec.weight_max,
          ErrorCode::spec, "topology: weight bounds must satisfy 0 < w_min <= w_max");
  std::map<std::string, StationId> by_name;
  for (std::size_t i = 0; i < spec.stations.size(); ++i) {
    const StationSpec& s = spec.stations[i];
    require(!s.name.empty(), ErrorCode::spec, "topology: station with empty name");
    require(std::isfinite(s.position.x) && std::isfinite(s.position.y), ErrorCode::spec,
            "topology: station '" + s.name + "' has non-finite coordinates");
    require(s.max_transceivers >= 0, ErrorCode::spec,
            "topology: station '" + s.name + "' has negative max_transceivers");
    require(by_name.emplace(s.name, StationId{i}).second, ErrorCode::spec,
            "topology: duplicate station '" + s.name + "'");
  }

  std::vector<Link> links;
  std::set<std::pair<StationId, StationId>> seen;
  for (const EdgeSpec& e : spec.edges) {
    auto src = by_name.find(e.src);
    auto dst = by_name.find(e.dst);
    require(src != by_name.end() && dst != by_name.end(), ErrorCode::spec,
            "topology: edge " + e.src + " -> " + e.dst + " names an unknown station");
    require(src->second != dst->second, ErrorCode::spec, "topology: self-loop at " + e.src);
    require(seen.emplace(src->second, dst->second).second, ErrorCode::spec,
            "topology: duplicate edge " + e.src + " -> " + e.dst);
    require(std::isfinite(e.nominal_capacity) && e.nominal_capacity >= 0.0, ErrorCode::spec,
            "topology: edge " + e.src + " -> " + e.dst + " has invalid nominal_capacity");
    require(e.max_packets >= 0, ErrorCode::spec,
            "topology: edge " + e.src + " -> " + e.dst + " has negative max_packets");
    Link l;
    l.src = src->second;
    l.dst = dst->second;
    l.nominal_capacity = e.nominal_capacity;
    l.max_packets = e.max_packets;
    links.push_back(l);
  }
  std::sort(links.begin(), links.end(), [](const Link& a, const Link& b) {
    return std::pair{a.src, a.dst} < std::pair{b.src, b.dst};
  });
  for (std::size_t i = 0; i < links.size(); ++i) {
    links[i].id = LinkId{i};
    links[i].weight = rng.uniform(spec.weight_min, spec.weight_max);
  }
  return Topology(spec.stations, std::move(links));
}

PathTable all_shortest_paths(std::size_t n, const std::vector<Link>& links) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<const Link*>> out(n), in(n);
  for (const Link& l : links) {
    out[l.src.index()].push_back(&l);
    in[l.dst.index()].push_back(&l);
  }
  for (auto& adj : out) {
    std::sort(adj.begin(), adj.end(), [](const Link* a, const Link* b) { return a->dst < b->dst; });
  }

  PathTable table(n, std::vector<Path>(n));
  for (std::size_t target = 0; target < n; ++target) {
    // Distances to `target` via reverse Dijkstra.
    std::vector<double> to_target(n, inf);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    to_target[target] = 0.0;
    heap.emplace(0.0, target);
    while (!heap.empty()) {
      auto [d, v] = heap.top();
      heap.pop();
      if (d > to_target[v]) continue;
      for (const Link* l : in[v]) {
        const std::size_t u = l->src.index();
        const double candidate = l->weight + to_target[v];
        if (candidate < to_target[u]) {
          to_target[u] = candidate;
          heap.emplace(candidate, u);
        }
      }
    }
    // Greedy walk: smallest next station that stays on a minimal route.
    for (std::size_t source = 0; source < n; ++source) {
      Path& path = table[source][target];
      if (to_target[source] == inf) continue;
      std::size_t u = source;
      path.emplace_back(u);
      while (u != target) {
        std::size_t next = n;
        for (const Link* l : out[u]) {
          const std::size_t v = l->dst.index();
          if (to_target[v] != inf && l->weight + to_target[v] == to_target[u]) {
            next = v;
            break;
          }
        }
        u = next;
        path.emplace_back(u);
      }
    }
  }
  return table;
}

double path_weight(const Topology& topology, const Path& path) {
  double total = 0.0;
  for (std::size_t i = path.size(); i > 1; --i) {
    total = topology.link(topology.link_id(path[i - 2], path[i - 1])).weight + total;
  }
  return total;
}

}  // namespace mmroute
