#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mmroute/ids.hpp"
#include "mmroute/propagation.hpp"
#include "mmroute/rng.hpp"

namespace mmroute {

struct StationSpec {
  std::string name;
  Position position;
  int max_transceivers = 1;
};

struct EdgeSpec {
  std::string src;
  std::string dst;
  double nominal_capacity = 0.0;  // packets per second
  std::int64_t max_packets = 0;   // buffer size at src toward dst
};

/// Input description of a topology; see docs/topology.md for the file schema.
struct TopologySpec {
  std::vector<StationSpec> stations;
  std::vector<EdgeSpec> edges;
  double weight_min = 1.0;
  double weight_max = 1.0;

  /// Throws Error(spec) on missing or mistyped fields.
  static TopologySpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct Link {
  LinkId id;
  StationId src;
  StationId dst;
  double weight = 1.0;
  double nominal_capacity = 0.0;
  std::int64_t max_packets = 0;
};

/// path_table[s][t] is the route from s to t, both ends included.
using Path = std::vector<StationId>;
using PathTable = std::vector<std::vector<Path>>;

/// Immutable station graph with dense link ids and a precomputed route table.
class Topology {
 public:
  /// Links must already carry dense ids 0..L-1 in (src, dst) order.
  /// Throws Error(spec) on malformed links and Error(topology) if the directed
  /// graph is not strongly connected.
  Topology(std::vector<StationSpec> stations, std::vector<Link> links);

  std::size_t station_count() const { return stations_.size(); }
  std::size_t link_count() const { return links_.size(); }

  const std::vector<StationSpec>& stations() const { return stations_; }
  const StationSpec& station(StationId id) const { return stations_.at(id.index()); }
  Position position(StationId id) const { return station(id).position; }
  StationId station_id(std::string_view name) const;

  const std::vector<Link>& links() const { return links_; }
  const Link& link(LinkId id) const { return links_.at(id.index()); }

  /// edges_to_id; nullopt when there is no such directed edge.
  std::optional<LinkId> find_link(StationId src, StationId dst) const;
  LinkId link_id(StationId src, StationId dst) const;

  /// id_to_edges.
  std::pair<StationId, StationId> edge(LinkId id) const {
    const Link& l = link(id);
    return {l.src, l.dst};
  }

  /// Connection matrix: adjacency[s][t] is true for an edge s -> t.
  const std::vector<std::vector<bool>>& adjacency() const { return adjacency_; }

  /// Out-neighbors of s in ascending station-id order.
  std::vector<StationId> out_neighbors(StationId s) const;

  const PathTable& shortest_paths() const { return paths_; }
  const Path& shortest_path(StationId s, StationId t) const {
    return paths_.at(s.index()).at(t.index());
  }

 private:
  std::vector<StationSpec> stations_;
  std::vector<Link> links_;
  std::map<std::pair<StationId, StationId>, LinkId> edges_to_id_;
  std::vector<std::vector<bool>> adjacency_;
  PathTable paths_;
};

/// Builds a topology from its spec, drawing one weight per link (in link-id
/// order) uniformly from [weight_min, weight_max].
Topology generate_topology(const TopologySpec& spec, RandomStream& rng);

/// For every ordered pair, the minimum-total-weight route; among equal-weight
/// routes, the lexicographically smallest station-id sequence.
PathTable all_shortest_paths(std::size_t station_count, const std::vector<Link>& links);

/// Total weight of a route, accumulated from the destination backwards.
double path_weight(const Topology& topology, const Path& path);

}  // namespace mmroute
