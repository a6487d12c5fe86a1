#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "mmroute/topology.hpp"

namespace mmroute::fixtures {

struct EdgeDef {
  std::size_t src;
  std::size_t dst;
  double nominal_capacity = 10.0;
  std::int64_t max_packets = 100;
};

/// Topology from explicit coordinates and edges, weight 1 on every link.
inline Topology make_topology(const std::vector<Position>& positions, std::vector<EdgeDef> edges,
                              int transceivers = 8) {
  std::vector<StationSpec> stations;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    stations.push_back({"S" + std::to_string(i), positions[i], transceivers});
  }
  std::sort(edges.begin(), edges.end(), [](const EdgeDef& a, const EdgeDef& b) {
    return std::pair{a.src, a.dst} < std::pair{b.src, b.dst};
  });
  std::vector<Link> links;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    links.push_back({LinkId{i}, StationId{edges[i].src}, StationId{edges[i].dst}, 1.0,
                     edges[i].nominal_capacity, edges[i].max_packets});
  }
  return Topology(std::move(stations), std::move(links));
}

}  // namespace mmroute::fixtures
