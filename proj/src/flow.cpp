#include "mmroute/flow.hpp"

#include <algorithm>
#include <utility>

#include "mmroute/error.hpp"

namespace mmroute {

FlowBundle FlowBundle::along(FlowId id, std::vector<StationId> path, std::int64_t packet_count) {
  require(!path.empty(), ErrorCode::contract_violation, "FlowBundle: empty path");
  FlowBundle f;
  f.id = id;
  f.source = path.front();
  f.destination = path.back();
  f.current_location = f.source;
  f.path = std::move(path);
  f.packet_count = packet_count;
  f.next_hop = get_next_hop(f);
  return f;
}

std::optional<StationId> get_next_hop(const FlowBundle& flow) {
  auto it = std::find(flow.path.begin(), flow.path.end(), flow.current_location);
  if (it == flow.path.end() || std::next(it) == flow.path.end()) return std::nullopt;
  return *std::next(it);
}

std::int64_t packet_step(FlowBundle& flow) {
  require(flow.next_hop.has_value(), ErrorCode::contract_violation,
          "packet_step: bundle has no next hop");
  flow.current_location = *flow.next_hop;
  flow.next_hop = get_next_hop(flow);
  return flow.at_destination() ? flow.packet_count : 0;
}

}  // namespace mmroute
