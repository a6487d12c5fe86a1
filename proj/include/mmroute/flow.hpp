#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mmroute/ids.hpp"

namespace mmroute {

/// A batch of packets sharing source, destination and route.
struct FlowBundle {
  FlowId id = 0;
  StationId source;
  StationId destination;
  StationId current_location;
  std::vector<StationId> path;
  std::optional<StationId> next_hop;
  std::int64_t packet_count = 0;
  std::uint64_t arrival_seq = 0;

  /// A fresh bundle sitting at path.front(). Throws Error(contract_violation)
  /// on an empty path.
  static FlowBundle along(FlowId id, std::vector<StationId> path, std::int64_t packet_count);

  bool at_destination() const { return current_location == destination; }
};

/// Path successor of the current location; nullopt at the destination.
std::optional<StationId> get_next_hop(const FlowBundle& flow);

/// Advances the bundle one hop. Returns packet_count when the hop lands on the
/// destination, 0 otherwise. Throws Error(contract_violation) without a next hop.
std::int64_t packet_step(FlowBundle& flow);

}  // namespace mmroute
