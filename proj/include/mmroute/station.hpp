#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mmroute/buffer.hpp"
#include "mmroute/topology.hpp"

namespace mmroute {

/// (current packets, load in [0, 1], packets dropped this step).
struct BufferObservation {
  std::int64_t packets = 0;
  double load = 0.0;
  std::int64_t dropped = 0;

  friend bool operator==(const BufferObservation&, const BufferObservation&) = default;
};

/// Mutable per-episode state of one station: its outgoing buffers and its
/// transceiver budget.
class Station {
 public:
  Station(const Topology& topology, StationId id);

  StationId id() const { return id_; }
  const std::string& name() const { return name_; }
  Position position() const { return position_; }
  int max_transceiver() const { return max_transceiver_; }
  int current_transceiver() const { return current_transceiver_; }

  std::map<StationId, Buffer>& out_links() { return out_links_; }
  const std::map<StationId, Buffer>& out_links() const { return out_links_; }
  Buffer& buffer(StationId neighbor);
  const Buffer& buffer(StationId neighbor) const;

  /// Empties every buffer and restores the full transceiver budget.
  void initialize_out_queues();

  /// Queues `flow` on the buffer toward its next hop. Returns admitted packets.
  std::int64_t add_flow(FlowBundle flow);
  FlowBundle remove_flow(StationId neighbor, FlowId id);

  bool is_link_activated(StationId neighbor) const { return buffer(neighbor).power() > 0; }

  bool has_free_transceiver() const { return current_transceiver_ > 0; }
  void take_transceiver();

  /// Zeroes used bandwidth and drop counters of every buffer, deactivates
  /// every link and restores the transceiver budget.
  void zero_bw();

  std::vector<BufferObservation> get_buffers_observations() const;
  std::int64_t get_dropped_packets() const;
  std::int64_t get_total_data() const;

 private:
  StationId id_;
  std::string name_;
  Position position_;
  std::map<StationId, Buffer> out_links_;
  int max_transceiver_;
  int current_transceiver_;
};

struct ActivationReport {
  std::vector<LinkId> activated;
  std::vector<LinkId> refused;  // nonzero level but no free transceiver
};

/// Activates the out-links of `stations[s]` at the given ladder levels, in
/// ascending neighbor order. A link with a nonzero level becomes active only
/// if both endpoints still have a free transceiver; activation consumes one
/// transceiver at each end. Throws Error(contract_violation) for a level keyed
/// by a station that is not an out-neighbor.
ActivationReport update_active_links(std::span<Station> stations, const Topology& topology,
                                     StationId s,
                                     const std::map<StationId, std::size_t>& levels);

}  // namespace mmroute
