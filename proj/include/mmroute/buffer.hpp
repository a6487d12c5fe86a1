#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>

#include "mmroute/flow.hpp"
#include "mmroute/ids.hpp"

namespace mmroute {

/// Outgoing FIFO queue at one station toward one neighbor. Holds flow bundles
/// in arrival order and the per-step link budget bookkeeping.
class Buffer {
 public:
  Buffer(StationId source_name, StationId outgoing_to, std::int64_t max_packets);

  StationId source_name() const { return source_name_; }
  StationId outgoing_to() const { return outgoing_to_; }
  const std::deque<FlowBundle>& flows() const { return flows_; }
  std::size_t total_flows() const { return flows_.size(); }
  std::int64_t current_packets() const { return current_packets_; }
  std::int64_t max_packets() const { return max_packets_; }
  std::int64_t dropped_packets() const { return dropped_packets_; }
  std::int64_t used_bw() const { return used_bw_; }
  std::int64_t link_max_capacity() const { return link_max_capacity_; }
  std::size_t power() const { return power_; }

  /// Packets the link may still carry this step.
  std::int64_t remaining_bw() const { return link_max_capacity_ - used_bw_; }

  void set_link_max_capacity(std::int64_t packets_per_step) { link_max_capacity_ = packets_per_step; }
  void set_power(std::size_t level) { power_ = level; }

  /// Admits as many packets of `flow` as fit; the rest are counted as dropped.
  /// A bundle with nothing admitted is not stored. Returns the admitted count.
  std::int64_t add_flow_to_q(FlowBundle flow);

  /// Removes bundle `id`. Throws Error(not_found) if absent.
  FlowBundle remove_flow_from_q(FlowId id);

  /// Takes up to `budget` packets off the head bundle and charges them to
  /// used_bw. A head bundle larger than the budget is split: the returned
  /// part gets `split_id`, the remainder stays queued with its original id
  /// and arrival stamp. Requires a non-empty buffer and budget > 0.
  FlowBundle dequeue_head(std::int64_t budget, FlowId split_id);

  void zero_bw_in_buffer();

  /// Drops every stored bundle and all counters (episode reset).
  void clear();

  std::int64_t get_total_data() const { return current_packets_; }
  std::int64_t get_dropped_packets_in_q() const { return dropped_packets_; }

 private:
  StationId source_name_;
  StationId outgoing_to_;
  std::deque<FlowBundle> flows_;
  std::int64_t link_max_capacity_ = 0;
  std::int64_t used_bw_ = 0;
  std::size_t power_ = 0;
  std::int64_t current_packets_ = 0;
  std::int64_t max_packets_;
  std::int64_t dropped_packets_ = 0;
  std::uint64_t next_arrival_seq_ = 0;
};

}  // namespace mmroute
