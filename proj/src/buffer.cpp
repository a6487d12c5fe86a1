#include "mmroute/buffer.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "mmroute/error.hpp"

namespace mmroute {

Buffer::Buffer(StationId source_name, StationId outgoing_to, std::int64_t max_packets)
    : source_name_(source_name), outgoing_to_(outgoing_to), max_packets_(max_packets) {
  require(max_packets >= 0, ErrorCode::spec, "buffer max_packets must be non-negative");
}

std::int64_t Buffer::add_flow_to_q(FlowBundle flow) {
  const std::int64_t offered = std::max<std::int64_t>(flow.packet_count, 0);
  const std::int64_t admitted = std::min(offered, max_packets_ - current_packets_);
  dropped_packets_ += offered - admitted;
  if (admitted == 0) return 0;
  flow.packet_count = admitted;
  flow.arrival_seq = next_arrival_seq_++;
  flows_.push_back(std::move(flow));
  current_packets_ += admitted;
  return admitted;
}

FlowBundle Buffer::remove_flow_from_q(FlowId id) {
  auto it = std::find_if(flows_.begin(), flows_.end(),
                         [id](const FlowBundle& f) { return f.id == id; });
  require(it != flows_.end(), ErrorCode::not_found,
          "remove_flow_from_q: no flow with id " + std::to_string(id));
  FlowBundle out = std::move(*it);
  flows_.erase(it);
  current_packets_ -= out.packet_count;
  return out;
}

FlowBundle Buffer::dequeue_head(std::int64_t budget, FlowId split_id) {
  require(!flows_.empty() && budget > 0, ErrorCode::contract_violation,
          "dequeue_head: empty buffer or no budget");
  FlowBundle& head = flows_.front();
  FlowBundle moved;
  if (head.packet_count <= budget) {
    moved = std::move(head);
    flows_.pop_front();
  } else {
    moved = head;
    moved.id = split_id;
    moved.packet_count = budget;
    head.packet_count -= budget;
  }
  current_packets_ -= moved.packet_count;
  used_bw_ += moved.packet_count;
  return moved;
}

void Buffer::zero_bw_in_buffer() {
  used_bw_ = 0;
  dropped_packets_ = 0;
}

void Buffer::clear() {
  flows_.clear();
  link_max_capacity_ = 0;
  used_bw_ = 0;
  power_ = 0;
  current_packets_ = 0;
  dropped_packets_ = 0;
  next_arrival_seq_ = 0;
}

}  // namespace mmroute
