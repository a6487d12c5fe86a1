#include "mmroute/station.hpp"

#include <string>
#include <utility>

#include "mmroute/error.hpp"

namespace mmroute {

Station::Station(const Topology& topology, StationId id)
    : id_(id),
      name_(topology.station(id).name),
      position_(topology.station(id).position),
      max_transceiver_(topology.station(id).max_transceivers),
      current_transceiver_(topology.station(id).max_transceivers) {
  for (StationId neighbor : topology.out_neighbors(id)) {
    const Link& l = topology.link(topology.link_id(id, neighbor));
    out_links_.emplace(neighbor, Buffer(id, neighbor, l.max_packets));
  }
}

Buffer& Station::buffer(StationId neighbor) {
  auto it = out_links_.find(neighbor);
  require(it != out_links_.end(), ErrorCode::contract_violation,
          "station " + name_ + " has no link to station " + std::to_string(neighbor.value));
  return it->second;
}

const Buffer& Station::buffer(StationId neighbor) const {
  return const_cast<Station*>(this)->buffer(neighbor);
}

void Station::initialize_out_queues() {
  for (auto& [_, b] : out_links_) b.clear();
  current_transceiver_ = max_transceiver_;
}

std::int64_t Station::add_flow(FlowBundle flow) {
  require(flow.current_location == id_ && flow.next_hop.has_value(),
          ErrorCode::contract_violation, "add_flow: bundle is not routable from station " + name_);
  return buffer(*flow.next_hop).add_flow_to_q(std::move(flow));
}

FlowBundle Station::remove_flow(StationId neighbor, FlowId id) {
  return buffer(neighbor).remove_flow_from_q(id);
}

void Station::take_transceiver() {
  require(current_transceiver_ > 0, ErrorCode::contract_violation,
          "station " + name_ + " has no free transceiver");
  --current_transceiver_;
}

void Station::zero_bw() {
  for (auto& [_, b] : out_links_) {
    b.zero_bw_in_buffer();
    b.set_power(0);
  }
  current_transceiver_ = max_transceiver_;
}

std::vector<BufferObservation> Station::get_buffers_observations() const {
  std::vector<BufferObservation> obs;
  obs.reserve(out_links_.size());
  for (const auto& [_, b] : out_links_) {
    const double load = b.max_packets() > 0
                            ? static_cast<double>(b.current_packets()) /
                                  static_cast<double>(b.max_packets())
                            : 0.0;
    obs.push_back({b.current_packets(), load, b.dropped_packets()});
  }
  return obs;
}

std::int64_t Station::get_dropped_packets() const {
  std::int64_t total = 0;
  for (const auto& [_, b] : out_links_) total += b.get_dropped_packets_in_q();
  return total;
}

std::int64_t Station::get_total_data() const {
  std::int64_t total = 0;
  for (const auto& [_, b] : out_links_) total += b.get_total_data();
  return total;
}

ActivationReport update_active_links(std::span<Station> stations, const Topology& topology,
                                     StationId s,
                                     const std::map<StationId, std::size_t>& levels) {
  Station& station = stations[s.index()];
  ActivationReport report;
  for (const auto& [neighbor, level] : levels) {
    require(station.out_links().contains(neighbor), ErrorCode::contract_violation,
            "update_active_links: station " + station.name() + " has no link to station " +
                std::to_string(neighbor.value));
    Buffer& b = station.buffer(neighbor);
    b.set_power(0);
    if (level == 0) continue;
    Station& peer = stations[neighbor.index()];
    const LinkId id = topology.link_id(s, neighbor);
    if (station.has_free_transceiver() && peer.has_free_transceiver()) {
      station.take_transceiver();
      peer.take_transceiver();
      b.set_power(level);
      report.activated.push_back(id);
    } else {
      report.refused.push_back(id);
    }
  }
  return report;
}

}  // namespace mmroute
