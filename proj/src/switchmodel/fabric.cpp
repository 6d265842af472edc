/* Copyright 2026 the rwndqsim authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "rwndqsim/switchmodel/fabric.hpp"

#include "rwndqsim/wirecodec/tcp_segment.hpp"

namespace rwndqsim::switchmodel {

namespace {

// Destination address at its fixed IPv4 offset; 0 for a runt buffer.
uint32_t dst_ip_of(const simengine::Packet& pkt) {
  if (pkt.header_len < 20) {
    return 0;
  }
  const auto& h = pkt.header;
  return (static_cast<uint32_t>(h[16]) << 24) |
         (static_cast<uint32_t>(h[17]) << 16) |
         (static_cast<uint32_t>(h[18]) << 8) | h[19];
}

}  // namespace

Node& Network::node_named(const std::string& name) {
  return nodes[node_ids.at(name)];
}

uint32_t Network::id_of(const std::string& name) const {
  return node_ids.at(name);
}

void Fabric::inject(uint32_t node, simengine::Packet&& pkt) {
  forward(node, std::nullopt, std::move(pkt));
}

void Fabric::on_arrival(uint32_t node_id, uint16_t ingress_port,
                        simengine::Packet&& pkt) {
  Node& node = net_.nodes[node_id];
  if (node.is_host && dst_ip_of(pkt) == node.ip) {
    // Host-terminated traffic still crosses the node's switching layer (an
    // output to a local port), so the interceptor runs with no egress
    // queue. This is what lets a shared sender-side egress port track its
    // own flows and throttle them through the ACKs it hands upward.
    run_daemon_hook(node_id, ingress_port, std::nullopt, pkt);
    delivery_.deliver(node_id, std::move(pkt), engine_.now());
    return;
  }
  forward(node_id, ingress_port, std::move(pkt));
}

void Fabric::run_daemon_hook(uint32_t node_id,
                             std::optional<uint16_t> ingress,
                             std::optional<uint16_t> egress,
                             simengine::Packet& pkt) {
  Node& node = net_.nodes[node_id];
  if (!node.daemon.has_value()) {
    return;
  }
  auto parsed = wirecodec::parse_segment(pkt.header_bytes());
  if (auto* view = std::get_if<wirecodec::TcpSegmentView>(&parsed)) {
    auto result = node.daemon->intercept(*view, ingress, egress);
    if (result.counted_open) {
      arm_daemon(node_id);
    }
  }
  // Non-TCP traffic passes through untouched.
}

void Fabric::forward(uint32_t node_id, std::optional<uint16_t> ingress,
                     simengine::Packet&& pkt) {
  Node& node = net_.nodes[node_id];
  const uint32_t dst = dst_ip_of(pkt);

  if (node.is_host && dst == node.ip) {
    // Same-host traffic never touches a queue.
    delivery_.deliver(node_id, std::move(pkt), engine_.now());
    return;
  }

  auto route = node.routes.find(dst);
  if (route == node.routes.end()) {
    node.no_route_drops += 1;
    if (trace_ != nullptr) {
      trace_->record(engine_.now(), "noroute", node.name, pkt, 0);
    }
    return;
  }
  const uint16_t egress = route->second;
  run_daemon_hook(node_id, ingress, egress, pkt);
  enqueue(node_id, egress, std::move(pkt));
}

void Fabric::enqueue(uint32_t node_id, uint16_t port_idx,
                     simengine::Packet&& pkt) {
  SwitchPort& port = net_.nodes[node_id].ports[port_idx];
  port.account_backlog(engine_.now());
  if (trace_ != nullptr) {
    // Trace before the move; a rejected packet is left intact by the queue.
    const bool queued = port.queue.backlog() + pkt.wire_size() <=
                        port.queue.limit();
    trace_->record(engine_.now(), queued ? "enq" : "drop", port.report_id,
                   pkt, port.queue.backlog() + (queued ? pkt.wire_size() : 0));
  }
  if (!port.queue.try_enqueue(std::move(pkt))) {
    return;
  }
  if (!port.transmitting) {
    start_transmit(node_id, port_idx);
  }
}

void Fabric::start_transmit(uint32_t node_id, uint16_t port_idx) {
  SwitchPort& port = net_.nodes[node_id].ports[port_idx];
  port.transmitting = true;
  const simengine::SimTime done =
      engine_.now() +
      simengine::serialization_us(port.queue.head().wire_size(),
                                  port.line_rate_bps);
  engine_.schedule(done, simengine::EventKind::TransmitComplete, node_id,
                   port_idx);
}

void Fabric::on_transmit_complete(uint32_t node_id, uint16_t port_idx) {
  Node& node = net_.nodes[node_id];
  SwitchPort& port = node.ports[port_idx];
  port.account_backlog(engine_.now());
  simengine::Packet pkt = port.queue.pop_head();
  if (trace_ != nullptr) {
    trace_->record(engine_.now(), "deq", port.report_id, pkt,
                   port.queue.backlog());
  }

  const simengine::Link& link = net_.links[port.link_id];
  const uint32_t peer_node = port.is_a_end ? link.node_b : link.node_a;
  const uint16_t peer_port = port.is_a_end ? link.port_b : link.port_a;
  engine_.schedule_packet(engine_.now() + link.prop_delay_us, peer_node,
                          peer_port, std::move(pkt));

  if (!port.queue.empty()) {
    start_transmit(node_id, port_idx);
  } else {
    port.transmitting = false;
  }
}

void Fabric::on_rwndq_tick(uint32_t node_id) {
  Node& node = net_.nodes[node_id];
  if (!node.daemon.has_value()) {
    return;
  }
  backlog_scratch_.clear();
  for (const auto& port : node.ports) {
    backlog_scratch_.push_back(port.queue.backlog());
  }
  node.daemon->run_tick_pass(backlog_scratch_);
  if (auto deadline = node.daemon->next_deadline(engine_.now())) {
    engine_.schedule(*deadline, simengine::EventKind::RwndqTick, node_id);
  } else {
    node.tick_armed = false;
  }
}

void Fabric::arm_daemon(uint32_t node_id) {
  Node& node = net_.nodes[node_id];
  if (node.tick_armed || !node.daemon.has_value()) {
    return;
  }
  if (auto deadline = node.daemon->next_deadline(engine_.now())) {
    engine_.schedule(*deadline, simengine::EventKind::RwndqTick, node_id);
    node.tick_armed = true;
  }
}

void enable_rwndq(Network& net, const rwndq::RwndqConfig& cfg) {
  for (auto& node : net.nodes) {
    std::vector<uint64_t> limits;
    limits.reserve(node.ports.size());
    for (const auto& port : node.ports) {
      limits.push_back(port.queue.limit());
    }
    node.daemon.emplace(cfg, limits);
  }
}

}  // namespace rwndqsim::switchmodel
