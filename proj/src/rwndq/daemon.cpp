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

#include "rwndqsim/rwndq/daemon.hpp"

namespace rwndqsim::rwndq {

SwitchDaemon::SwitchDaemon(RwndqConfig cfg,
                           std::span<const uint64_t> port_queue_limits)
    : cfg_(cfg) {
  ports_.reserve(port_queue_limits.size());
  for (uint64_t limit : port_queue_limits) {
    ports_.push_back(make_port_state(cfg_, limit));
  }
}

SwitchDaemon::FlowKey SwitchDaemon::flow_key(
    const wirecodec::TcpSegmentView& seg, int& dir) {
  const uint64_t src =
      (static_cast<uint64_t>(seg.src_ip()) << 16) | seg.src_port();
  const uint64_t dst =
      (static_cast<uint64_t>(seg.dst_ip()) << 16) | seg.dst_port();
  if (src <= dst) {
    dir = 0;
    return FlowKey{src, dst};
  }
  dir = 1;
  return FlowKey{dst, src};
}

SwitchDaemon::Intercept SwitchDaemon::intercept(
    wirecodec::TcpSegmentView& segment, std::optional<uint16_t> ingress,
    std::optional<uint16_t> egress) {
  Intercept result;
  int dir = 0;
  const FlowKey key = flow_key(segment, dir);

  // New connection: a SYN-ACK establishes the flow in both directions, so
  // both the ingress and the egress queue pick up a share.
  if (segment.syn() && segment.ack()) {
    FlowEntry& entry = flows_[key];
    if (!entry.opened) {
      entry.opened = true;
      result.counted_open = true;
      if (ingress) {
        register_flow(ports_[*ingress]);
      }
      if (egress) {
        register_flow(ports_[*egress]);
      }
    }
  }

  // Tear-down releases the ingress queue's share only; each direction's
  // FIN (or RST) is honored once.
  if (segment.fin() || segment.rst()) {
    auto it = flows_.find(key);
    if (it != flows_.end() && it->second.opened &&
        !it->second.closed_dir[dir]) {
      it->second.closed_dir[dir] = true;
      result.counted_close = true;
      if (ingress) {
        deregister_flow(ports_[*ingress]);
      }
      if (it->second.closed_dir[0] && it->second.closed_dir[1]) {
        flows_.erase(it);
      }
    }
  }

  if (ingress && segment.ack()) {
    result.rewritten = maybe_rewrite_ack(ports_[*ingress], segment);
  }
  return result;
}

void SwitchDaemon::run_tick_pass(std::span<const uint64_t> backlogs) {
  for (size_t i = 0; i < ports_.size(); ++i) {
    if (ports_[i].conncount > 0) {
      tick(ports_[i], backlogs[i], cfg_);
    }
  }
}

bool SwitchDaemon::any_active() const {
  for (const auto& p : ports_) {
    if (p.conncount > 0) {
      return true;
    }
  }
  return false;
}

uint64_t SwitchDaemon::total_anomalies() const {
  uint64_t n = 0;
  for (const auto& p : ports_) {
    n += p.anomalies;
  }
  return n;
}

}  // namespace rwndqsim::rwndq
