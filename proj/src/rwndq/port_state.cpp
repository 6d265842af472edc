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

#include "rwndqsim/rwndq/port_state.hpp"

#include <algorithm>

namespace rwndqsim::rwndq {

PortState make_port_state(const RwndqConfig& cfg, uint64_t queue_limit_bytes) {
  PortState ps;
  ps.mss = cfg.mss;
  ps.limit = queue_limit_bytes;
  ps.target = queue_limit_bytes * cfg.target_numer / cfg.target_denom;
  // Initialization-time share; rewrites before the first commit use this.
  ps.wnd = static_cast<uint32_t>(ps.target);
  return ps;
}

void register_flow(PortState& port) {
  port.conncount += 1;
  if (port.conncount == 1) {
    // First flow on an idle port: seed the budget with one target's worth
    // of bytes and probe upward from there. The per-flow share keeps its
    // previous value until the first commit; the count guard below skips
    // the rescale.
    port.localwnd = static_cast<int64_t>(port.target);
    port.slowstart = true;
    port.incr = 0;
    port.update_count = 0;
  } else {
    port.wnd = static_cast<uint32_t>(
        static_cast<uint64_t>(port.wnd) * (port.conncount - 1) /
        port.conncount);
  }
}

void deregister_flow(PortState& port) {
  if (port.conncount == 0) {
    port.anomalies += 1;
    return;
  }
  port.conncount -= 1;
  if (port.conncount >= 1) {
    port.wnd = static_cast<uint32_t>(
        static_cast<uint64_t>(port.wnd) * (port.conncount + 1) /
        port.conncount);
  }
}

bool maybe_rewrite_ack(const PortState& ingress,
                       wirecodec::TcpSegmentView& segment) {
  if (!segment.ack()) {
    return false;
  }
  if (ingress.wnd >= segment.window()) {
    return false;
  }
  segment.rewrite_window(static_cast<uint16_t>(ingress.wnd));
  return true;
}

void tick(PortState& port, uint64_t backlog_bytes, const RwndqConfig& cfg) {
  if (port.conncount == 0) {
    return;  // daemon skips idle ports
  }
  // The exit test precedes accumulation: the tick that ends slow-start
  // already accumulates the plain deviation.
  if (port.slowstart && backlog_bytes >= port.target) {
    port.slowstart = false;
  }
  if (port.slowstart) {
    port.incr += 2 * static_cast<int64_t>(port.mss);
  } else {
    port.incr +=
        static_cast<int64_t>(port.target) - static_cast<int64_t>(backlog_bytes);
  }
  port.update_count += 1;
  if (port.update_count >= cfg.commit_ticks) {
    port.localwnd += port.incr / static_cast<int64_t>(cfg.commit_ticks);
    port.localwnd = std::min(
        port.localwnd,
        static_cast<int64_t>(kMaxTcpWindow) * port.conncount);
    port.localwnd = std::max(
        port.localwnd,
        static_cast<int64_t>(cfg.tcp_min_mss) * port.conncount);
    port.wnd = static_cast<uint32_t>(port.localwnd / port.conncount);
    port.incr = 0;
    port.update_count = 0;
    port.commits += 1;
  }
}

std::optional<uint64_t> commit_schedule(const RwndqConfig& cfg,
                                        bool any_active_port,
                                        uint64_t now_us) {
  if (!any_active_port) {
    return std::nullopt;
  }
  return now_us + cfg.tick_interval_us;
}

}  // namespace rwndqsim::rwndq
