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

#include "rwndqsim/simengine/topology.hpp"

#include <deque>
#include <limits>

namespace rwndqsim::simengine {

using switchmodel::Network;
using switchmodel::Node;
using switchmodel::SwitchPort;

Network build_topology(const TopologySpec& spec) {
  Network net;

  auto add_node = [&net](const std::string& name, bool is_host) {
    if (net.node_ids.count(name) != 0) {
      throw ConfigError("duplicate node name: " + name);
    }
    const auto id = static_cast<uint32_t>(net.nodes.size());
    net.node_ids.emplace(name, id);
    Node node;
    node.name = name;
    node.is_host = is_host;
    if (is_host) {
      node.ip = 0x0a000000u + id + 1;  // 10.0.x.y
      net.host_by_ip.emplace(node.ip, id);
    }
    net.nodes.push_back(std::move(node));
  };

  for (const auto& h : spec.hosts) {
    add_node(h, true);
  }
  for (const auto& s : spec.switches) {
    add_node(s, false);
  }

  for (const auto& ls : spec.links) {
    auto a_it = net.node_ids.find(ls.a);
    auto b_it = net.node_ids.find(ls.b);
    if (a_it == net.node_ids.end() || b_it == net.node_ids.end()) {
      throw ConfigError("link " + ls.name + " references unknown node: " +
                        (a_it == net.node_ids.end() ? ls.a : ls.b));
    }
    if (ls.rate_bps == 0) {
      throw ConfigError("link " + ls.name + " has zero rate");
    }
    const auto link_id = static_cast<uint32_t>(net.links.size());
    Node& na = net.nodes[a_it->second];
    Node& nb = net.nodes[b_it->second];
    Link link;
    link.name = ls.name;
    link.rate_bps = ls.rate_bps;
    link.prop_delay_us = ls.delay_us;
    link.node_a = a_it->second;
    link.node_b = b_it->second;
    link.port_a = static_cast<uint16_t>(na.ports.size());
    link.port_b = static_cast<uint16_t>(nb.ports.size());
    link.label = ls.label;
    na.ports.emplace_back(ls.queue_bytes, ls.rate_bps, link_id, true,
                          ls.name + ":fwd", ls.label);
    nb.ports.emplace_back(ls.queue_bytes, ls.rate_bps, link_id, false,
                          ls.name + ":rev", 0);
    net.links.push_back(std::move(link));
  }

  // Adjacency: (neighbor node, local port toward it).
  std::vector<std::vector<std::pair<uint32_t, uint16_t>>> adj(
      net.nodes.size());
  for (const auto& link : net.links) {
    adj[link.node_a].emplace_back(link.node_b, link.port_a);
    adj[link.node_b].emplace_back(link.node_a, link.port_b);
  }

  // Static routes: BFS from each host, then point every other node at its
  // hop toward that host. Ties resolve to the first-listed link.
  constexpr uint32_t kUnreached = std::numeric_limits<uint32_t>::max();
  std::string unreachable;
  for (uint32_t target = 0; target < net.nodes.size(); ++target) {
    if (!net.nodes[target].is_host) {
      continue;
    }
    std::vector<uint32_t> dist(net.nodes.size(), kUnreached);
    std::deque<uint32_t> queue{target};
    dist[target] = 0;
    while (!queue.empty()) {
      const uint32_t u = queue.front();
      queue.pop_front();
      for (const auto& [v, port] : adj[u]) {
        if (dist[v] == kUnreached) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
      }
    }
    for (uint32_t n = 0; n < net.nodes.size(); ++n) {
      if (n == target) {
        continue;
      }
      if (dist[n] == kUnreached) {
        if (net.nodes[n].is_host && n < target) {
          unreachable += (unreachable.empty() ? "" : ", ") +
                         net.nodes[n].name + "<->" + net.nodes[target].name;
        }
        continue;
      }
      for (const auto& [v, port] : adj[n]) {
        if (dist[v] + 1 == dist[n]) {
          net.nodes[n].routes.emplace(net.nodes[target].ip, port);
          break;
        }
      }
    }
  }
  if (!unreachable.empty()) {
    throw ConfigError("disconnected topology, unreachable pairs: " +
                      unreachable);
  }
  return net;
}

}  // namespace rwndqsim::simengine
