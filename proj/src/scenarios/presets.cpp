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

#include "rwndqsim/scenarios/presets.hpp"

namespace rwndqsim::scenarios {

namespace {

constexpr uint64_t kGigabit = 1'000'000'000;
constexpr uint64_t kPortBufferBytes = 85'300;  // 4 MB shared / 48 ports
constexpr uint64_t kLinkDelayUs = 43;          // ~200 us base RTT over 2 hops
constexpr double kMiceStartFraction = 0.4;     // 20 s into a 50 s run

simengine::LinkSpec link(std::string name, std::string a, std::string b,
                         int label) {
  simengine::LinkSpec ls;
  ls.name = std::move(name);
  ls.a = std::move(a);
  ls.b = std::move(b);
  ls.rate_bps = kGigabit;
  ls.delay_us = kLinkDelayUs;
  ls.queue_bytes = kPortBufferBytes;
  ls.label = label;
  return ls;
}

// 11 single-flow senders and one receiver behind one switch; benchmark
// clients on the senders fetch from a web server on the receiver, so their
// requests cross the bloated bottleneck port.
Scenario dumbbell_bloat(double duration) {
  Scenario sc;
  sc.name = "dumbbell_bloat";
  for (int i = 1; i <= 11; ++i) {
    const std::string host = "s" + std::to_string(i);
    sc.topology.hosts.push_back(host);
    sc.topology.links.push_back(
        link("up" + std::to_string(i), host, "sw0", 0));
    sc.elephants.push_back({host, "recv", 1, 0.0, 0.0});
    sc.mice.push_back(
        {host, "recv", 1, 1000, 11500, 230, duration * kMiceStartFraction});
  }
  sc.topology.hosts.push_back("recv");
  sc.topology.switches.push_back("sw0");
  sc.topology.links.push_back(link("bn", "sw0", "recv", 1));
  sc.duration_s = duration;
  return sc;
}

// 5 sender hosts aggregate into one receiver: links 1-5 are the senders'
// shared egress ports, link 6 feeds the receiver.
Scenario incast(const std::string& name, uint32_t elephants_per_host,
                bool with_mice, double duration) {
  Scenario sc;
  sc.name = name;
  for (int i = 1; i <= 5; ++i) {
    const std::string host = "h" + std::to_string(i);
    sc.topology.hosts.push_back(host);
    sc.topology.links.push_back(
        link("l" + std::to_string(i), host, "core", i));
    sc.elephants.push_back({host, "recv", elephants_per_host, 0.0, 0.0});
    if (with_mice) {
      sc.mice.push_back(
          {"recv", host, 6, 1000, 11500, 230, duration * kMiceStartFraction});
    }
  }
  sc.topology.hosts.push_back("recv");
  sc.topology.switches.push_back("core");
  sc.topology.links.push_back(link("l6", "core", "recv", 6));
  sc.duration_s = duration;
  return sc;
}

}  // namespace

std::string to_string(Discipline d) {
  return d == Discipline::Fifo ? "fifo" : "rwndq";
}

Discipline discipline_from_string(const std::string& s) {
  if (s == "fifo") {
    return Discipline::Fifo;
  }
  if (s == "rwndq") {
    return Discipline::Rwndq;
  }
  throw ScenarioError("unknown discipline: " + s + " (fifo, rwndq)");
}

std::vector<std::string> preset_names() {
  return {"dumbbell_bloat", "incast_50", "incast_200", "bloat_50_30",
          "bloat_200_30"};
}

Scenario preset(const std::string& name, const PresetOverrides& ov) {
  double duration = 10.0;
  if (ov.full_length) {
    duration = 50.0;
  }
  if (ov.duration_s) {
    duration = *ov.duration_s;
  }

  Scenario sc;
  if (name == "dumbbell_bloat") {
    sc = dumbbell_bloat(duration);
  } else if (name == "incast_50") {
    sc = incast(name, 10, false, duration);
  } else if (name == "incast_200") {
    sc = incast(name, 40, false, duration);
  } else if (name == "bloat_50_30") {
    sc = incast(name, 10, true, duration);
  } else if (name == "bloat_200_30") {
    sc = incast(name, 40, true, duration);
  } else {
    std::string known;
    for (const auto& n : preset_names()) {
      known += (known.empty() ? "" : ", ") + n;
    }
    throw ScenarioError("unknown preset: " + name + " (available: " + known +
                        ")");
  }
  if (ov.seed) {
    sc.seed = *ov.seed;
  }
  return sc;
}

}  // namespace rwndqsim::scenarios
