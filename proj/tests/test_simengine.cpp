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

#include <doctest.h>

#include "rwndqsim/simengine/engine.hpp"
#include "rwndqsim/simengine/topology.hpp"

using namespace rwndqsim::simengine;

namespace {

struct Recorder final : EventSink {
  std::vector<std::pair<SimTime, uint32_t>> seen;
  void on_event(Event& ev) override { seen.emplace_back(ev.time, ev.target); }
};

TopologySpec dumbbell_spec() {
  TopologySpec spec;
  for (int i = 1; i <= 3; ++i) {
    spec.hosts.push_back("s" + std::to_string(i));
    LinkSpec ls;
    ls.name = "up" + std::to_string(i);
    ls.a = "s" + std::to_string(i);
    ls.b = "sw";
    ls.rate_bps = 1'000'000'000;
    ls.delay_us = 43;
    ls.queue_bytes = 85'300;
    spec.links.push_back(ls);
  }
  spec.hosts.push_back("recv");
  spec.switches.push_back("sw");
  LinkSpec bn;
  bn.name = "bn";
  bn.a = "sw";
  bn.b = "recv";
  bn.rate_bps = 1'000'000'000;
  bn.delay_us = 43;
  bn.queue_bytes = 85'300;
  bn.label = 1;
  spec.links.push_back(bn);
  return spec;
}

}  // namespace

TEST_SUITE_BEGIN("simengine");

TEST_CASE("serialization rounds up to whole microseconds") {
  CHECK(serialization_us(1500, 1'000'000'000) == 12);
  CHECK(serialization_us(40, 1'000'000'000) == 1);  // 0.32us rounds up
  CHECK(serialization_us(85'300, 1'000'000'000) == 683);
}

TEST_CASE("events at the same time run in schedule order") {
  Engine engine;
  Recorder rec;
  engine.schedule(100, EventKind::SampleTick, 1);
  engine.schedule(100, EventKind::SampleTick, 2);
  engine.schedule(50, EventKind::SampleTick, 0);
  engine.schedule(100, EventKind::SampleTick, 3);
  engine.run_until(1000, rec);
  REQUIRE(rec.seen.size() == 4);
  CHECK(rec.seen[0].second == 0);
  CHECK(rec.seen[1].second == 1);
  CHECK(rec.seen[2].second == 2);
  CHECK(rec.seen[3].second == 3);
}

TEST_CASE("run_until on an empty queue returns with the clock unchanged") {
  Engine engine;
  Recorder rec;
  CHECK(engine.run_until(500, rec) == 0);
  CHECK(engine.now() == 0);
  CHECK(rec.seen.empty());
}

TEST_CASE("run_until stops at the horizon when events remain") {
  Engine engine;
  Recorder rec;
  engine.schedule(10, EventKind::SampleTick, 0);
  engine.schedule(2000, EventKind::SampleTick, 1);
  CHECK(engine.run_until(1000, rec) == 1000);
  REQUIRE(rec.seen.size() == 1);
  CHECK(engine.pending() == 1);
}

TEST_CASE("scheduling into the past is a simulation bug") {
  Engine engine;
  Recorder rec;
  engine.schedule(100, EventKind::SampleTick, 0);
  engine.run_until(200, rec);
  CHECK(engine.now() == 100);
  CHECK_THROWS_AS(engine.schedule(50, EventKind::SampleTick, 0),
                  SimulationBug);
}

TEST_CASE("clock is monotone across a burst of random events") {
  Engine engine;
  struct Monotone final : EventSink {
    Engine& eng;
    SimTime last = 0;
    int count = 0;
    explicit Monotone(Engine& e) : eng(e) {}
    void on_event(Event& ev) override {
      CHECK(eng.now() >= last);
      last = eng.now();
      if (count < 500) {
        eng.schedule(eng.now() + (ev.seq * 7919) % 97, EventKind::SampleTick,
                     0);
        ++count;
      }
    }
  } sink{engine};
  engine.schedule(1, EventKind::SampleTick, 0);
  engine.run_until(1'000'000, sink);
  CHECK(sink.count == 500);
}

TEST_CASE("dumbbell topology routes everything through the one bottleneck") {
  auto net = build_topology(dumbbell_spec());
  REQUIRE(net.nodes.size() == 5);

  const auto& sw = net.nodes[net.id_of("sw")];
  REQUIRE(sw.ports.size() == 4);
  const uint32_t recv_ip = net.nodes[net.id_of("recv")].ip;

  // every sender reaches recv via its uplink, the switch via its one
  // bottleneck port
  for (int i = 1; i <= 3; ++i) {
    const auto& host = net.nodes[net.id_of("s" + std::to_string(i))];
    REQUIRE(host.ports.size() == 1);
    CHECK(host.routes.at(recv_ip) == 0);
  }
  CHECK(sw.routes.at(recv_ip) == 3);  // the fourth port, label 1
  CHECK(sw.ports[3].label == 1);
  CHECK(sw.ports[3].report_id == "bn:fwd");

  // reverse ACK path: switch sends toward each sender on that sender's link
  for (int i = 1; i <= 3; ++i) {
    const uint32_t ip = net.nodes[net.id_of("s" + std::to_string(i))].ip;
    CHECK(sw.routes.at(ip) == static_cast<uint16_t>(i - 1));
  }
}

TEST_CASE("disconnected topologies name the unreachable pair") {
  TopologySpec spec;
  spec.hosts = {"a", "b"};
  CHECK_THROWS_WITH_AS(build_topology(spec),
                       doctest::Contains("a<->b"), ConfigError);
}

TEST_CASE("unknown link endpoints are configuration errors") {
  TopologySpec spec;
  spec.hosts = {"a"};
  LinkSpec ls;
  ls.name = "l";
  ls.a = "a";
  ls.b = "ghost";
  ls.rate_bps = 1;
  spec.links.push_back(ls);
  CHECK_THROWS_AS(build_topology(spec), ConfigError);
}

TEST_SUITE_END();
