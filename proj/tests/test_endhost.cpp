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

#include <map>
#include <memory>
#include <random>

#include "rwndqsim/endhost/apps.hpp"
#include "rwndqsim/endhost/tcp_flow.hpp"
#include "rwndqsim/wirecodec/tcp_segment.hpp"

using namespace rwndqsim;
using namespace rwndqsim::endhost;
using wirecodec::build_segment;
using wirecodec::SegmentSpec;
using wirecodec::TcpSegmentView;

namespace {

TcpConfig test_config() { return TcpConfig{}; }

struct HalfFixture {
  SafetyStats safety;
  TcpHalf half;
  explicit HalfFixture(const TcpConfig& cfg = TcpConfig{})
      : half(cfg, 0x0a000001, 1000, 0x0a000002, 80, &safety) {}
};

uint64_t outbox_payload(TcpHalf& h) {
  uint64_t total = 0;
  for (const auto& seg : h.outbox()) {
    total += seg.payload_len;
  }
  return total;
}

// Couples two halves over a lossy, delayed pipe. Segments become real bytes
// and are re-parsed on delivery; timers fire off each half's advertised
// deadline. Used for end-to-end state-machine properties without the full
// network model.
struct Loopback {
  TcpConfig cfg = test_config();
  SafetyStats safety;
  TcpHalf client{cfg, 0x0a000001, 1000, 0x0a000002, 80, &safety};
  TcpHalf server{cfg, 0x0a000002, 80, 0x0a000001, 1000, &safety};
  uint64_t now = 0;
  uint64_t delay_us = 100;
  double drop_prob = 0.0;
  std::mt19937_64 rng{1};
  uint64_t forced_data_drops = 0;  // drop the next N data deliveries

  struct InFlight {
    uint64_t at;
    uint64_t seq;  // tie-break
    bool to_server;
    std::vector<uint8_t> bytes;
    uint32_t payload;
  };
  std::multimap<uint64_t, InFlight> wire;
  uint64_t next_seq = 0;

  void pump(TcpHalf& from, bool to_server) {
    for (const auto& seg : from.outbox()) {
      SegmentSpec spec;
      spec.src_ip = from.local_ip();
      spec.dst_ip = from.remote_ip();
      spec.src_port = from.local_port();
      spec.dst_port = from.remote_port();
      spec.seq = seg.seq;
      spec.ack_seq = seg.ack;
      spec.flags = seg.flags;
      spec.window = seg.window;
      spec.payload_len = seg.payload_len;
      InFlight f{now + delay_us, next_seq++, to_server, build_segment(spec),
                 seg.payload_len};
      std::uniform_real_distribution<double> coin(0.0, 1.0);
      bool drop = coin(rng) < drop_prob;
      if (seg.payload_len > 0 && forced_data_drops > 0) {
        --forced_data_drops;
        drop = true;
      }
      if (!drop) {
        wire.emplace(f.at, std::move(f));
      }
    }
    from.outbox().clear();
  }

  void fire_timers() {
    for (TcpHalf* h : {&client, &server}) {
      auto dl = h->rto_deadline();
      if (dl && *dl <= now) {
        h->on_timeout(now);
        pump(*h, h == &client);
      }
    }
  }

  // Runs until the client is fully closed, dead, or the cap is reached.
  void run(uint64_t until_us) {
    while (now < until_us) {
      if (client.fully_closed() || client.dead()) {
        return;
      }
      uint64_t next = until_us;
      if (!wire.empty()) {
        next = std::min(next, wire.begin()->first);
      }
      for (TcpHalf* h : {&client, &server}) {
        auto dl = h->rto_deadline();
        if (dl) {
          next = std::min(next, *dl);
        }
      }
      if (next <= now) {
        next = now + 1;
      }
      now = next;
      fire_timers();
      while (!wire.empty() && wire.begin()->first <= now) {
        auto f = std::move(wire.begin()->second);
        wire.erase(wire.begin());
        auto parsed = wirecodec::parse_segment(f.bytes);
        auto& view = std::get<TcpSegmentView>(parsed);
        TcpHalf& dst = f.to_server ? server : client;
        dst.on_segment(view, now);
        pump(client, true);
        pump(server, false);
      }
      pump(client, true);
      pump(server, false);
    }
  }

  void start(uint64_t request_bytes, uint64_t response_bytes) {
    server.on_deliver = [this, request_bytes, response_bytes,
                         responded = false](uint64_t total) mutable {
      if (!responded && total >= request_bytes) {
        responded = true;
        server.app_supply(response_bytes);
        server.app_close(now);
      }
    };
    client.app_supply(request_bytes);
    client.open_active(now);
    pump(client, true);
  }
};

}  // namespace

TEST_SUITE_BEGIN("endhost");

TEST_CASE("slow start grows one segment per new ack when window-bound") {
  HalfFixture fx;
  fx.half.force_established(1001, 501);
  fx.half.force_cc(CcState::SlowStart, 2920, 0x7fffffff, 65535);
  fx.half.app_supply(100'000);
  fx.half.on_ack(1001, 65535, 0, false);  // window update triggers sending
  CHECK(fx.half.outbox().size() == 2);    // cwnd-limited at 2 segments
  fx.half.outbox().clear();

  fx.half.on_ack(1001 + 1460, 65535, 1000);
  CHECK(fx.half.cwnd() == 4380);
  CHECK(fx.half.cc_state() == CcState::SlowStart);
}

TEST_CASE("outstanding data never exceeds min(cwnd, peer_rwnd)") {
  HalfFixture fx;
  fx.half.force_established(1, 1);
  fx.half.force_cc(CcState::SlowStart, 100'000, 0x7fffffff, 8'000);
  fx.half.app_supply(1'000'000);
  fx.half.on_ack(1, 8'000, 0, false);
  // five full segments fit; a bulk sender holds the sub-mss remainder back
  CHECK(outbox_payload(fx.half) == 7'300);
  CHECK(fx.half.data_outstanding() <= 8'000);
  CHECK(fx.safety.violations == 0);

  // acks open the window again, one mss at a time
  fx.half.outbox().clear();
  fx.half.on_ack(1 + 1460, 8'000, 1000);
  CHECK(outbox_payload(fx.half) == 1'460);
  CHECK(fx.half.data_outstanding() <= 8'000);
  CHECK(fx.safety.violations == 0);
}

TEST_CASE("the third duplicate ack halves ssthresh and retransmits the head") {
  HalfFixture fx;
  fx.half.force_established(5000, 900);
  fx.half.force_cc(CcState::CongestionAvoidance, 20'440, 20'440, 65535);
  fx.half.app_supply(20'440);
  fx.half.on_ack(5000, 65535, 0, false);
  CHECK(fx.half.data_outstanding() == 20'440);
  fx.half.outbox().clear();

  fx.half.on_ack(5000, 65535, 100);
  fx.half.on_ack(5000, 65535, 110);
  CHECK(fx.half.cc_state() == CcState::CongestionAvoidance);
  CHECK(fx.half.outbox().empty());
  fx.half.on_ack(5000, 65535, 120);
  CHECK(fx.half.cc_state() == CcState::FastRecovery);
  CHECK(fx.half.ssthresh() == 10'220);
  CHECK(fx.half.cwnd() == 10'220 + 3 * 1460);
  REQUIRE_FALSE(fx.half.outbox().empty());
  CHECK(fx.half.outbox().front().seq == 5000);
  CHECK(fx.half.outbox().front().retransmit);
  CHECK(fx.half.outbox().front().payload_len == 1460);
}

TEST_CASE("timeout shrinks to one segment and doubles the timer") {
  HalfFixture fx;
  fx.half.force_established(100, 1);
  fx.half.force_cc(CcState::CongestionAvoidance, 14'600, 20'000, 65535);
  fx.half.app_supply(14'600);
  fx.half.on_ack(100, 65535, 0, false);
  fx.half.outbox().clear();

  fx.half.on_timeout(1'000'000);
  CHECK(fx.half.ssthresh() == 7'300);
  CHECK(fx.half.cwnd() == 1'460);
  CHECK(fx.half.cc_state() == CcState::SlowStart);
  CHECK(fx.half.rto_us() == 400'000);
  REQUIRE_FALSE(fx.half.outbox().empty());
  CHECK(fx.half.outbox().front().seq == 100);

  SUBCASE("a second consecutive timeout doubles again, up to the cap") {
    fx.half.on_timeout(1'400'000);
    CHECK(fx.half.rto_us() == 800'000);
    for (int i = 0; i < 10; ++i) {
      fx.half.on_timeout(2'000'000 + i);
    }
    CHECK(fx.half.rto_us() == 64 * 200'000);
  }
}

TEST_CASE("an idle flow arms no retransmission timer") {
  HalfFixture fx;
  fx.half.force_established(1, 1);
  CHECK_FALSE(fx.half.rto_deadline().has_value());
  fx.half.app_supply(1000);
  fx.half.on_ack(1, 65535, 50, false);  // sends, arms
  CHECK(fx.half.rto_deadline().has_value());
  fx.half.on_ack(1001, 65535, 100);  // everything acked, disarms
  CHECK_FALSE(fx.half.rto_deadline().has_value());
}

TEST_CASE("receiver acks every in-order segment at the advertised window") {
  HalfFixture fx;
  fx.half.force_established(1, 700);
  fx.half.on_data(700, 1460, false, 10);
  REQUIRE(fx.half.outbox().size() == 1);
  CHECK(fx.half.outbox()[0].ack == 700 + 1460);
  CHECK(fx.half.outbox()[0].window == 65535);
  CHECK(fx.half.delivered_payload() == 1460);
}

TEST_CASE("out-of-order data produces duplicate acks and reassembles later") {
  HalfFixture fx;
  fx.half.force_established(1, 700);
  fx.half.on_data(700 + 1460, 1460, false, 10);  // hole at 700
  REQUIRE(fx.half.outbox().size() == 1);
  CHECK(fx.half.outbox()[0].ack == 700);  // duplicate ack
  CHECK(fx.half.delivered_payload() == 0);
  fx.half.outbox().clear();

  fx.half.on_data(700, 1460, false, 20);  // hole filled, both consumed
  REQUIRE(fx.half.outbox().size() == 1);
  CHECK(fx.half.outbox()[0].ack == 700 + 2 * 1460);
  CHECK(fx.half.delivered_payload() == 2 * 1460);
}

TEST_CASE("a FIN is acked and answered by the receiver's own FIN") {
  HalfFixture fx;
  fx.half.force_established(1, 700);
  fx.half.on_data(700, 0, true, 10);
  REQUIRE(fx.half.outbox().size() >= 2);
  CHECK(fx.half.outbox()[0].ack == 701);  // FIN occupies one sequence slot
  bool fin_emitted = false;
  for (const auto& seg : fx.half.outbox()) {
    fin_emitted = fin_emitted || (seg.flags & wirecodec::kFlagFin);
  }
  CHECK(fin_emitted);  // sequential close
  CHECK(fx.half.phase() == ConnPhase::LastAck);
}

TEST_CASE("clean handshake, transfer and teardown over the loopback") {
  Loopback lb;
  lb.start(230, 11'500);
  lb.run(60'000'000);
  REQUIRE(lb.client.fully_closed());
  CHECK(lb.server.delivered_payload() == 230);
  CHECK(lb.client.delivered_payload() == 11'500);
  CHECK(lb.safety.violations == 0);
  // uncongested: handshake + transfer + close in a handful of RTTs
  CHECK(lb.now < 3'000);
}

TEST_CASE("a dropped data packet costs at least the 200 ms timer floor") {
  Loopback lb;
  lb.forced_data_drops = 1;  // the request, the only segment in flight
  lb.start(230, 11'500);
  lb.run(60'000'000);
  REQUIRE(lb.client.fully_closed());
  CHECK(lb.now >= 200'000);
  CHECK(lb.client.delivered_payload() == 11'500);
}

TEST_CASE("streams survive random loss intact, across seeds") {
  for (uint64_t seed = 1; seed <= 40; ++seed) {
    Loopback lb;
    lb.rng.seed(seed);
    lb.drop_prob = 0.10;
    lb.start(230, 23'000);
    lb.run(120'000'000);
    CAPTURE(seed);
    REQUIRE(lb.client.fully_closed());
    // Completion certifies stream equality: the client's FIN sits exactly
    // after the request bytes, the server's after the response bytes, and
    // both were consumed in sequence.
    CHECK(lb.server.delivered_payload() == 230);
    CHECK(lb.client.delivered_payload() == 23'000);
    CHECK(lb.safety.violations == 0);
  }
}

TEST_CASE("no spurious timeouts without loss when the floor exceeds the rtt") {
  Loopback lb;
  lb.delay_us = 5'000;  // rtt 10 ms, far below the 200 ms floor
  lb.start(230, 50'000);
  lb.run(60'000'000);
  REQUIRE(lb.client.fully_closed());
  CHECK(lb.client.delivered_payload() == 50'000);
  // with zero loss the transfer is paced purely by the window growth
  CHECK(lb.now < 100'000);
}

namespace {

// Bare-bones session environment: connections exist but nothing moves, so
// the test controls every timer by hand.
struct StubEnv final : SessionEnv {
  std::vector<std::unique_ptr<TcpHalf>> halves;
  SafetyStats safety;
  TcpConfig cfg;
  simengine::SimTime clock = 0;

  std::pair<TcpHalf*, TcpHalf*> open_connection(uint32_t, uint32_t) override {
    halves.push_back(std::make_unique<TcpHalf>(cfg, 1, 1000, 2, 80, &safety));
    halves.push_back(std::make_unique<TcpHalf>(cfg, 2, 80, 1, 1000, &safety));
    return {halves[halves.size() - 2].get(), halves.back().get()};
  }
  simengine::SimTime now() const override { return clock; }
  void activate(TcpHalf*) override {}
};

}  // namespace

TEST_CASE("a dying connection records the never-finished sentinel") {
  StubEnv env;
  std::vector<FctRecord> sink;
  MiceSession::Params params;
  params.client_id = 7;
  params.request_count = 1;
  params.request_bytes = 230;
  params.response_bytes = 11'500;
  MiceSession session(env, params, sink);
  session.start();
  REQUIRE(env.halves.size() == 2);
  TcpHalf& client = *env.halves[0];

  // The SYN goes nowhere; exhaust the retransmission budget.
  for (int i = 0; i <= 15; ++i) {
    CHECK_FALSE(client.dead());
    env.clock += client.rto_us();
    client.on_timeout(env.clock);
  }
  CHECK(client.dead());
  REQUIRE(sink.size() == 1);
  CHECK(sink[0].client_id == 7);
  CHECK(sink[0].request_idx == 0);
  CHECK_FALSE(sink[0].completed);
  CHECK(sink[0].fct_us == kFctNeverFinished);
  CHECK(session.finished());
}

TEST_SUITE_END();
