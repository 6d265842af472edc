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

#include <random>

#include "rwndqsim/rwndq/daemon.hpp"
#include "rwndqsim/rwndq/port_state.hpp"
#include "rwndqsim/wirecodec/checksum.hpp"
#include "rwndqsim/wirecodec/tcp_segment.hpp"

using namespace rwndqsim;
using namespace rwndqsim::rwndq;
using wirecodec::build_segment;
using wirecodec::kFlagAck;
using wirecodec::kFlagFin;
using wirecodec::kFlagSyn;
using wirecodec::parse_segment;
using wirecodec::SegmentSpec;
using wirecodec::TcpSegmentView;

namespace {

RwndqConfig test_config() {
  return RwndqConfig{};  // M=5, 100us ticks, target 1/4, min 536, mss 1460
}

PortState port_with(uint32_t conncount, uint32_t wnd) {
  PortState ps = make_port_state(test_config(), 85'300);
  ps.conncount = conncount;
  ps.wnd = wnd;
  return ps;
}

TcpSegmentView parse(std::vector<uint8_t>& buf) {
  return std::get<TcpSegmentView>(parse_segment(buf));
}

std::vector<uint8_t> ack_segment(uint16_t window, uint8_t extra_flags = 0,
                                 uint32_t src_ip = 0x0a000001,
                                 uint32_t dst_ip = 0x0a000002,
                                 uint16_t src_port = 1000,
                                 uint16_t dst_port = 2000) {
  SegmentSpec spec;
  spec.src_ip = src_ip;
  spec.dst_ip = dst_ip;
  spec.src_port = src_port;
  spec.dst_port = dst_port;
  spec.flags = static_cast<uint8_t>(kFlagAck | extra_flags);
  spec.window = window;
  return build_segment(spec);
}

}  // namespace

TEST_SUITE_BEGIN("rwndq");

TEST_CASE("port state derives the target from the queue limit") {
  auto ps = make_port_state(test_config(), 85'300);
  CHECK(ps.target == 21'325);  // 25% of the buffer
  CHECK(ps.limit == 85'300);
  CHECK(ps.conncount == 0);
  CHECK_FALSE(ps.slowstart);
}

TEST_CASE("first flow seeds the budget and enters slow-start") {
  auto ps = port_with(0, 40'000);
  register_flow(ps);
  CHECK(ps.conncount == 1);
  CHECK(ps.localwnd == 21'325);
  CHECK(ps.wnd == 40'000);  // count guard: share untouched below two flows
  CHECK(ps.slowstart);
  CHECK(ps.incr == 0);
  CHECK(ps.update_count == 0);
}

TEST_CASE("flow-open rescales the share by (n-1)/n") {
  SUBCASE("1 -> 2 halves it") {
    auto ps = port_with(1, 40'000);
    register_flow(ps);
    CHECK(ps.conncount == 2);
    CHECK(ps.wnd == 20'000);
  }
  SUBCASE("3 -> 4") {
    auto ps = port_with(3, 30'000);
    register_flow(ps);
    CHECK(ps.conncount == 4);
    CHECK(ps.wnd == 22'500);
  }
}

TEST_CASE("flow-close rescales the share by (n+1)/n") {
  SUBCASE("2 -> 1 doubles it") {
    auto ps = port_with(2, 20'000);
    deregister_flow(ps);
    CHECK(ps.conncount == 1);
    CHECK(ps.wnd == 40'000);
  }
  SUBCASE("1 -> 0 leaves the share alone") {
    auto ps = port_with(1, 40'000);
    deregister_flow(ps);
    CHECK(ps.conncount == 0);
    CHECK(ps.wnd == 40'000);
  }
  SUBCASE("4 -> 3") {
    auto ps = port_with(4, 22'500);
    deregister_flow(ps);
    CHECK(ps.conncount == 3);
    CHECK(ps.wnd == 30'000);
  }
}

TEST_CASE("close on an idle port is an anomaly, not an underflow") {
  auto ps = port_with(0, 12'345);
  deregister_flow(ps);
  CHECK(ps.conncount == 0);
  CHECK(ps.wnd == 12'345);
  CHECK(ps.anomalies == 1);
}

TEST_CASE("tick accumulation follows the slow-start exit rules") {
  const auto cfg = test_config();
  SUBCASE("slow-start adds two segments") {
    auto ps = port_with(1, 21'325);
    ps.slowstart = true;
    tick(ps, 0, cfg);
    CHECK(ps.incr == 2 * 1460);
    CHECK(ps.slowstart);
  }
  SUBCASE("at target the deviation is zero") {
    auto ps = port_with(1, 21'325);
    ps.slowstart = false;
    tick(ps, ps.target, cfg);
    CHECK(ps.incr == 0);
  }
  SUBCASE("the exit test runs before accumulation") {
    auto ps = port_with(1, 21'325);
    ps.slowstart = true;
    tick(ps, ps.target, cfg);  // backlog == target ends slow-start
    CHECK_FALSE(ps.slowstart);
    CHECK(ps.incr == 0);  // this same tick accumulated target - backlog
  }
  SUBCASE("idle port tick is a no-op") {
    auto ps = port_with(0, 21'325);
    ps.incr = 99;
    tick(ps, 50'000, cfg);
    CHECK(ps.incr == 99);
    CHECK(ps.update_count == 0);
  }
}

TEST_CASE("the M-th tick commits the averaged deviation and clamps") {
  const auto cfg = test_config();
  SUBCASE("average deviation moves localwnd and re-derives the share") {
    auto ps = port_with(2, 10'000);
    ps.localwnd = 30'000;
    ps.slowstart = false;
    for (int i = 0; i < 5; ++i) {
      tick(ps, ps.target - 1000, cfg);  // deviation +1000 per tick
    }
    CHECK(ps.commits == 1);
    CHECK(ps.localwnd == 31'000);
    CHECK(ps.wnd == 15'500);
    CHECK(ps.incr == 0);
    CHECK(ps.update_count == 0);
  }
  SUBCASE("upper clamp at 65535 per flow") {
    auto ps = port_with(1, 21'325);
    ps.localwnd = 60'000;
    ps.slowstart = false;
    for (int i = 0; i < 5; ++i) {
      tick(ps, 0, cfg);  // deviation +target per tick
    }
    CHECK(ps.localwnd == 65'535);
    CHECK(ps.wnd == 65'535);
  }
  SUBCASE("lower clamp at tcp_min_mss per flow") {
    auto ps = port_with(3, 5'000);
    ps.localwnd = 6'000;
    ps.slowstart = false;
    for (int i = 0; i < 5; ++i) {
      tick(ps, 85'300, cfg);  // deviation -(limit - target) per tick
    }
    CHECK(ps.localwnd == 536 * 3);
    CHECK(ps.wnd == 536);
  }
}

TEST_CASE("ack rewrite honors the flag and the comparison guard") {
  auto ps = port_with(4, 8'000);
  SUBCASE("larger advertised window is clamped to the share") {
    auto buf = ack_segment(65'535);
    auto view = parse(buf);
    CHECK(maybe_rewrite_ack(ps, view));
    CHECK(view.window() == 8'000);
    CHECK(view.checksum() == wirecodec::tcp_checksum_full(buf));
  }
  SUBCASE("smaller advertised window passes untouched") {
    auto buf = ack_segment(5'000);
    auto before = buf;
    auto view = parse(buf);
    CHECK_FALSE(maybe_rewrite_ack(ps, view));
    CHECK(buf == before);
  }
  SUBCASE("segments without the ACK flag pass untouched") {
    SegmentSpec spec;
    spec.window = 65'535;
    spec.payload_len = 100;
    auto buf = build_segment(spec);
    auto before = buf;
    auto view = parse(buf);
    CHECK_FALSE(maybe_rewrite_ack(ps, view));
    CHECK(buf == before);
  }
}

TEST_CASE("rewrite never enlarges the window field") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<uint32_t> word(0, 65535);
  for (int i = 0; i < 2000; ++i) {
    auto ps = port_with(1 + static_cast<uint32_t>(word(rng)) % 50,
                        static_cast<uint32_t>(word(rng)));
    auto buf = ack_segment(static_cast<uint16_t>(word(rng)));
    auto view = parse(buf);
    const uint16_t before = view.window();
    maybe_rewrite_ack(ps, view);
    CHECK(view.window() <= before);
  }
}

TEST_CASE("intercept applies open, close and rewrite in that order") {
  const auto cfg = test_config();
  const std::vector<uint64_t> limits{85'300, 85'300};

  SUBCASE("SYN-ACK opens both ports, then its own ACK bit is rewritten") {
    SwitchDaemon daemon(cfg, limits);
    // Preload one established flow on the ingress port so the rescale on
    // open is observable in the rewritten value.
    daemon.port(0).conncount = 1;
    daemon.port(0).wnd = 30'000;
    auto buf = ack_segment(65'535, kFlagSyn);
    auto view = parse(buf);
    auto result = daemon.intercept(view, 0, 1);
    CHECK(result.counted_open);
    CHECK(daemon.port(0).conncount == 2);
    CHECK(daemon.port(1).conncount == 1);
    CHECK(daemon.port(0).wnd == 15'000);  // rescaled before the rewrite
    CHECK(result.rewritten);
    CHECK(view.window() == 15'000);
  }

  SUBCASE("FIN+ACK closes the ingress flow, then the rewrite check runs") {
    SwitchDaemon daemon(cfg, limits);
    auto open_buf = ack_segment(65'535, kFlagSyn);
    auto open_view = parse(open_buf);
    daemon.intercept(open_view, 0, 1);
    daemon.port(0).wnd = 10'000;

    auto fin_buf = ack_segment(65'535, kFlagFin);
    auto fin_view = parse(fin_buf);
    auto result = daemon.intercept(fin_view, 0, 1);
    CHECK(result.counted_close);
    CHECK(daemon.port(0).conncount == 0);
    CHECK(result.rewritten);  // wnd 10000 < 65535 still gates the field
    CHECK(fin_view.window() == 10'000);
  }

  SUBCASE("UDP never reaches the daemon; non-ACK TCP is left alone") {
    SwitchDaemon daemon(cfg, limits);
    SegmentSpec spec;
    spec.flags = 0;
    spec.window = 65'535;
    auto buf = build_segment(spec);
    auto before = buf;
    auto view = parse(buf);
    auto result = daemon.intercept(view, 0, 1);
    CHECK_FALSE(result.counted_open);
    CHECK_FALSE(result.rewritten);
    CHECK(buf == before);
  }
}

TEST_CASE("retransmitted SYN-ACKs and FINs are counted once per flow") {
  const auto cfg = test_config();
  SwitchDaemon daemon(cfg, std::vector<uint64_t>{85'300, 85'300});

  auto synack = ack_segment(65'535, kFlagSyn);
  for (int i = 0; i < 3; ++i) {
    auto view = parse(synack);
    daemon.intercept(view, 0, 1);
  }
  CHECK(daemon.port(0).conncount == 1);
  CHECK(daemon.port(1).conncount == 1);

  // Each direction's FIN decrements its ingress port exactly once; an RST
  // after the FIN in the same direction adds nothing.
  auto fin_fwd = ack_segment(65'535, kFlagFin, 0x0a000001, 0x0a000002);
  auto fin_rev = ack_segment(65'535, kFlagFin, 0x0a000002, 0x0a000001, 2000,
                             1000);
  for (int i = 0; i < 2; ++i) {
    auto view = parse(fin_fwd);
    daemon.intercept(view, 0, 1);
  }
  CHECK(daemon.port(0).conncount == 0);
  CHECK(daemon.port(1).conncount == 1);
  {
    auto view = parse(fin_rev);
    daemon.intercept(view, 1, 0);
  }
  CHECK(daemon.port(1).conncount == 0);
  CHECK(daemon.total_anomalies() == 0);
}

TEST_CASE("locally originated legs skip the missing port side") {
  const auto cfg = test_config();
  SwitchDaemon daemon(cfg, std::vector<uint64_t>{85'300});
  auto synack = ack_segment(65'535, kFlagSyn);
  auto view = parse(synack);
  auto result = daemon.intercept(view, std::nullopt, 0);
  CHECK(result.counted_open);
  CHECK(daemon.port(0).conncount == 1);
  CHECK_FALSE(result.rewritten);  // no ingress port, no rewrite
}

TEST_CASE("commit_schedule rearms only while flows are active") {
  const auto cfg = test_config();
  CHECK_FALSE(commit_schedule(cfg, false, 5'000).has_value());
  auto deadline = commit_schedule(cfg, true, 5'000);
  REQUIRE(deadline.has_value());
  CHECK(*deadline == 5'100);
}

TEST_CASE("randomized state machine holds every invariant, 10^5 events") {
  const auto cfg = test_config();
  auto ps = make_port_state(cfg, 85'300);
  std::mt19937_64 rng(20260808);
  std::uniform_int_distribution<int> op(0, 9);
  std::uniform_int_distribution<uint64_t> backlog(0, 85'300);

  uint64_t opens = 0;
  uint64_t closes = 0;
  uint32_t slowstart_entries = 0;
  bool was_slowstart = false;

  for (int i = 0; i < 100'000; ++i) {
    const int o = op(rng);
    if (o < 3) {
      const uint32_t before = ps.conncount;
      const uint64_t product_before =
          static_cast<uint64_t>(ps.wnd) * ps.conncount;
      register_flow(ps);
      ++opens;
      CHECK(ps.conncount == before + 1);
      if (before >= 1) {
        // Join near-conservation: the share re-split loses less than one
        // byte per flow to truncation.
        const uint64_t product_after =
            static_cast<uint64_t>(ps.wnd) * ps.conncount;
        CHECK(product_after <= product_before);
        CHECK(product_before - product_after < ps.conncount);
      }
    } else if (o < 6) {
      const uint32_t before = ps.conncount;
      const uint64_t product_before =
          static_cast<uint64_t>(ps.wnd) * ps.conncount;
      const uint64_t anomalies_before = ps.anomalies;
      deregister_flow(ps);
      if (before == 0) {
        CHECK(ps.conncount == 0);
        CHECK(ps.anomalies == anomalies_before + 1);
      } else {
        ++closes;
        CHECK(ps.conncount == before - 1);
        if (ps.conncount >= 1) {
          const uint64_t product_after =
              static_cast<uint64_t>(ps.wnd) * ps.conncount;
          CHECK(product_after <= product_before);
          CHECK(product_before - product_after < ps.conncount);
        }
      }
    } else {
      const uint64_t commits_before = ps.commits;
      tick(ps, backlog(rng), cfg);
      if (ps.commits != commits_before && ps.conncount > 0) {
        // Clamp bounds hold immediately after every commit.
        CHECK(ps.localwnd >=
              static_cast<int64_t>(cfg.tcp_min_mss) * ps.conncount);
        CHECK(ps.localwnd <= static_cast<int64_t>(65'535) * ps.conncount);
        CHECK(ps.wnd ==
              static_cast<uint32_t>(ps.localwnd / ps.conncount));
        CHECK(ps.incr == 0);
        CHECK(ps.update_count == 0);
      }
    }
    // Flow-count conservation across the whole history.
    CHECK(ps.conncount == opens - closes);
    // Slow-start only begins on idle-to-active transitions.
    if (ps.slowstart && !was_slowstart) {
      ++slowstart_entries;
      CHECK(ps.conncount == 1);
    }
    was_slowstart = ps.slowstart;
  }
  CHECK(slowstart_entries > 0);
}

TEST_SUITE_END();
