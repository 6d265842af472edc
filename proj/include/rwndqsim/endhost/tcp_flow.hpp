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

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "rwndqsim/simengine/time.hpp"
#include "rwndqsim/wirecodec/tcp_segment.hpp"

namespace rwndqsim::endhost {

struct TcpConfig {
  uint32_t mss = 1460;
  uint64_t rto_min_us = 200'000;   // Linux default RTO floor
  uint32_t rto_cap_factor = 64;    // backoff ceiling = factor * rto_min
  uint32_t initial_cwnd_segments = 10;
  uint32_t max_retransmits = 15;   // consecutive; beyond this the flow dies
  uint16_t advertised_window = 65535;
  bool delayed_ack = false;        // reserved; acks are immediate when false
};

enum class CcState : uint8_t {
  SlowStart,
  CongestionAvoidance,
  FastRecovery,
  Closed,
};

enum class ConnPhase : uint8_t {
  Closed,
  SynSent,
  SynRcvd,
  Established,
  FinWait1,
  FinWait2,
  CloseWait,
  LastAck,
  Closing,
  Done,  // both directions closed cleanly
  Dead,  // gave up after max_retransmits
};

// Sender-side flow-control accounting, shared across all flows of a run.
// `violations` counts transmissions that would have pushed the unacked
// payload past min(cwnd, peer_rwnd) at send time.
struct SafetyStats {
  uint64_t send_checks = 0;
  uint64_t violations = 0;
};

// A segment this endpoint wants on the wire. The host layer turns it into
// packet bytes and injects it into the node's forwarding path.
struct TxSegment {
  uint32_t seq = 0;
  uint32_t ack = 0;
  uint8_t flags = 0;
  uint16_t window = 0;
  uint32_t payload_len = 0;
  bool retransmit = false;
};

// One endpoint of a TCP connection: a new-reno-style sender plus a
// cumulative-ACK receiver over the same segment stream. The class is a pure
// state machine -- packets come in through on_segment, outgoing segments
// accumulate in the outbox, and the single retransmission timer is exposed
// as a deadline for the host layer to arm.
class TcpHalf {
 public:
  TcpHalf(const TcpConfig& cfg, uint32_t local_ip, uint16_t local_port,
          uint32_t remote_ip, uint16_t remote_port, SafetyStats* safety);

  // --- application surface ---
  void open_active(simengine::SimTime now);  // client side: emit SYN
  void app_supply(uint64_t bytes);           // queue bytes for transmission
  void app_supply_unbounded();
  void app_close(simengine::SimTime now);    // FIN once queued data drains
  // Close automatically once the peer's FIN arrives and nothing is pending
  // (sequential close). Defaults to on; elephants keep it on too since they
  // only close by explicit app_close.
  void set_auto_close(bool v) { auto_close_ = v; }

  // --- wire surface ---
  void on_segment(const wirecodec::TcpSegmentView& seg, simengine::SimTime now);

  // ACK-side processing: window update, duplicate detection, new-reno cwnd
  // evolution, and send-permission refresh. `countable_dup` is false when
  // the enclosing segment carried payload or flags (such acks are not
  // duplicates in the fast-retransmit sense).
  void on_ack(uint32_t ack_seq, uint16_t window_field, simengine::SimTime now,
              bool countable_dup = true);

  // Retransmission timeout: back off, shrink to one segment, retransmit the
  // head-of-line segment, restart slow-start.
  void on_timeout(simengine::SimTime now);

  // Receiver side: cumulative ACK emission, out-of-order buffering, FIN
  // sequencing. Payload contents are virtual; only ranges are tracked.
  void on_data(uint32_t seq, uint32_t len, bool fin, simengine::SimTime now);

  std::vector<TxSegment>& outbox() { return outbox_; }
  std::optional<simengine::SimTime> rto_deadline() const;

  // --- inspection ---
  uint32_t cwnd() const { return cwnd_; }
  uint32_t ssthresh() const { return ssthresh_; }
  uint32_t peer_rwnd() const { return peer_rwnd_; }
  CcState cc_state() const { return cc_; }
  ConnPhase phase() const { return phase_; }
  uint64_t rto_us() const { return rto_; }
  uint32_t dupack_count() const { return dupacks_; }
  uint32_t snd_una() const { return snd_una_; }
  uint32_t snd_nxt() const { return snd_nxt_; }
  uint32_t rcv_nxt() const { return rcv_nxt_; }
  uint64_t delivered_payload() const { return delivered_; }
  uint64_t bytes_sent_total() const { return payload_sent_total_; }
  uint32_t data_outstanding() const;
  bool fully_closed() const { return phase_ == ConnPhase::Done; }
  bool dead() const { return phase_ == ConnPhase::Dead; }

  uint32_t local_ip() const { return local_ip_; }
  uint16_t local_port() const { return local_port_; }
  uint32_t remote_ip() const { return remote_ip_; }
  uint16_t remote_port() const { return remote_port_; }

  // --- app callbacks ---
  std::function<void(uint64_t delivered_total)> on_deliver;
  std::function<void()> on_closed;
  std::function<void()> on_dead;

  // Test hooks: place the machine directly into a steady data-transfer
  // state without a handshake.
  void force_established(uint32_t snd_start, uint32_t rcv_start);
  void force_cc(CcState st, uint32_t cwnd, uint32_t ssthresh,
                uint32_t peer_rwnd);

 private:
  void try_send(simengine::SimTime now);
  void emit(TxSegment seg);
  void emit_ack();
  void retransmit_head(simengine::SimTime now);
  void enter_established(simengine::SimTime now);
  void handle_peer_fin(simengine::SimTime now);
  void maybe_auto_close(simengine::SimTime now);
  void finish_if_done();
  void arm_timer(simengine::SimTime now);
  void restart_timer(simengine::SimTime now);
  void cancel_timer();
  void take_rtt_sample(uint64_t sample_us);
  uint64_t app_pending() const;

  TcpConfig cfg_;
  uint32_t local_ip_, remote_ip_;
  uint16_t local_port_, remote_port_;
  SafetyStats* safety_;

  ConnPhase phase_ = ConnPhase::Closed;
  CcState cc_ = CcState::SlowStart;

  // send side
  uint32_t iss_ = 0;
  uint32_t snd_una_ = 0;
  uint32_t snd_nxt_ = 0;
  uint32_t cwnd_ = 0;
  uint32_t ssthresh_ = 0x7fffffff;
  uint32_t peer_rwnd_ = 0;
  uint32_t dupacks_ = 0;
  uint32_t recover_ = 0;
  uint64_t app_limit_ = 0;  // bytes the app has asked to send in total
  uint64_t app_sent_ = 0;
  uint64_t payload_sent_total_ = 0;
  bool unbounded_source_ = false;
  bool close_requested_ = false;
  bool fin_sent_ = false;
  bool fin_acked_ = false;
  uint32_t fin_seq_ = 0;

  // timer / rtt
  bool timer_armed_ = false;
  simengine::SimTime rto_deadline_ = 0;
  uint64_t rto_ = 0;
  uint64_t srtt_ = 0;
  uint64_t rttvar_ = 0;
  bool rtt_valid_ = false;
  bool rtt_timing_ = false;
  uint32_t rtt_seq_ = 0;
  simengine::SimTime rtt_sent_at_ = 0;
  uint32_t consecutive_retx_ = 0;

  // receive side
  uint32_t irs_ = 0;
  uint32_t rcv_nxt_ = 0;
  std::map<uint32_t, uint32_t> ooo_;  // out-of-order ranges, seq -> len
  bool peer_fin_seen_ = false;
  uint32_t peer_fin_seq_ = 0;
  bool peer_fin_consumed_ = false;
  uint64_t delivered_ = 0;

  bool auto_close_ = true;
  std::vector<TxSegment> outbox_;
};

// Sequence-number comparisons with wraparound.
inline bool seq_lt(uint32_t a, uint32_t b) {
  return static_cast<int32_t>(a - b) < 0;
}
inline bool seq_le(uint32_t a, uint32_t b) {
  return static_cast<int32_t>(a - b) <= 0;
}
inline bool seq_gt(uint32_t a, uint32_t b) {
  return static_cast<int32_t>(a - b) > 0;
}
inline bool seq_ge(uint32_t a, uint32_t b) {
  return static_cast<int32_t>(a - b) >= 0;
}

}  // namespace rwndqsim::endhost
