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

#include "rwndqsim/endhost/tcp_flow.hpp"

#include <algorithm>

namespace rwndqsim::endhost {

using wirecodec::kFlagAck;
using wirecodec::kFlagFin;
using wirecodec::kFlagSyn;

TcpHalf::TcpHalf(const TcpConfig& cfg, uint32_t local_ip, uint16_t local_port,
                 uint32_t remote_ip, uint16_t remote_port, SafetyStats* safety)
    : cfg_(cfg),
      local_ip_(local_ip),
      remote_ip_(remote_ip),
      local_port_(local_port),
      remote_port_(remote_port),
      safety_(safety) {
  cwnd_ = cfg_.initial_cwnd_segments * cfg_.mss;
  peer_rwnd_ = cfg_.advertised_window;
  rto_ = cfg_.rto_min_us;
}

uint64_t TcpHalf::app_pending() const {
  if (unbounded_source_) {
    return ~0ull;
  }
  return app_limit_ - app_sent_;
}

uint32_t TcpHalf::data_outstanding() const {
  uint32_t seq_out = snd_nxt_ - snd_una_;
  if (snd_una_ == iss_ && snd_nxt_ != snd_una_) {
    seq_out -= 1;  // SYN still unacknowledged
  }
  if (fin_sent_ && !fin_acked_) {
    seq_out -= 1;
  }
  return seq_out;
}

void TcpHalf::open_active(simengine::SimTime now) {
  iss_ = 1;
  snd_una_ = iss_;
  snd_nxt_ = iss_ + 1;
  phase_ = ConnPhase::SynSent;
  TxSegment syn;
  syn.seq = iss_;
  syn.flags = kFlagSyn;
  syn.window = cfg_.advertised_window;
  emit(syn);
  rtt_timing_ = true;
  rtt_seq_ = snd_nxt_;
  rtt_sent_at_ = now;
  arm_timer(now);
}

void TcpHalf::app_supply(uint64_t bytes) { app_limit_ += bytes; }

void TcpHalf::app_supply_unbounded() { unbounded_source_ = true; }

void TcpHalf::app_close(simengine::SimTime now) {
  if (close_requested_) {
    return;
  }
  if (unbounded_source_) {
    unbounded_source_ = false;
    app_limit_ = app_sent_;
  }
  close_requested_ = true;
  try_send(now);
}

void TcpHalf::on_segment(const wirecodec::TcpSegmentView& seg,
                         simengine::SimTime now) {
  if (phase_ == ConnPhase::Done) {
    // Stand-in for TIME_WAIT: a retransmitted FIN means our final ACK was
    // lost, so answer it again.
    if (seg.fin()) {
      emit_ack();
    }
    return;
  }
  if (phase_ == ConnPhase::Dead) {
    return;
  }
  if (seg.rst()) {
    phase_ = ConnPhase::Dead;
    cc_ = CcState::Closed;
    cancel_timer();
    if (on_dead) {
      on_dead();
    }
    return;
  }

  switch (phase_) {
    case ConnPhase::Closed:
      if (seg.syn() && !seg.ack()) {
        // Passive open.
        irs_ = seg.seq();
        rcv_nxt_ = irs_ + 1;
        peer_rwnd_ = seg.window();
        iss_ = 1;
        snd_una_ = iss_;
        snd_nxt_ = iss_ + 1;
        phase_ = ConnPhase::SynRcvd;
        TxSegment synack;
        synack.seq = iss_;
        synack.ack = rcv_nxt_;
        synack.flags = kFlagSyn | kFlagAck;
        synack.window = cfg_.advertised_window;
        emit(synack);
        rtt_timing_ = true;
        rtt_seq_ = snd_nxt_;
        rtt_sent_at_ = now;
        arm_timer(now);
      }
      return;

    case ConnPhase::SynSent:
      if (seg.syn() && seg.ack() && seg.ack_seq() == iss_ + 1) {
        snd_una_ = iss_ + 1;
        irs_ = seg.seq();
        rcv_nxt_ = irs_ + 1;
        peer_rwnd_ = seg.window();
        if (rtt_timing_ && consecutive_retx_ == 0) {
          take_rtt_sample(now - rtt_sent_at_);
        }
        rtt_timing_ = false;
        consecutive_retx_ = 0;
        phase_ = ConnPhase::Established;
        cancel_timer();
        emit_ack();
        try_send(now);
      }
      return;

    case ConnPhase::SynRcvd:
      if (seg.syn() && !seg.ack()) {
        // Duplicate SYN: our SYN-ACK was lost or is still in flight.
        retransmit_head(now);
        return;
      }
      if (seg.ack() && seq_ge(seg.ack_seq(), iss_ + 1)) {
        snd_una_ = std::max(snd_una_, iss_ + 1);
        peer_rwnd_ = seg.window();
        if (rtt_timing_ && consecutive_retx_ == 0) {
          take_rtt_sample(now - rtt_sent_at_);
        }
        rtt_timing_ = false;
        consecutive_retx_ = 0;
        phase_ = ConnPhase::Established;
        if (data_outstanding() == 0) {
          cancel_timer();
        }
        if (seg.payload_len() > 0 || seg.fin()) {
          on_data(seg.seq(), seg.payload_len(), seg.fin(), now);
        }
        try_send(now);
      }
      return;

    default:
      break;
  }

  // Established and closing phases.
  if (seg.syn() && seg.ack()) {
    // Retransmitted SYN-ACK: our handshake ACK went missing.
    emit_ack();
    return;
  }
  if (seg.ack()) {
    const bool countable =
        seg.payload_len() == 0 && !seg.syn() && !seg.fin();
    on_ack(seg.ack_seq(), seg.window(), now, countable);
  }
  if (seg.payload_len() > 0 || seg.fin()) {
    on_data(seg.seq(), seg.payload_len(), seg.fin(), now);
  }
}

void TcpHalf::on_ack(uint32_t ack_seq, uint16_t window_field,
                     simengine::SimTime now, bool countable_dup) {
  if (phase_ == ConnPhase::Done || phase_ == ConnPhase::Dead) {
    return;
  }
  if (seq_lt(ack_seq, snd_una_) || seq_gt(ack_seq, snd_nxt_)) {
    return;  // stale or impossible
  }
  peer_rwnd_ = window_field;

  if (ack_seq == snd_una_) {
    if (countable_dup && data_outstanding() > 0) {
      dupacks_ += 1;
      if (cc_ == CcState::FastRecovery) {
        cwnd_ += cfg_.mss;
      } else if (dupacks_ == 3) {
        ssthresh_ = std::max(cwnd_ / 2, 2 * cfg_.mss);
        recover_ = snd_nxt_;
        retransmit_head(now);
        cc_ = CcState::FastRecovery;
        cwnd_ = ssthresh_ + 3 * cfg_.mss;
        restart_timer(now);
      }
    }
    try_send(now);
    return;
  }

  // New data acknowledged.
  const uint32_t acked = ack_seq - snd_una_;
  const bool was_cwnd_limited =
      (snd_nxt_ - snd_una_) + cfg_.mss > cwnd_;
  snd_una_ = ack_seq;
  dupacks_ = 0;
  consecutive_retx_ = 0;
  // Forward progress clears any timeout backoff; the timer returns to the
  // smoothed estimate even when Karn's rule forbids a fresh sample.
  rto_ = rtt_valid_
             ? std::clamp<uint64_t>(srtt_ + std::max<uint64_t>(4 * rttvar_, 1),
                                    cfg_.rto_min_us,
                                    cfg_.rto_min_us * cfg_.rto_cap_factor)
             : cfg_.rto_min_us;

  if (rtt_timing_ && seq_ge(snd_una_, rtt_seq_)) {
    take_rtt_sample(now - rtt_sent_at_);
    rtt_timing_ = false;
  }

  if (cc_ == CcState::FastRecovery) {
    if (seq_ge(ack_seq, recover_)) {
      cwnd_ = ssthresh_;
      cc_ = CcState::CongestionAvoidance;
    } else {
      // Partial ack: the next hole is lost too.
      retransmit_head(now);
      cwnd_ = cwnd_ > acked ? cwnd_ - acked : cfg_.mss;
      cwnd_ += cfg_.mss;
      cwnd_ = std::max(cwnd_, cfg_.mss);
      restart_timer(now);
    }
  } else if (was_cwnd_limited) {
    if (cc_ == CcState::SlowStart) {
      cwnd_ += cfg_.mss;
      if (cwnd_ >= ssthresh_) {
        cc_ = CcState::CongestionAvoidance;
      }
    } else if (cc_ == CcState::CongestionAvoidance) {
      cwnd_ += std::max(1u, cfg_.mss * cfg_.mss / cwnd_);
    }
  }

  if (fin_sent_ && !fin_acked_ && seq_gt(snd_una_, fin_seq_)) {
    fin_acked_ = true;
    if (phase_ == ConnPhase::FinWait1) {
      phase_ = ConnPhase::FinWait2;
    }
    finish_if_done();
    if (phase_ == ConnPhase::Done || phase_ == ConnPhase::Dead) {
      return;
    }
  }

  if (snd_nxt_ == snd_una_) {
    cancel_timer();
  } else {
    restart_timer(now);
  }
  try_send(now);
}

void TcpHalf::on_timeout(simengine::SimTime now) {
  timer_armed_ = false;
  if (phase_ == ConnPhase::Done || phase_ == ConnPhase::Dead ||
      phase_ == ConnPhase::Closed) {
    return;
  }
  if (snd_nxt_ == snd_una_) {
    return;  // nothing outstanding; stale timer
  }
  consecutive_retx_ += 1;
  if (consecutive_retx_ > cfg_.max_retransmits) {
    phase_ = ConnPhase::Dead;
    cc_ = CcState::Closed;
    cancel_timer();
    if (on_dead) {
      on_dead();
    }
    return;
  }
  ssthresh_ = std::max(cwnd_ / 2, 2 * cfg_.mss);
  cwnd_ = cfg_.mss;
  cc_ = CcState::SlowStart;
  dupacks_ = 0;
  rto_ = std::min(rto_ * 2, cfg_.rto_min_us * cfg_.rto_cap_factor);
  rtt_timing_ = false;  // Karn: no samples across retransmits
  retransmit_head(now);
  restart_timer(now);
}

void TcpHalf::on_data(uint32_t seq, uint32_t len, bool fin,
                      simengine::SimTime now) {
  if (phase_ == ConnPhase::Closed || phase_ == ConnPhase::SynSent ||
      phase_ == ConnPhase::Done || phase_ == ConnPhase::Dead) {
    return;
  }
  if (fin) {
    peer_fin_seen_ = true;
    peer_fin_seq_ = seq + len;
  }
  const uint64_t delivered_before = delivered_;
  if (len > 0) {
    if (seq_le(seq, rcv_nxt_)) {
      const uint32_t end = seq + len;
      if (seq_gt(end, rcv_nxt_)) {
        delivered_ += end - rcv_nxt_;
        rcv_nxt_ = end;
      }
      // Pull any now-contiguous buffered ranges through.
      auto it = ooo_.begin();
      while (it != ooo_.end() && seq_le(it->first, rcv_nxt_)) {
        const uint32_t range_end = it->first + it->second;
        if (seq_gt(range_end, rcv_nxt_)) {
          delivered_ += range_end - rcv_nxt_;
          rcv_nxt_ = range_end;
        }
        it = ooo_.erase(it);
      }
    } else {
      // Hole: buffer the range, merging overlaps conservatively.
      auto [it, inserted] = ooo_.emplace(seq, len);
      if (!inserted && len > it->second) {
        it->second = len;
      }
    }
  }
  if (peer_fin_seen_ && !peer_fin_consumed_ && rcv_nxt_ == peer_fin_seq_) {
    rcv_nxt_ += 1;
    peer_fin_consumed_ = true;
    handle_peer_fin(now);
  }
  if (delivered_ != delivered_before && on_deliver) {
    on_deliver(delivered_);
  }
  if (phase_ == ConnPhase::Done || phase_ == ConnPhase::Dead) {
    return;
  }
  emit_ack();
  maybe_auto_close(now);
}

void TcpHalf::handle_peer_fin(simengine::SimTime now) {
  switch (phase_) {
    case ConnPhase::Established:
      phase_ = ConnPhase::CloseWait;
      break;
    case ConnPhase::FinWait1:
      phase_ = ConnPhase::Closing;
      finish_if_done();
      break;
    case ConnPhase::FinWait2:
      // Their FIN after ours was acknowledged; the final ACK goes out and
      // the connection is done (TIME_WAIT is not modeled).
      emit_ack();
      phase_ = ConnPhase::Done;
      cancel_timer();
      if (on_closed) {
        on_closed();
      }
      break;
    default:
      break;
  }
  (void)now;
}

void TcpHalf::maybe_auto_close(simengine::SimTime now) {
  if (auto_close_ && phase_ == ConnPhase::CloseWait && !close_requested_) {
    app_close(now);
  }
}

void TcpHalf::finish_if_done() {
  if (phase_ == ConnPhase::Done || phase_ == ConnPhase::Dead) {
    return;
  }
  if (fin_sent_ && fin_acked_ && peer_fin_consumed_) {
    phase_ = ConnPhase::Done;
    cancel_timer();
    if (on_closed) {
      on_closed();
    }
  }
}

void TcpHalf::try_send(simengine::SimTime now) {
  if (phase_ != ConnPhase::Established && phase_ != ConnPhase::CloseWait) {
    return;
  }
  const uint32_t budget = std::min(cwnd_, static_cast<uint32_t>(peer_rwnd_));
  for (;;) {
    const uint32_t in_flight = data_outstanding();
    const uint32_t avail = budget > in_flight ? budget - in_flight : 0;
    const uint64_t len64 = std::min<uint64_t>(
        std::min<uint64_t>(cfg_.mss, avail), app_pending());
    const auto len = static_cast<uint32_t>(len64);
    if (len == 0) {
      break;
    }
    // Bulk senders do not dribble: a sub-MSS segment goes out only when
    // nothing is in flight (tiny fair-share windows keep progressing) or
    // when it is the final piece of application data.
    if (len < cfg_.mss && in_flight > 0 && len < app_pending()) {
      break;
    }
    safety_->send_checks += 1;
    if (in_flight + len > budget) {
      safety_->violations += 1;
    }
    TxSegment data;
    data.seq = snd_nxt_;
    data.ack = rcv_nxt_;
    data.flags = kFlagAck;
    data.window = cfg_.advertised_window;
    data.payload_len = len;
    emit(data);
    if (!rtt_timing_) {
      rtt_timing_ = true;
      rtt_seq_ = snd_nxt_ + len;
      rtt_sent_at_ = now;
    }
    snd_nxt_ += len;
    app_sent_ += len;
    payload_sent_total_ += len;
    if (!timer_armed_) {
      arm_timer(now);
    }
  }

  if (close_requested_ && !fin_sent_ && !unbounded_source_ &&
      app_sent_ == app_limit_) {
    TxSegment fin;
    fin.seq = snd_nxt_;
    fin.ack = rcv_nxt_;
    fin.flags = kFlagFin | kFlagAck;
    fin.window = cfg_.advertised_window;
    emit(fin);
    fin_seq_ = snd_nxt_;
    snd_nxt_ += 1;
    fin_sent_ = true;
    phase_ = phase_ == ConnPhase::CloseWait ? ConnPhase::LastAck
                                            : ConnPhase::FinWait1;
    if (!timer_armed_) {
      arm_timer(now);
    }
  }
}

void TcpHalf::retransmit_head(simengine::SimTime now) {
  (void)now;
  TxSegment seg;
  seg.window = cfg_.advertised_window;
  seg.retransmit = true;
  switch (phase_) {
    case ConnPhase::SynSent:
      seg.seq = iss_;
      seg.flags = kFlagSyn;
      emit(seg);
      return;
    case ConnPhase::SynRcvd:
      seg.seq = iss_;
      seg.ack = rcv_nxt_;
      seg.flags = kFlagSyn | kFlagAck;
      emit(seg);
      return;
    default:
      break;
  }
  if (fin_sent_ && !fin_acked_ && snd_una_ == fin_seq_) {
    seg.seq = fin_seq_;
    seg.ack = rcv_nxt_;
    seg.flags = kFlagFin | kFlagAck;
    emit(seg);
    return;
  }
  const uint32_t data_end =
      snd_nxt_ - ((fin_sent_ && !fin_acked_) ? 1 : 0);
  if (data_end == snd_una_) {
    return;  // nothing to retransmit
  }
  seg.seq = snd_una_;
  seg.ack = rcv_nxt_;
  seg.flags = kFlagAck;
  seg.payload_len = std::min(cfg_.mss, data_end - snd_una_);
  emit(seg);
}

void TcpHalf::emit(TxSegment seg) { outbox_.push_back(seg); }

void TcpHalf::emit_ack() {
  TxSegment ack;
  ack.seq = snd_nxt_;
  ack.ack = rcv_nxt_;
  ack.flags = kFlagAck;
  ack.window = cfg_.advertised_window;
  emit(ack);
}

void TcpHalf::arm_timer(simengine::SimTime now) {
  timer_armed_ = true;
  rto_deadline_ = now + rto_;
}

void TcpHalf::restart_timer(simengine::SimTime now) { arm_timer(now); }

void TcpHalf::cancel_timer() { timer_armed_ = false; }

std::optional<simengine::SimTime> TcpHalf::rto_deadline() const {
  if (!timer_armed_) {
    return std::nullopt;
  }
  return rto_deadline_;
}

void TcpHalf::take_rtt_sample(uint64_t sample_us) {
  if (!rtt_valid_) {
    srtt_ = sample_us;
    rttvar_ = sample_us / 2;
    rtt_valid_ = true;
  } else {
    const uint64_t diff =
        srtt_ > sample_us ? srtt_ - sample_us : sample_us - srtt_;
    rttvar_ = (3 * rttvar_ + diff) / 4;
    srtt_ = (7 * srtt_ + sample_us) / 8;
  }
  const uint64_t raw = srtt_ + std::max<uint64_t>(4 * rttvar_, 1);
  rto_ = std::clamp<uint64_t>(raw, cfg_.rto_min_us,
                              cfg_.rto_min_us * cfg_.rto_cap_factor);
}

void TcpHalf::force_established(uint32_t snd_start, uint32_t rcv_start) {
  iss_ = snd_start - 1;
  snd_una_ = snd_start;
  snd_nxt_ = snd_start;
  rcv_nxt_ = rcv_start;
  irs_ = rcv_start - 1;
  phase_ = ConnPhase::Established;
}

void TcpHalf::force_cc(CcState st, uint32_t cwnd, uint32_t ssthresh,
                       uint32_t peer_rwnd) {
  cc_ = st;
  cwnd_ = cwnd;
  ssthresh_ = ssthresh;
  peer_rwnd_ = peer_rwnd;
}

}  // namespace rwndqsim::endhost
