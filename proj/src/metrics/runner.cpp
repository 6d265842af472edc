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

#include "rwndqsim/metrics/runner.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <random>
#include <unordered_map>

#include "rwndqsim/endhost/apps.hpp"
#include "rwndqsim/endhost/tcp_flow.hpp"
#include "rwndqsim/metrics/stats.hpp"
#include "rwndqsim/simengine/engine.hpp"
#include "rwndqsim/simengine/topology.hpp"
#include "rwndqsim/switchmodel/fabric.hpp"
#include "rwndqsim/wirecodec/tcp_segment.hpp"

namespace rwndqsim::metrics {

namespace {

using endhost::TcpHalf;
using scenarios::Scenario;
using simengine::Engine;
using simengine::Event;
using simengine::EventKind;
using simengine::Packet;
using simengine::SimTime;
using switchmodel::Fabric;
using switchmodel::Network;

constexpr uint16_t kServerPort = 80;
constexpr uint16_t kFirstEphemeralPort = 10000;

struct EndpointKey {
  uint64_t local = 0;   // (ip << 16) | port of the receiving endpoint
  uint64_t remote = 0;
  bool operator==(const EndpointKey&) const = default;
};

struct EndpointKeyHash {
  size_t operator()(const EndpointKey& k) const {
    uint64_t h = k.local * 0x9e3779b97f4a7c15ull;
    h ^= k.remote + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return static_cast<size_t>(h);
  }
};

struct FileTracer final : switchmodel::PacketTrace {
  explicit FileTracer(const std::string& path)
      : f(std::fopen(path.c_str(), "w")) {
    if (f == nullptr) {
      throw std::runtime_error("cannot open trace file " + path);
    }
    std::fprintf(f, "# time_us event port flow size backlog\n");
  }
  ~FileTracer() override {
    if (f != nullptr) {
      std::fclose(f);
    }
  }

  void record(SimTime now, const char* event, const std::string& port_id,
              const Packet& pkt, uint64_t backlog) override {
    char flow[64] = "-";
    if (pkt.header_len >= 40) {
      const auto& h = pkt.header;
      std::snprintf(flow, sizeof flow, "%u.%u.%u.%u:%u>%u.%u.%u.%u:%u", h[12],
                    h[13], h[14], h[15], (h[20] << 8) | h[21], h[16], h[17],
                    h[18], h[19], (h[22] << 8) | h[23]);
    }
    std::fprintf(f, "%" PRIu64 " %s %s %s %u %" PRIu64 "\n", now, event,
                 port_id.c_str(), flow, pkt.wire_size(), backlog);
  }

  FILE* f;
};

class Simulation final : public simengine::EventSink,
                         public switchmodel::LocalDelivery,
                         public endhost::SessionEnv {
 public:
  Simulation(const Scenario& sc, const RunOptions& opts)
      : sc_(sc),
        net_(simengine::build_topology(sc.topology)),
        fabric_(net_, engine_, *this),
        schedule_(realize_schedule(sc)) {
    if (sc.discipline == scenarios::Discipline::Rwndq) {
      switchmodel::enable_rwndq(net_, sc.rwndq);
    }
    if (opts.observer != nullptr) {
      fabric_.set_trace(opts.observer);
    } else if (opts.trace) {
      std::filesystem::create_directories(opts.trace_dir);
      tracer_ = std::make_unique<FileTracer>(opts.trace_dir + "/packets.log");
      fabric_.set_trace(tracer_.get());
      rwndq_log_ = std::fopen(
          (opts.trace_dir + "/rwndq_state.csv").c_str(), "w");
      if (rwndq_log_ != nullptr) {
        std::fprintf(rwndq_log_,
                     "time_us,port,conncount,localwnd,wnd,backlog\n");
      }
    }

    duration_us_ = simengine::seconds_to_us(sc.duration_s);
    warmup_us_ = simengine::seconds_to_us(sc.warmup_s);
    sample_us_ = simengine::seconds_to_us(sc.sample_interval_s);
    next_port_.assign(net_.nodes.size(), kFirstEphemeralPort);

    // Traffic slots: elephants first, then benchmark clients; AppStart
    // events address them by slot index.
    uint32_t slot = 0;
    for (const auto& group : sc.elephants) {
      for (uint32_t k = 0; k < group.count; ++k, ++slot) {
        ElephantRt rt;
        rt.src = net_.id_of(group.src);
        rt.dst = net_.id_of(group.dst);
        elephants_.push_back(rt);
        const SimTime start = schedule_.elephant_starts[slot];
        engine_.schedule(start, EventKind::AppStart, slot, 0);
        if (schedule_.elephant_stops[slot] != 0) {
          engine_.schedule(schedule_.elephant_stops[slot],
                           EventKind::AppStart, slot, 1);
        }
      }
    }
    elephant_slots_ = slot;
    uint32_t mouse = 0;
    for (const auto& group : sc.mice) {
      for (uint32_t k = 0; k < group.clients; ++k, ++mouse, ++slot) {
        endhost::MiceSession::Params p;
        p.client_id = mouse;
        p.client_host = net_.id_of(group.client);
        p.server_host = net_.id_of(group.server);
        p.request_count = group.requests;
        p.response_bytes = group.response_bytes;
        p.request_bytes = group.request_bytes;
        mice_.push_back(std::make_unique<endhost::MiceSession>(*this, p,
                                                               fcts_));
        engine_.schedule(schedule_.mice_starts[mouse], EventKind::AppStart,
                         slot, 0);
      }
    }

    if (sample_us_ > 0 && sample_us_ <= duration_us_) {
      engine_.schedule(sample_us_, EventKind::SampleTick, 0, 0);
    }
    engine_.schedule(warmup_us_, EventKind::SampleTick, 0, 1);
    engine_.schedule(duration_us_ / 2, EventKind::SampleTick, 0, 2);
  }

  ~Simulation() override {
    if (rwndq_log_ != nullptr) {
      std::fclose(rwndq_log_);
    }
  }

  MetricsReport run() {
    engine_.run_until(duration_us_ + 1, *this);
    return finalize();
  }

  // --- EventSink ---
  void on_event(Event& ev) override {
    switch (ev.kind) {
      case EventKind::PacketArrival:
        fabric_.on_arrival(ev.target, static_cast<uint16_t>(ev.aux),
                           std::move(ev.packet));
        break;
      case EventKind::TransmitComplete:
        fabric_.on_transmit_complete(ev.target,
                                     static_cast<uint16_t>(ev.aux));
        break;
      case EventKind::RwndqTick:
        fabric_.on_rwndq_tick(ev.target);
        break;
      case EventKind::AppStart:
        handle_app(ev.target, ev.aux);
        break;
      case EventKind::RtoExpiry:
        handle_rto(ev.target, ev.aux);
        break;
      case EventKind::SampleTick:
        handle_sample(ev.aux);
        break;
    }
  }

  // --- LocalDelivery ---
  void deliver(uint32_t /*node*/, Packet&& pkt, SimTime now) override {
    auto parsed = wirecodec::parse_segment(pkt.header_bytes());
    auto* view = std::get_if<wirecodec::TcpSegmentView>(&parsed);
    if (view == nullptr) {
      return;  // not TCP; no endpoint consumes it
    }
    EndpointKey key;
    key.local = (static_cast<uint64_t>(view->dst_ip()) << 16) |
                view->dst_port();
    key.remote = (static_cast<uint64_t>(view->src_ip()) << 16) |
                 view->src_port();
    auto it = demux_.find(key);
    if (it == demux_.end()) {
      stray_segments_ += 1;
      return;
    }
    const auto [conn_idx, side] = it->second;
    half_of(conn_idx, side).on_segment(*view, now);
    flush(conn_idx, side);
  }

  // --- SessionEnv ---
  std::pair<TcpHalf*, TcpHalf*> open_connection(uint32_t client_host,
                                                uint32_t server_host) override {
    Conn conn;
    conn.client_host = client_host;
    conn.server_host = server_host;
    const uint32_t client_ip = net_.nodes[client_host].ip;
    const uint32_t server_ip = net_.nodes[server_host].ip;
    const uint16_t client_port = next_port_[client_host]++;
    conn.client = std::make_unique<TcpHalf>(sc_.tcp, client_ip, client_port,
                                            server_ip, kServerPort, &safety_);
    conn.server = std::make_unique<TcpHalf>(sc_.tcp, server_ip, kServerPort,
                                            client_ip, client_port, &safety_);
    const auto idx = static_cast<uint32_t>(conns_.size());
    demux_[EndpointKey{pack(client_ip, client_port),
                       pack(server_ip, kServerPort)}] = {idx, 0};
    demux_[EndpointKey{pack(server_ip, kServerPort),
                       pack(client_ip, client_port)}] = {idx, 1};
    conns_.push_back(std::move(conn));
    return {conns_[idx].client.get(), conns_[idx].server.get()};
  }

  SimTime now() const override { return engine_.now(); }

  void activate(TcpHalf* half) override {
    // Sessions hand us a half they just drove; locate it and flush.
    for (size_t i = conns_.size(); i-- > 0;) {
      if (conns_[i].client.get() == half) {
        flush(static_cast<uint32_t>(i), 0);
        return;
      }
      if (conns_[i].server.get() == half) {
        flush(static_cast<uint32_t>(i), 1);
        return;
      }
    }
  }

 private:
  struct Conn {
    std::unique_ptr<TcpHalf> client;
    std::unique_ptr<TcpHalf> server;
    uint32_t client_host = 0;
    uint32_t server_host = 0;
    SimTime rto_pending[2] = {UINT64_MAX, UINT64_MAX};
  };

  struct ElephantRt {
    uint32_t src = 0;
    uint32_t dst = 0;
    int64_t conn = -1;
    uint64_t delivered_last_sample = 0;
    uint64_t delivered_at_warmup = 0;
    std::vector<double> samples_bps;
  };

  static uint64_t pack(uint32_t ip, uint16_t port) {
    return (static_cast<uint64_t>(ip) << 16) | port;
  }

  TcpHalf& half_of(uint32_t conn_idx, uint8_t side) {
    return side == 0 ? *conns_[conn_idx].client : *conns_[conn_idx].server;
  }

  void flush(uint32_t conn_idx, uint8_t side) {
    TcpHalf& half = half_of(conn_idx, side);
    auto& outbox = half.outbox();
    for (size_t i = 0; i < outbox.size(); ++i) {
      const endhost::TxSegment ts = outbox[i];
      Packet pkt;
      wirecodec::SegmentSpec spec;
      spec.src_ip = half.local_ip();
      spec.dst_ip = half.remote_ip();
      spec.src_port = half.local_port();
      spec.dst_port = half.remote_port();
      spec.seq = ts.seq;
      spec.ack_seq = ts.ack;
      spec.flags = ts.flags;
      spec.window = ts.window;
      spec.payload_len = ts.payload_len;
      spec.ip_id = ip_id_++;
      pkt.header_len = static_cast<uint8_t>(
          wirecodec::build_segment_into(spec, pkt.header));
      pkt.payload_len = ts.payload_len;
      pkt.uid = next_uid_++;
      const uint32_t host =
          side == 0 ? conns_[conn_idx].client_host
                    : conns_[conn_idx].server_host;
      fabric_.inject(host, std::move(pkt));
    }
    outbox.clear();
    maybe_arm_rto(conn_idx, side);
  }

  void maybe_arm_rto(uint32_t conn_idx, uint8_t side) {
    const auto deadline = half_of(conn_idx, side).rto_deadline();
    if (!deadline) {
      return;
    }
    SimTime& pending = conns_[conn_idx].rto_pending[side];
    if (*deadline < pending) {
      engine_.schedule(*deadline, EventKind::RtoExpiry, conn_idx, side);
      pending = *deadline;
    }
  }

  void handle_rto(uint32_t conn_idx, uint32_t side) {
    Conn& conn = conns_[conn_idx];
    conn.rto_pending[side] = UINT64_MAX;
    TcpHalf& half = half_of(conn_idx, static_cast<uint8_t>(side));
    const auto deadline = half.rto_deadline();
    if (!deadline) {
      return;  // timer was cancelled
    }
    if (*deadline > engine_.now()) {
      // Timer was pushed forward since this event was scheduled.
      maybe_arm_rto(conn_idx, static_cast<uint8_t>(side));
      return;
    }
    half.on_timeout(engine_.now());
    flush(conn_idx, static_cast<uint8_t>(side));
  }

  void handle_app(uint32_t slot, uint32_t aux) {
    if (slot < elephant_slots_) {
      if (aux == 0) {
        start_elephant(slot);
      } else {
        stop_elephant(slot);
      }
      return;
    }
    mice_[slot - elephant_slots_]->start();
  }

  void start_elephant(uint32_t idx) {
    ElephantRt& rt = elephants_[idx];
    auto [client, server] = open_connection(rt.src, rt.dst);
    rt.conn = static_cast<int64_t>(conns_.size()) - 1;
    client->app_supply_unbounded();
    client->open_active(engine_.now());
    activate(client);
    (void)server;
  }

  void stop_elephant(uint32_t idx) {
    ElephantRt& rt = elephants_[idx];
    if (rt.conn < 0) {
      return;
    }
    TcpHalf& client = *conns_[rt.conn].client;
    client.app_close(engine_.now());
    flush(static_cast<uint32_t>(rt.conn), 0);
  }

  void handle_sample(uint32_t aux) {
    if (aux == 1) {
      for (auto& rt : elephants_) {
        rt.delivered_at_warmup =
            rt.conn >= 0 ? conns_[rt.conn].server->delivered_payload() : 0;
      }
      return;
    }
    if (aux == 2) {
      for (auto& node : net_.nodes) {
        for (auto& port : node.ports) {
          port.account_backlog(engine_.now());
          integral_at_half_.push_back(port.backlog_integral_byte_us);
        }
      }
      return;
    }
    for (auto& rt : elephants_) {
      const uint64_t delivered =
          rt.conn >= 0 ? conns_[rt.conn].server->delivered_payload() : 0;
      const double bps = static_cast<double>(delivered -
                                             rt.delivered_last_sample) *
                         8.0 / sc_.sample_interval_s;
      rt.samples_bps.push_back(bps);
      rt.delivered_last_sample = delivered;
    }
    if (rwndq_log_ != nullptr) {
      for (const auto& node : net_.nodes) {
        if (!node.daemon.has_value()) {
          continue;
        }
        for (size_t i = 0; i < node.ports.size(); ++i) {
          const auto& ps = node.daemon->port(i);
          if (ps.conncount == 0) {
            continue;
          }
          std::fprintf(rwndq_log_,
                       "%" PRIu64 ",%s,%u,%" PRId64 ",%u,%" PRIu64 "\n",
                       engine_.now(), node.ports[i].report_id.c_str(),
                       ps.conncount, ps.localwnd, ps.wnd,
                       node.ports[i].queue.backlog());
        }
      }
    }
    const SimTime next = engine_.now() + sample_us_;
    if (next <= duration_us_) {
      engine_.schedule(next, EventKind::SampleTick, 0, 0);
    }
  }

  MetricsReport finalize() {
    MetricsReport rep;
    rep.scenario = sc_.name;
    rep.discipline = scenarios::to_string(sc_.discipline);
    rep.seed = sc_.seed;
    rep.duration_s = sc_.duration_s;
    rep.sample_interval_s = sc_.sample_interval_s;
    rep.warmup_s = sc_.warmup_s;

    // Per-port accounting, closed out at the end of the run.
    const SimTime end = duration_us_;
    const SimTime half = duration_us_ / 2;
    size_t port_seq = 0;
    uint64_t bottleneck_rate = 0;
    int best_label = 0;
    for (auto& node : net_.nodes) {
      rep.no_route_drops += node.no_route_drops;
      if (node.daemon.has_value()) {
        rep.rwndq_anomalies += node.daemon->total_anomalies();
      }
      for (auto& port : node.ports) {
        port.account_backlog(end);
        LinkStat ls;
        ls.id = port.report_id;
        ls.label = port.label;
        ls.drops = port.queue.drops();
        ls.dropped_bytes = port.queue.dropped_bytes();
        ls.offered_pkts = port.queue.offered_packets();
        ls.offered_bytes = port.queue.offered_bytes();
        ls.delivered_pkts = port.queue.dequeued_packets();
        ls.delivered_bytes = port.queue.dequeued_bytes();
        ls.residual_bytes = port.queue.backlog();
        const uint64_t base = port_seq < integral_at_half_.size()
                                  ? integral_at_half_[port_seq]
                                  : 0;
        if (end > half) {
          ls.avg_backlog_final_half =
              static_cast<double>(port.backlog_integral_byte_us - base) /
              static_cast<double>(end - half);
        }
        if (port.label > best_label) {
          best_label = port.label;
          bottleneck_rate = port.line_rate_bps;
        }
        rep.links.push_back(std::move(ls));
        ++port_seq;
      }
    }

    const auto warmup_samples =
        sc_.sample_interval_s > 0.0
            ? static_cast<size_t>(sc_.warmup_s / sc_.sample_interval_s + 0.5)
            : size_t{0};
    std::vector<double> means;
    uint64_t goodput_bytes = 0;
    for (size_t i = 0; i < elephants_.size(); ++i) {
      const ElephantRt& rt = elephants_[i];
      FlowThroughput ft;
      ft.flow_id = static_cast<uint32_t>(i);
      ft.samples_bps = rt.samples_bps;
      if (rt.samples_bps.size() > warmup_samples) {
        std::span<const double> steady(
            rt.samples_bps.data() + warmup_samples,
            rt.samples_bps.size() - warmup_samples);
        ft.mean_bps = mean(steady);
        ft.variance_bps2 = variance(steady);
      }
      means.push_back(ft.mean_bps);
      rep.max_flow_variance =
          std::max(rep.max_flow_variance, ft.variance_bps2);
      if (rt.conn >= 0) {
        goodput_bytes += conns_[rt.conn].server->delivered_payload() -
                         rt.delivered_at_warmup;
        ft.final_outstanding = conns_[rt.conn].client->data_outstanding();
      }
      rep.elephants.push_back(std::move(ft));
    }
    if (!means.empty()) {
      bool any_positive = false;
      for (double m : means) {
        any_positive = any_positive || m > 0.0;
      }
      if (any_positive) {
        rep.jain_elephants = jain_index(means);
      }
    }
    if (duration_us_ > warmup_us_) {
      rep.bottleneck_goodput_bps =
          static_cast<double>(goodput_bytes) * 8.0 * 1e6 /
          static_cast<double>(duration_us_ - warmup_us_);
    }
    if (bottleneck_rate > 0) {
      rep.bottleneck_utilization =
          rep.bottleneck_goodput_bps / static_cast<double>(bottleneck_rate);
    }

    rep.fcts = fcts_;
    std::vector<double> done_us;
    std::vector<double> all_us;
    for (const auto& r : fcts_) {
      if (r.completed) {
        done_us.push_back(static_cast<double>(r.fct_us));
        all_us.push_back(static_cast<double>(r.fct_us));
      } else {
        rep.fct.incomplete += 1;
        all_us.push_back(std::numeric_limits<double>::infinity());
      }
    }
    rep.fct.count = fcts_.size();
    if (!done_us.empty()) {
      rep.fct.mean_us = mean(done_us);
      rep.fct.sd_us = std::sqrt(variance(done_us));
    }
    if (!all_us.empty()) {
      rep.fct.p99_us = percentile(all_us, 99.0);
      rep.fct.max_us = percentile(all_us, 100.0);
    }

    rep.safety = safety_;
    return rep;
  }

  const Scenario& sc_;
  Engine engine_;
  Network net_;
  Fabric fabric_;
  RealizedSchedule schedule_;
  std::unique_ptr<FileTracer> tracer_;
  FILE* rwndq_log_ = nullptr;

  SimTime duration_us_ = 0;
  SimTime warmup_us_ = 0;
  SimTime sample_us_ = 0;

  std::vector<Conn> conns_;
  std::unordered_map<EndpointKey, std::pair<uint32_t, uint8_t>,
                     EndpointKeyHash>
      demux_;
  std::vector<ElephantRt> elephants_;
  uint32_t elephant_slots_ = 0;
  std::vector<std::unique_ptr<endhost::MiceSession>> mice_;
  std::vector<endhost::FctRecord> fcts_;
  std::vector<uint16_t> next_port_;
  std::vector<uint64_t> integral_at_half_;
  endhost::SafetyStats safety_;
  uint64_t stray_segments_ = 0;
  uint64_t next_uid_ = 1;
  uint16_t ip_id_ = 1;
};

}  // namespace

RealizedSchedule realize_schedule(const Scenario& sc) {
  RealizedSchedule out;
  std::mt19937_64 rng(sc.seed);
  const auto jitter = [&rng, &sc](SimTime base) {
    if (sc.start_jitter_us == 0) {
      return base;
    }
    std::uniform_int_distribution<int64_t> dist(
        -static_cast<int64_t>(sc.start_jitter_us),
        static_cast<int64_t>(sc.start_jitter_us));
    const int64_t j = dist(rng);
    const auto shifted = static_cast<int64_t>(base) + j;
    return shifted < 0 ? SimTime{0} : static_cast<SimTime>(shifted);
  };

  for (const auto& group : sc.elephants) {
    for (uint32_t k = 0; k < group.count; ++k) {
      const SimTime start = jitter(simengine::seconds_to_us(group.start_s));
      out.elephant_starts.push_back(start);
      out.elephant_stops.push_back(
          group.duration_s > 0.0
              ? start + simengine::seconds_to_us(group.duration_s)
              : 0);
    }
  }
  for (const auto& group : sc.mice) {
    for (uint32_t k = 0; k < group.clients; ++k) {
      out.mice_starts.push_back(
          jitter(simengine::seconds_to_us(group.start_s)));
    }
  }
  return out;
}

MetricsReport run_scenario(const Scenario& sc, const RunOptions& opts) {
  Simulation sim(sc, opts);
  return sim.run();
}

}  // namespace rwndqsim::metrics
