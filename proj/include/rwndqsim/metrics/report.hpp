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
#include <string>
#include <vector>

#include "rwndqsim/endhost/apps.hpp"
#include "rwndqsim/endhost/tcp_flow.hpp"

namespace rwndqsim::metrics {

struct FlowThroughput {
  uint32_t flow_id = 0;
  std::vector<double> samples_bps;  // one per sample interval, whole run
  double mean_bps = 0.0;            // post-warmup samples only
  double variance_bps2 = 0.0;       // post-warmup samples only
  uint32_t final_outstanding = 0;   // sender's unacked payload at run end
};

struct LinkStat {
  std::string id;  // "<link>:fwd" or "<link>:rev"
  int label = 0;   // instrumented bottleneck number, 0 if none
  uint64_t drops = 0;
  uint64_t dropped_bytes = 0;
  uint64_t offered_pkts = 0;
  uint64_t offered_bytes = 0;
  uint64_t delivered_pkts = 0;
  uint64_t delivered_bytes = 0;
  uint64_t residual_bytes = 0;          // still queued at run end
  double avg_backlog_final_half = 0.0;  // bytes, averaged over [T/2, T]
};

struct FctSummary {
  size_t count = 0;
  size_t incomplete = 0;  // connections that died
  double mean_us = 0.0;
  double sd_us = 0.0;
  double p99_us = 0.0;
  double max_us = 0.0;
};

// Everything one run produces. CSV schemas:
//   throughput.csv  time_s,flow_id,bits_per_sec
//   drops.csv       link_id,drops,offered_pkts
//   fct.csv         client_id,request_idx,fct_us
struct MetricsReport {
  std::string scenario;
  std::string discipline;
  uint64_t seed = 0;
  double duration_s = 0.0;
  double sample_interval_s = 0.0;
  double warmup_s = 0.0;

  std::vector<FlowThroughput> elephants;
  std::vector<LinkStat> links;
  std::vector<endhost::FctRecord> fcts;

  double jain_elephants = 0.0;        // over post-warmup per-flow means
  double max_flow_variance = 0.0;     // max of variance_bps2
  double bottleneck_goodput_bps = 0;  // receiver goodput past warmup
  double bottleneck_utilization = 0;  // goodput / line rate
  FctSummary fct;

  endhost::SafetyStats safety;
  uint64_t rwndq_anomalies = 0;
  uint64_t no_route_drops = 0;

  uint64_t total_drops_labeled(int label_from, int label_to) const;
  const LinkStat* link_by_id(const std::string& id) const;

  // Writes throughput.csv, drops.csv and fct.csv under `dir`.
  void write_csvs(const std::string& dir) const;
};

// Two-column comparison table, written as summary.csv.
void write_summary(const std::string& path,
                   const std::vector<const MetricsReport*>& runs);

}  // namespace rwndqsim::metrics
