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

#include "rwndqsim/metrics/report.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <stdexcept>

namespace rwndqsim::metrics {

namespace {

struct File {
  explicit File(const std::string& path) : f(std::fopen(path.c_str(), "w")) {
    if (f == nullptr) {
      throw std::runtime_error("cannot open " + path + " for writing");
    }
  }
  ~File() {
    if (f != nullptr) {
      std::fclose(f);
    }
  }
  File(const File&) = delete;
  File& operator=(const File&) = delete;
  FILE* f;
};

}  // namespace

uint64_t MetricsReport::total_drops_labeled(int label_from,
                                            int label_to) const {
  uint64_t total = 0;
  for (const auto& l : links) {
    if (l.label >= label_from && l.label <= label_to) {
      total += l.drops;
    }
  }
  return total;
}

const LinkStat* MetricsReport::link_by_id(const std::string& id) const {
  for (const auto& l : links) {
    if (l.id == id) {
      return &l;
    }
  }
  return nullptr;
}

void MetricsReport::write_csvs(const std::string& dir) const {
  std::filesystem::create_directories(dir);

  {
    File tp(dir + "/throughput.csv");
    std::fprintf(tp.f, "time_s,flow_id,bits_per_sec\n");
    for (const auto& flow : elephants) {
      for (size_t i = 0; i < flow.samples_bps.size(); ++i) {
        std::fprintf(tp.f, "%.1f,%u,%.0f\n",
                     (static_cast<double>(i) + 1.0) * sample_interval_s,
                     flow.flow_id, flow.samples_bps[i]);
      }
    }
  }

  {
    File dr(dir + "/drops.csv");
    std::fprintf(dr.f, "link_id,drops,offered_pkts\n");
    for (const auto& l : links) {
      std::fprintf(dr.f, "%s,%" PRIu64 ",%" PRIu64 "\n", l.id.c_str(),
                   l.drops, l.offered_pkts);
    }
  }

  {
    File fc(dir + "/fct.csv");
    std::fprintf(fc.f, "client_id,request_idx,fct_us\n");
    for (const auto& r : fcts) {
      if (r.completed) {
        std::fprintf(fc.f, "%u,%u,%" PRIu64 "\n", r.client_id, r.request_idx,
                     r.fct_us);
      } else {
        std::fprintf(fc.f, "%u,%u,inf\n", r.client_id, r.request_idx);
      }
    }
  }
}

void write_summary(const std::string& path,
                   const std::vector<const MetricsReport*>& runs) {
  File out(path);
  std::fprintf(out.f, "metric");
  for (const auto* r : runs) {
    std::fprintf(out.f, ",%s", r->discipline.c_str());
  }
  std::fprintf(out.f, "\n");

  auto row_f = [&](const char* name, auto getter) {
    std::fprintf(out.f, "%s", name);
    for (const auto* r : runs) {
      std::fprintf(out.f, ",%.6g", getter(*r));
    }
    std::fprintf(out.f, "\n");
  };
  auto row_u = [&](const char* name, auto getter) {
    std::fprintf(out.f, "%s", name);
    for (const auto* r : runs) {
      std::fprintf(out.f, ",%" PRIu64, getter(*r));
    }
    std::fprintf(out.f, "\n");
  };

  row_f("bottleneck_goodput_mbps",
        [](const MetricsReport& r) { return r.bottleneck_goodput_bps / 1e6; });
  row_f("bottleneck_utilization",
        [](const MetricsReport& r) { return r.bottleneck_utilization; });
  row_f("jain_elephants",
        [](const MetricsReport& r) { return r.jain_elephants; });
  row_f("max_flow_variance_bps2",
        [](const MetricsReport& r) { return r.max_flow_variance; });
  row_u("drops_total", [](const MetricsReport& r) {
    uint64_t t = 0;
    for (const auto& l : r.links) {
      t += l.drops;
    }
    return t;
  });
  for (int label = 1; label <= 8; ++label) {
    bool any = false;
    for (const auto* r : runs) {
      for (const auto& l : r->links) {
        any = any || l.label == label;
      }
    }
    if (!any) {
      continue;
    }
    std::string name = "drops_link" + std::to_string(label);
    std::fprintf(out.f, "%s", name.c_str());
    for (const auto* r : runs) {
      std::fprintf(out.f, ",%" PRIu64,
                   r->total_drops_labeled(label, label));
    }
    std::fprintf(out.f, "\n");
  }
  row_u("mice_requests",
        [](const MetricsReport& r) { return static_cast<uint64_t>(r.fct.count); });
  row_u("mice_incomplete", [](const MetricsReport& r) {
    return static_cast<uint64_t>(r.fct.incomplete);
  });
  row_f("fct_mean_ms",
        [](const MetricsReport& r) { return r.fct.mean_us / 1e3; });
  row_f("fct_sd_ms", [](const MetricsReport& r) { return r.fct.sd_us / 1e3; });
  row_f("fct_p99_ms",
        [](const MetricsReport& r) { return r.fct.p99_us / 1e3; });
  row_f("fct_max_ms",
        [](const MetricsReport& r) { return r.fct.max_us / 1e3; });
  row_u("flow_control_violations", [](const MetricsReport& r) {
    return r.safety.violations;
  });
}

}  // namespace rwndqsim::metrics
