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

#include "rwndqsim/metrics/cli.hpp"

#include <CLI11.hpp>
#include <cinttypes>
#include <cstdio>

#include "rwndqsim/metrics/runner.hpp"
#include "rwndqsim/scenarios/config_io.hpp"
#include "rwndqsim/scenarios/presets.hpp"

namespace rwndqsim::metrics {

namespace {

void print_run_line(const MetricsReport& rep) {
  std::printf(
      "[%s/%s] goodput %.1f Mb/s (util %.3f)  jain %.4f  drops %" PRIu64
      "  mice %zu (p99 %.1f ms)  violations %" PRIu64 "\n",
      rep.scenario.c_str(), rep.discipline.c_str(),
      rep.bottleneck_goodput_bps / 1e6, rep.bottleneck_utilization,
      rep.jain_elephants, rep.total_drops_labeled(1, 8), rep.fct.count,
      rep.fct.p99_us / 1e3, rep.safety.violations);
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"rwndqsim: packet-level experiments with switch-assisted"
               " receive-window control"};
  app.require_subcommand(1);

  // --- run ---
  auto* run = app.add_subcommand("run", "run a scenario and emit CSV reports");
  std::string preset_name;
  std::string scenario_file;
  std::string discipline = "both";
  std::string out_dir = "results";
  uint64_t seed = 0;
  bool seed_set = false;
  double duration = 0.0;
  bool duration_set = false;
  bool trace = false;
  bool full_length = false;
  run->add_option("--preset", preset_name, "preset scenario name");
  run->add_option("--scenario", scenario_file, "scenario config file");
  run->add_option("--discipline", discipline, "fifo, rwndq or both")
      ->check(CLI::IsMember({"fifo", "rwndq", "both"}));
  run->add_option("--seed", seed, "PRNG seed")->each([&](const std::string&) {
    seed_set = true;
  });
  run->add_option("--duration", duration, "simulated seconds")
      ->each([&](const std::string&) { duration_set = true; });
  run->add_option("--out", out_dir, "output directory (default results)");
  run->add_flag("--trace", trace, "write a per-packet event log");
  run->add_flag("--full-length", full_length, "testbed-scale 50 s runs");

  // --- preset ---
  auto* preset_cmd = app.add_subcommand("preset", "inspect built-in presets");
  auto* preset_list = preset_cmd->add_subcommand("list", "list preset names");
  auto* preset_dump =
      preset_cmd->add_subcommand("dump", "print a preset as a scenario file");
  std::string dump_name;
  bool dump_full = false;
  preset_dump->add_option("name", dump_name, "preset name")->required();
  preset_dump->add_flag("--full-length", dump_full, "testbed-scale 50 s");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (preset_list->parsed()) {
      for (const auto& name : scenarios::preset_names()) {
        std::printf("%s\n", name.c_str());
      }
      return 0;
    }
    if (preset_dump->parsed()) {
      scenarios::PresetOverrides ov;
      ov.full_length = dump_full;
      const auto sc = scenarios::preset(dump_name, ov);
      std::fputs(scenarios::serialize_scenario(sc).c_str(), stdout);
      return 0;
    }

    // run
    if (preset_name.empty() == scenario_file.empty()) {
      std::fprintf(stderr,
                   "run: exactly one of --preset or --scenario required\n");
      return 2;
    }
    scenarios::Scenario sc;
    if (!preset_name.empty()) {
      scenarios::PresetOverrides ov;
      ov.full_length = full_length;
      if (duration_set) {
        ov.duration_s = duration;
      }
      if (seed_set) {
        ov.seed = seed;
      }
      sc = scenarios::preset(preset_name, ov);
    } else {
      sc = scenarios::load_scenario_file(scenario_file);
      if (duration_set) {
        sc.duration_s = duration;
      }
      if (seed_set) {
        sc.seed = seed;
      }
      if (full_length) {
        sc.duration_s = 50.0;
      }
    }

    std::vector<scenarios::Discipline> arms;
    if (discipline == "both") {
      arms = {scenarios::Discipline::Fifo, scenarios::Discipline::Rwndq};
    } else {
      arms = {scenarios::discipline_from_string(discipline)};
    }

    std::vector<MetricsReport> reports;
    reports.reserve(arms.size());
    for (const auto arm : arms) {
      scenarios::Scenario run_sc = sc;
      run_sc.discipline = arm;
      const std::string run_dir =
          out_dir + "/" + sc.name + "_" + scenarios::to_string(arm);
      RunOptions opts;
      opts.trace = trace;
      opts.trace_dir = run_dir;
      MetricsReport rep = run_scenario(run_sc, opts);
      rep.write_csvs(run_dir);
      print_run_line(rep);
      reports.push_back(std::move(rep));
    }
    std::vector<const MetricsReport*> refs;
    refs.reserve(reports.size());
    for (const auto& r : reports) {
      refs.push_back(&r);
    }
    write_summary(out_dir + "/summary.csv", refs);
    return 0;
  } catch (const scenarios::ScenarioError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const simengine::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "runtime failure: %s\n", e.what());
    return 1;
  }
}

}  // namespace rwndqsim::metrics
