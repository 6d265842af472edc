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

#include "rwndqsim/scenarios/config_io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace rwndqsim::scenarios {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    return "";
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) {
    out.push_back(tok);
  }
  return out;
}

[[noreturn]] void fail(size_t line, const std::string& what) {
  throw ScenarioError("scenario line " + std::to_string(line) + ": " + what);
}

uint64_t parse_u64(const std::string& s, size_t line) {
  if (s.empty() || s[0] == '-') {
    fail(line, "expected a nonnegative number, got '" + s + "'");
  }
  try {
    size_t pos = 0;
    const uint64_t v = std::stoull(s, &pos);
    if (pos != s.size()) {
      fail(line, "trailing junk in number '" + s + "'");
    }
    return v;
  } catch (const ScenarioError&) {
    throw;
  } catch (...) {
    fail(line, "bad number '" + s + "'");
  }
}

double parse_f64(const std::string& s, size_t line) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) {
      fail(line, "trailing junk in number '" + s + "'");
    }
    return v;
  } catch (const ScenarioError&) {
    throw;
  } catch (...) {
    fail(line, "bad number '" + s + "'");
  }
}

}  // namespace

std::string serialize_scenario(const Scenario& sc) {
  std::ostringstream out;
  out << "# rwndqsim scenario\n";
  out << "name = " << sc.name << "\n";
  out << "discipline = " << to_string(sc.discipline) << "\n";
  out << "duration_s = " << sc.duration_s << "\n";
  out << "sample_interval_s = " << sc.sample_interval_s << "\n";
  out << "warmup_s = " << sc.warmup_s << "\n";
  out << "seed = " << sc.seed << "\n";
  out << "jitter_us = " << sc.start_jitter_us << "\n";

  out << "\n[rwndq]\n";
  out << "commit_ticks = " << sc.rwndq.commit_ticks << "\n";
  out << "tick_interval_us = " << sc.rwndq.tick_interval_us << "\n";
  out << "target_fraction = " << sc.rwndq.target_numer << "/"
      << sc.rwndq.target_denom << "\n";
  out << "tcp_min_mss = " << sc.rwndq.tcp_min_mss << "\n";
  out << "mss = " << sc.rwndq.mss << "\n";

  out << "\n[tcp]\n";
  out << "mss = " << sc.tcp.mss << "\n";
  out << "rto_min_us = " << sc.tcp.rto_min_us << "\n";
  out << "initial_cwnd_segments = " << sc.tcp.initial_cwnd_segments << "\n";
  out << "max_retransmits = " << sc.tcp.max_retransmits << "\n";
  out << "advertised_window = " << sc.tcp.advertised_window << "\n";

  out << "\n[hosts]\n";
  for (const auto& h : sc.topology.hosts) {
    out << h << "\n";
  }
  out << "\n[switches]\n";
  for (const auto& s : sc.topology.switches) {
    out << s << "\n";
  }
  out << "\n[links]\n";
  out << "# name nodeA nodeB rate_bps delay_us queue_bytes label\n";
  for (const auto& l : sc.topology.links) {
    out << l.name << " " << l.a << " " << l.b << " " << l.rate_bps << " "
        << l.delay_us << " " << l.queue_bytes << " " << l.label << "\n";
  }
  out << "\n[elephants]\n";
  out << "# src dst count start_s duration_s\n";
  for (const auto& e : sc.elephants) {
    out << e.src << " " << e.dst << " " << e.count << " " << e.start_s << " "
        << e.duration_s << "\n";
  }
  out << "\n[mice]\n";
  out << "# client server clients requests response_bytes request_bytes"
         " start_s\n";
  for (const auto& m : sc.mice) {
    out << m.client << " " << m.server << " " << m.clients << " "
        << m.requests << " " << m.response_bytes << " " << m.request_bytes
        << " " << m.start_s << "\n";
  }
  return out.str();
}

Scenario parse_scenario(const std::string& text) {
  Scenario sc;
  sc.name = "unnamed";
  std::istringstream in(text);
  std::string raw;
  std::string section;
  size_t lineno = 0;

  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw
                                                      : raw.substr(0, hash));
    if (line.empty()) {
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') {
        fail(lineno, "unterminated section header");
      }
      section = line.substr(1, line.size() - 2);
      if (section != "rwndq" && section != "tcp" && section != "hosts" &&
          section != "switches" && section != "links" &&
          section != "elephants" && section != "mice") {
        fail(lineno, "unknown section [" + section + "]");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (section.empty() || section == "rwndq" || section == "tcp") {
      if (eq == std::string::npos) {
        fail(lineno, "expected key = value");
      }
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (section.empty()) {
        if (key == "name") {
          sc.name = value;
        } else if (key == "discipline") {
          sc.discipline = discipline_from_string(value);
        } else if (key == "duration_s") {
          sc.duration_s = parse_f64(value, lineno);
        } else if (key == "sample_interval_s") {
          sc.sample_interval_s = parse_f64(value, lineno);
        } else if (key == "warmup_s") {
          sc.warmup_s = parse_f64(value, lineno);
        } else if (key == "seed") {
          sc.seed = parse_u64(value, lineno);
        } else if (key == "jitter_us") {
          sc.start_jitter_us =
              static_cast<uint32_t>(parse_u64(value, lineno));
        } else {
          fail(lineno, "unknown key '" + key + "'");
        }
      } else if (section == "rwndq") {
        if (key == "commit_ticks") {
          sc.rwndq.commit_ticks =
              static_cast<uint32_t>(parse_u64(value, lineno));
        } else if (key == "tick_interval_us") {
          sc.rwndq.tick_interval_us = parse_u64(value, lineno);
        } else if (key == "target_fraction") {
          const auto slash = value.find('/');
          if (slash == std::string::npos) {
            fail(lineno, "target_fraction wants numer/denom");
          }
          sc.rwndq.target_numer = static_cast<uint32_t>(
              parse_u64(trim(value.substr(0, slash)), lineno));
          sc.rwndq.target_denom = static_cast<uint32_t>(
              parse_u64(trim(value.substr(slash + 1)), lineno));
          if (sc.rwndq.target_denom == 0) {
            fail(lineno, "target_fraction denominator is zero");
          }
        } else if (key == "tcp_min_mss") {
          sc.rwndq.tcp_min_mss =
              static_cast<uint32_t>(parse_u64(value, lineno));
        } else if (key == "mss") {
          sc.rwndq.mss = static_cast<uint32_t>(parse_u64(value, lineno));
        } else {
          fail(lineno, "unknown key '" + key + "' in [rwndq]");
        }
      } else {  // tcp
        if (key == "mss") {
          sc.tcp.mss = static_cast<uint32_t>(parse_u64(value, lineno));
        } else if (key == "rto_min_us") {
          sc.tcp.rto_min_us = parse_u64(value, lineno);
        } else if (key == "initial_cwnd_segments") {
          sc.tcp.initial_cwnd_segments =
              static_cast<uint32_t>(parse_u64(value, lineno));
        } else if (key == "max_retransmits") {
          sc.tcp.max_retransmits =
              static_cast<uint32_t>(parse_u64(value, lineno));
        } else if (key == "advertised_window") {
          sc.tcp.advertised_window =
              static_cast<uint16_t>(parse_u64(value, lineno));
        } else {
          fail(lineno, "unknown key '" + key + "' in [tcp]");
        }
      }
      continue;
    }

    const auto cols = split_ws(line);
    if (section == "hosts") {
      if (cols.size() != 1) {
        fail(lineno, "host rows hold one name");
      }
      sc.topology.hosts.push_back(cols[0]);
    } else if (section == "switches") {
      if (cols.size() != 1) {
        fail(lineno, "switch rows hold one name");
      }
      sc.topology.switches.push_back(cols[0]);
    } else if (section == "links") {
      if (cols.size() != 7) {
        fail(lineno,
             "link rows: name nodeA nodeB rate_bps delay_us queue_bytes"
             " label");
      }
      simengine::LinkSpec ls;
      ls.name = cols[0];
      ls.a = cols[1];
      ls.b = cols[2];
      ls.rate_bps = parse_u64(cols[3], lineno);
      ls.delay_us = parse_u64(cols[4], lineno);
      ls.queue_bytes = parse_u64(cols[5], lineno);
      ls.label = static_cast<int>(parse_u64(cols[6], lineno));
      sc.topology.links.push_back(std::move(ls));
    } else if (section == "elephants") {
      if (cols.size() != 5) {
        fail(lineno, "elephant rows: src dst count start_s duration_s");
      }
      ElephantGroup e;
      e.src = cols[0];
      e.dst = cols[1];
      e.count = static_cast<uint32_t>(parse_u64(cols[2], lineno));
      e.start_s = parse_f64(cols[3], lineno);
      e.duration_s = parse_f64(cols[4], lineno);
      sc.elephants.push_back(std::move(e));
    } else if (section == "mice") {
      if (cols.size() != 7) {
        fail(lineno,
             "mice rows: client server clients requests response_bytes"
             " request_bytes start_s");
      }
      MiceGroup m;
      m.client = cols[0];
      m.server = cols[1];
      m.clients = static_cast<uint32_t>(parse_u64(cols[2], lineno));
      m.requests = static_cast<uint32_t>(parse_u64(cols[3], lineno));
      m.response_bytes = parse_u64(cols[4], lineno);
      m.request_bytes = static_cast<uint32_t>(parse_u64(cols[5], lineno));
      m.start_s = parse_f64(cols[6], lineno);
      sc.mice.push_back(std::move(m));
    }
  }
  return sc;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ScenarioError("cannot open scenario file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace rwndqsim::scenarios
