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

#include <string>

#include "rwndqsim/scenarios/scenario.hpp"

namespace rwndqsim::scenarios {

// Plain-text scenario format: `key = value` scalars, `[section]` headers,
// and whitespace-separated rows inside the topology and traffic sections.
// `#` starts a comment. The full schema is documented in the README and in
// the output of serialize_scenario (every preset round-trips).
std::string serialize_scenario(const Scenario& sc);

// Throws ScenarioError with a line number on malformed input.
Scenario parse_scenario(const std::string& text);

Scenario load_scenario_file(const std::string& path);

}  // namespace rwndqsim::scenarios
