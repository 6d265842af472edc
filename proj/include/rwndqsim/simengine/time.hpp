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
#include <stdexcept>

namespace rwndqsim::simengine {

// Virtual clock in whole microseconds. Integer time keeps runs bit-for-bit
// reproducible; 1us resolution sits well below the 12us serialization of a
// full-size packet at 1 Gb/s.
using SimTime = uint64_t;

inline constexpr SimTime kUsPerSec = 1'000'000;

inline SimTime seconds_to_us(double s) {
  return static_cast<SimTime>(s * static_cast<double>(kUsPerSec) + 0.5);
}

// Wire time of `bytes` at `rate_bps`, rounded up to a whole microsecond.
inline SimTime serialization_us(uint64_t bytes, uint64_t rate_bps) {
  return (bytes * 8 * kUsPerSec + rate_bps - 1) / rate_bps;
}

// An impossible schedule or a violated engine invariant. These indicate a
// bug in the simulation itself, never a modeled protocol condition.
struct SimulationBug : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace rwndqsim::simengine
