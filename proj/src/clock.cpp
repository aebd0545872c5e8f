// Copyright 2026 The EADS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "eads/clock.hpp"

#include <chrono>
#include <memory>

namespace eads {

std::int64_t system_time_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch())
      .count();
}

Clock system_clock() {
  return [] { return system_time_ms(); };
}

Clock fixed_step_clock(std::int64_t start_ms, std::int64_t step_ms) {
  auto next = std::make_shared<std::int64_t>(start_ms);
  return [next, step_ms] {
    std::int64_t now = *next;
    *next += step_ms;
    return now;
  };
}

}  // namespace eads
