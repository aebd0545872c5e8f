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

#pragma once

#include <cstdint>
#include <functional>

namespace eads {

// Millisecond wall-clock source for checkpoint timestamps. Injectable so
// scenario runs and tests produce byte-identical histories.
using Clock = std::function<std::int64_t()>;

std::int64_t system_time_ms();
Clock system_clock();

// Starts at start_ms and advances by step_ms per call.
Clock fixed_step_clock(std::int64_t start_ms, std::int64_t step_ms);

}  // namespace eads
