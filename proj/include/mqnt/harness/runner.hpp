// Copyright 2026 The mqnt Authors
// SPDX-License-Identifier: Apache-2.0
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

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "mqnt/harness/config.hpp"
#include "mqnt/harness/result.hpp"

namespace mqnt {

// Progress lines ("quantize reviews gptq W4A16 ...") for the CLI; may be empty.
using ProgressSink = std::function<void(std::string_view)>;

// Runs the full (scenario x method x bits x shots x metric) matrix, with a
// 16/16 baseline row per scenario cell. Quantized models are built once per
// (calibration source, method, bits) from the FP snapshot. A failing cell is
// recorded as a failed row and the run continues. Results come back sorted.
std::vector<RunResult> run_matrix(const RunConfig& cfg, const ProgressSink& progress = {});

// Number of rows run_matrix produces for `scenario_cells` (calib, test)
// pairs: (methods + 1) x cells x shots x metrics.
std::size_t expected_row_count(const RunConfig& cfg, std::size_t scenario_cells);

}  // namespace mqnt
