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

#include <span>
#include <string>
#include <string_view>

#include "mqnt/harness/result.hpp"

namespace mqnt {

enum class ReportFormat { csv, json, markdown };
std::string_view to_string(ReportFormat f);
ReportFormat parse_report_format(std::string_view s);

// csv and json carry every field except wall_time, so equal runs give equal
// bytes. markdown pivots each (method, bits, shots, metric) group into test
// rows x calibration columns, marks iid cells with "(iid)" and bolds the best
// cell of each row (highest accuracy, lowest ppl; all ties bolded). With a
// single calibration source it instead lays out method/bit rows x test
// columns and bolds the best cell of each column. Failed cells show "-".
std::string emit_report(std::span<const RunResult> results, ReportFormat format);

}  // namespace mqnt
