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

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mqnt/calib/scenario.hpp"
#include "mqnt/eval/metrics.hpp"

namespace mqnt {

inline constexpr const char* kBaselineMethod = "baseline";

// One cell of a result table.
struct RunResult {
  std::string method;  // method name, or "baseline" for the FP 16/16 row
  int w_bits = 16;
  int a_bits = 16;
  std::string calib_id;  // DatasetHandle::label() of the calibration source
  std::string test_id;
  Shift shift = Shift::iid;
  bool iid = true;
  std::size_t shots = 0;
  MetricName metric = MetricName::accuracy;
  double value = 0.0;  // NaN for failed cells
  std::size_t n_items = 0;
  bool ok = true;
  std::string error;  // failure reason when !ok
  double wall_time = 0.0;  // seconds; excluded from deterministic reports
  std::uint64_t provenance = 0;

  bool operator==(const RunResult&) const = default;
};

// Canonical order: test, calibration source, baseline first then method
// name, w_bits descending, a_bits descending, shots, metric.
bool result_less(const RunResult& a, const RunResult& b);
void sort_results(std::vector<RunResult>& results);

// FNV-1a 64-bit digest.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace mqnt
