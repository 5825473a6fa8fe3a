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
#include <span>
#include <string_view>
#include <vector>

#include "mqnt/calib/dataset.hpp"

namespace mqnt {

enum class Shift { iid, cross_dataset, cross_subject };
std::string_view to_string(Shift s);
Shift parse_shift(std::string_view s);

// One (calibration source, test source) cell of a result grid.
struct ScenarioSpec {
  DatasetHandle calib_source;
  DatasetHandle test_source;
  Shift shift = Shift::iid;
  std::size_t shots = 0;

  bool iid() const { return shift == Shift::iid; }
  // iid: same dataset and subject; cross_subject: same dataset, different
  // subject tags; cross_dataset: different dataset ids. Throws ScenarioError.
  void validate() const;
};

// Cross product of (calib, test) pairs allowed by the requested shift kinds,
// test-major (one result-table row per test source), times each shot count.
//   cross_dataset: every pair of handles whose dataset ids differ, plus the
//     iid diagonal.
//   cross_subject: every pair of handles sharing a dataset id with subject
//     tags set, the diagonal flagged iid.
// The diagonal is emitted once even when both kinds are requested.
std::vector<ScenarioSpec> enumerate_scenarios(std::span<const DatasetHandle> datasets, std::span<const Shift> kinds,
                                              std::span<const std::size_t> shots = {});

}  // namespace mqnt
