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

#include "mqnt/calib/scenario.hpp"

#include <algorithm>
#include <string>

#include "mqnt/errors.hpp"

namespace mqnt {

std::string_view to_string(Shift s) {
  switch (s) {
    case Shift::iid: return "iid";
    case Shift::cross_dataset: return "cross_dataset";
    case Shift::cross_subject: return "cross_subject";
  }
  return "?";
}

Shift parse_shift(std::string_view s) {
  if (s == "iid") return Shift::iid;
  if (s == "cross_dataset") return Shift::cross_dataset;
  if (s == "cross_subject") return Shift::cross_subject;
  throw FormatError("unknown shift kind '" + std::string(s) + "'");
}

void ScenarioSpec::validate() const {
  const bool same_id = calib_source.dataset_id() == test_source.dataset_id();
  const bool same_subject = calib_source.subject_tag() == test_source.subject_tag();
  switch (shift) {
    case Shift::iid:
      if (!same_id || !same_subject) throw ScenarioError("iid scenario needs the same dataset and subject");
      break;
    case Shift::cross_subject:
      if (!same_id) throw ScenarioError("cross_subject scenario needs the same dataset id");
      if (!calib_source.subject_tag() || !test_source.subject_tag() || same_subject) {
        throw ScenarioError("cross_subject scenario needs two different subject tags");
      }
      break;
    case Shift::cross_dataset:
      if (same_id) throw ScenarioError("cross_dataset scenario needs different dataset ids");
      break;
  }
}

std::vector<ScenarioSpec> enumerate_scenarios(std::span<const DatasetHandle> datasets, std::span<const Shift> kinds,
                                              std::span<const std::size_t> shots) {
  const std::vector<std::size_t> default_shots{0};
  if (shots.empty()) shots = default_shots;
  const auto wants = [&](Shift s) { return std::find(kinds.begin(), kinds.end(), s) != kinds.end(); };
  std::vector<ScenarioSpec> out;
  for (std::size_t ti = 0; ti < datasets.size(); ++ti) {
    const auto& test = datasets[ti];
    for (std::size_t ci = 0; ci < datasets.size(); ++ci) {
      const auto& calib = datasets[ci];
      const bool same_id = calib.dataset_id() == test.dataset_id();
      const bool tagged = calib.subject_tag() && test.subject_tag();
      Shift shift;
      if (ci == ti) {
        if (!wants(Shift::cross_dataset) && !(wants(Shift::cross_subject) && tagged) && !wants(Shift::iid)) continue;
        shift = Shift::iid;
      } else if (!same_id && wants(Shift::cross_dataset)) {
        shift = Shift::cross_dataset;
      } else if (same_id && tagged && calib.subject_tag() != test.subject_tag() && wants(Shift::cross_subject)) {
        shift = Shift::cross_subject;
      } else {
        continue;
      }
      for (std::size_t s : shots) out.push_back({calib, test, shift, s});
    }
  }
  return out;
}

}  // namespace mqnt
