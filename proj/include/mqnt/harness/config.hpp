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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mqnt/calib/calibration.hpp"
#include "mqnt/calib/scenario.hpp"
#include "mqnt/eval/metrics.hpp"
#include "mqnt/quantizers/method.hpp"

namespace mqnt {

struct DatasetEntry {
  std::filesystem::path path;                  // test split
  std::optional<std::filesystem::path> train;  // calibration split for from_train
};

struct EvalSettings {
  std::vector<MetricName> metrics{MetricName::accuracy};
  Normalization normalization = Normalization::per_token;
  std::size_t context_len = 0;  // 0 = the model's context length
  std::size_t max_items = 0;    // per test set; 0 = all remaining records
};

struct RunConfig {
  std::filesystem::path model_path;
  std::vector<DatasetEntry> datasets;
  std::vector<MethodSpec> methods;  // one entry per (method, W/A setting)
  std::vector<Shift> shifts{Shift::cross_dataset};
  std::vector<std::size_t> shots{0};
  CalibrationPolicy calibration;
  EvalSettings eval;
  std::size_t max_calibration_tokens = std::size_t{1} << 20;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 42;

  // Canonical text of every resolved field; hashed into result provenance.
  std::string canonical() const;
};

// "4/16" -> {4, 16}. Throws FormatError.
std::pair<int, int> parse_bit_setting(std::string_view s);

// Parses and checks a YAML run config. Relative paths resolve against
// `base_dir`. Collects every violation before throwing ValidationError.
RunConfig validate_config(std::string_view text, const std::filesystem::path& base_dir = ".");
RunConfig load_config(const std::filesystem::path& path);

}  // namespace mqnt
