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

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mqnt/harness/result.hpp"

namespace mqnt {

// Results are CSV preceded by a schema line "# mqnt-results v<N>".
inline constexpr int kResultsSchemaVersion = 1;

// Header row plus one row per result. Reals use the shortest round-trip
// form, so parsing recovers them bit-exactly. wall_time is the only
// non-deterministic column and is left out unless asked for.
std::string results_to_csv(std::span<const RunResult> results, bool include_wall_time);
std::string results_to_json(std::span<const RunResult> results, bool include_wall_time);

std::string results_file_text(std::span<const RunResult> results);
// Throws VersionError for any other schema version (no partial parse) and
// FormatError for malformed rows.
std::vector<RunResult> parse_results_file(std::string_view text);

void write_results(const std::filesystem::path& path, std::span<const RunResult> results);
std::vector<RunResult> read_results(const std::filesystem::path& path);

}  // namespace mqnt
