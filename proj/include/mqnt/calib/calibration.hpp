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
#include <span>
#include <string_view>

#include "mqnt/calib/dataset.hpp"

namespace mqnt {

enum class CalibrationMode { from_train, carve_from_test };
std::string_view to_string(CalibrationMode m);
CalibrationMode parse_calibration_mode(std::string_view s);

struct CalibrationPolicy {
  CalibrationMode mode = CalibrationMode::carve_from_test;
  std::size_t n = 128;
  std::size_t reserve = 300;  // carve_from_test only
  std::uint64_t seed = 42;
  std::size_t max_tokens = 0;  // truncate each sequence to this length; 0 = keep whole records
};

struct CalibrationResult {
  CalibrationSet calibration;
  // carve_from_test: the source minus every carved record.
  // from_train: the source minus the first n records.
  DatasetHandle remaining;
  // Records drawn but not used for calibration: the carved block beyond the
  // first n (carve_from_test) or the split beyond the first n (from_train).
  // Few-shot exemplars come from here.
  DatasetHandle exemplars;
};

// from_train: the first n records of a train/validation split.
// carve_from_test: a SplitMix64(seed) partial Fisher-Yates shuffle of the
// record positions picks `reserve` records (for i in 0..reserve-1:
// j = i + uniform_below(N - i); swap(p[i], p[j])); the first n of that block,
// in sampled order, are the calibration set.
// n == 0 is a no-op: empty calibration, source returned unchanged.
// Throws SizeError naming the deficit when the source is too small.
CalibrationResult build_calibration_set(const DatasetHandle& src, const CalibrationPolicy& policy);

// The first k positions of a partial Fisher-Yates shuffle of [0, n).
std::vector<std::size_t> partial_shuffle(std::size_t n, std::size_t k, std::uint64_t seed);

// n contiguous windows of seg_len tokens; each start drawn with
// uniform_below(len - seg_len + 1), with replacement.
CalibrationSet build_c4_style_segments(std::span<const TokenId> corpus, std::size_t n, std::size_t seg_len,
                                       std::uint64_t seed, std::string_view dataset_id = "corpus");

}  // namespace mqnt
