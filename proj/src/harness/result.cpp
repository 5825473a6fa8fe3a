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

#include "mqnt/harness/result.hpp"

#include <algorithm>
#include <tuple>

namespace mqnt {

bool result_less(const RunResult& a, const RunResult& b) {
  const auto key = [](const RunResult& r) {
    return std::make_tuple(std::cref(r.test_id), std::cref(r.calib_id), r.method != kBaselineMethod,
                           std::cref(r.method), -r.w_bits, -r.a_bits, r.shots, static_cast<int>(r.metric));
  };
  return key(a) < key(b);
}

void sort_results(std::vector<RunResult>& results) { std::stable_sort(results.begin(), results.end(), result_less); }

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace mqnt
