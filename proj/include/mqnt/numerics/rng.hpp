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

#include <cstdint>

namespace mqnt {

// SplitMix64 (Steele, Lea & Flood). The whole sequence is pinned so seeded
// runs reproduce bit-identically across platforms and standard libraries:
//
//   state += 0x9E3779B97F4A7C15
//   z = state
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   return z ^ (z >> 31)
//
// Test vector: seed 0 yields 0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4,
// 0x06C45D188009454F.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();

  // Unbiased integer in [0, bound) by rejection: draws r until
  // r >= (2^64 - bound) mod bound, then returns r mod bound.
  std::uint64_t uniform_below(std::uint64_t bound);

  // Uniform double in [0, 1) from the top 53 bits.
  double uniform01();

  // Standard normal by Box-Muller (cosine branch only, two draws per call).
  double normal();

  // Independent child stream seeded from the next output.
  SplitMix64 split() { return SplitMix64(next()); }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace mqnt
