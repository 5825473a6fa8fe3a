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
#include <string>
#include <string_view>

namespace mqnt {

enum class Scheme { asymmetric, symmetric };
enum class SequentialMode { layer_sequential, block_sequential };

std::string_view to_string(Scheme s);
std::string_view to_string(SequentialMode m);
Scheme parse_scheme(std::string_view s);
SequentialMode parse_sequential_mode(std::string_view s);

struct QuantConfig {
  int w_bits = 4;
  int a_bits = 16;
  std::size_t group_size = 128;
  Scheme scheme = Scheme::asymmetric;
  SequentialMode sequential_mode = SequentialMode::block_sequential;

  bool passthrough() const { return w_bits == 16; }
  // Throws ShapeError naming the offending field.
  void validate() const;
  bool operator==(const QuantConfig&) const = default;
};

bool valid_weight_bits(int bits);
bool valid_activation_bits(int bits);

inline constexpr double kScaleFloor = 1e-12;

// Affine grid for one group. `zero_point` is the logical zero point; the
// symmetric scheme has zero_point 0 and stores codes with an implicit bias of
// 2^(bits-1) so they stay unsigned.
struct GroupParams {
  double scale = 1.0;
  std::int32_t zero_point = 0;
  bool operator==(const GroupParams&) const = default;
};

inline std::uint32_t max_code(int bits) { return (std::uint32_t{1} << bits) - 1; }

// Min/max fit over the group. The asymmetric range is widened to include
// zero before the scale is taken.
GroupParams fit_group(std::span<const double> values, int bits, Scheme scheme);

// Round half away from zero, saturate to the code range.
std::uint32_t quantize_value(double x, const GroupParams& p, int bits, Scheme scheme = Scheme::asymmetric);
double dequantize_value(std::uint32_t code, const GroupParams& p, int bits, Scheme scheme = Scheme::asymmetric);

// Representable interval [lo, hi] of a fitted grid.
double grid_min(const GroupParams& p, int bits, Scheme scheme);
double grid_max(const GroupParams& p, int bits, Scheme scheme);

}  // namespace mqnt
