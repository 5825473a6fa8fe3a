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

#include "mqnt/quant/grid.hpp"

#include <algorithm>
#include <cmath>

#include "mqnt/errors.hpp"

namespace mqnt {

std::string_view to_string(Scheme s) { return s == Scheme::asymmetric ? "asymmetric" : "symmetric"; }

std::string_view to_string(SequentialMode m) {
  return m == SequentialMode::layer_sequential ? "layer_sequential" : "block_sequential";
}

Scheme parse_scheme(std::string_view s) {
  if (s == "asymmetric") return Scheme::asymmetric;
  if (s == "symmetric") return Scheme::symmetric;
  throw FormatError("unknown scheme '" + std::string(s) + "'");
}

SequentialMode parse_sequential_mode(std::string_view s) {
  if (s == "layer_sequential") return SequentialMode::layer_sequential;
  if (s == "block_sequential") return SequentialMode::block_sequential;
  throw FormatError("unknown sequential mode '" + std::string(s) + "'");
}

bool valid_weight_bits(int bits) { return bits == 2 || bits == 3 || bits == 4 || bits == 8 || bits == 16; }
bool valid_activation_bits(int bits) { return bits == 8 || bits == 16; }

void QuantConfig::validate() const {
  if (!valid_weight_bits(w_bits)) throw ShapeError("w_bits must be one of 2,3,4,8,16, got " + std::to_string(w_bits));
  if (!valid_activation_bits(a_bits)) throw ShapeError("a_bits must be 8 or 16, got " + std::to_string(a_bits));
  if (group_size < 1) throw ShapeError("group_size must be >= 1");
}

namespace {

std::int32_t symmetric_bias(int bits) { return std::int32_t{1} << (bits - 1); }
std::int32_t symmetric_limit(int bits) { return symmetric_bias(bits) - 1; }

}  // namespace

GroupParams fit_group(std::span<const double> values, int bits, Scheme scheme) {
  if (values.empty()) throw ShapeError("fit_group: empty group");
  if (scheme == Scheme::symmetric) {
    double amax = 0.0;
    for (double v : values) amax = std::max(amax, std::abs(v));
    const double scale = std::max(amax / symmetric_limit(bits), kScaleFloor);
    return {scale, 0};
  }
  double lo = 0.0, hi = 0.0;
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double levels = static_cast<double>(max_code(bits));
  const double scale = std::max((hi - lo) / levels, kScaleFloor);
  const double zp = std::clamp(std::round(-lo / scale), 0.0, levels);
  return {scale, static_cast<std::int32_t>(zp)};
}

std::uint32_t quantize_value(double x, const GroupParams& p, int bits, Scheme scheme) {
  if (scheme == Scheme::symmetric) {
    const double lim = symmetric_limit(bits);
    const double q = std::clamp(std::round(x / p.scale), -lim, lim);
    return static_cast<std::uint32_t>(q + symmetric_bias(bits));
  }
  const double q = std::clamp(std::round(x / p.scale) + p.zero_point, 0.0, static_cast<double>(max_code(bits)));
  return static_cast<std::uint32_t>(q);
}

double dequantize_value(std::uint32_t code, const GroupParams& p, int bits, Scheme scheme) {
  const std::int32_t offset = scheme == Scheme::symmetric ? symmetric_bias(bits) : p.zero_point;
  return static_cast<double>(static_cast<std::int64_t>(code) - offset) * p.scale;
}

double grid_min(const GroupParams& p, int bits, Scheme scheme) {
  if (scheme == Scheme::symmetric) return -symmetric_limit(bits) * p.scale;
  return dequantize_value(0, p, bits, scheme);
}

double grid_max(const GroupParams& p, int bits, Scheme scheme) {
  if (scheme == Scheme::symmetric) return symmetric_limit(bits) * p.scale;
  return dequantize_value(max_code(bits), p, bits, scheme);
}

}  // namespace mqnt
