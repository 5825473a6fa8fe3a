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
#include <vector>

#include "mqnt/numerics/matrix.hpp"
#include "mqnt/quant/grid.hpp"

namespace mqnt {

// Full-precision weight entry kept outside the grid.
struct Outlier {
  std::uint32_t row = 0;
  std::uint32_t col = 0;
  double value = 0.0;
  bool operator==(const Outlier&) const = default;
};

// Result of quantizing one [rows x cols] weight matrix (rows = output
// features, cols = input features). Groups run along each row, `group_size`
// consecutive input features per group; the last group of a row may be
// short. Packed bytes are laid out row-major, group after group, each group
// padded as described in packing.hpp. Params are one per (row, group) in the
// same order.
//
// `input_scales`, when present, means the stored grid represents
// W * diag(s): the effective weight is dequantize(q) / s per column, and a
// consumer divides its input by s before the product.
//
// With bits == 16 the tensor is a passthrough: values are held exactly and
// no codes or params exist.
class QuantizedTensor {
 public:
  QuantizedTensor() = default;

  static QuantizedTensor from_codes(std::size_t rows, std::size_t cols, int bits, std::size_t group_size,
                                    Scheme scheme, std::span<const std::uint32_t> codes,
                                    std::vector<GroupParams> params, std::vector<Outlier> outliers = {},
                                    std::vector<double> input_scales = {});
  static QuantizedTensor from_packed(std::size_t rows, std::size_t cols, int bits, std::size_t group_size,
                                     Scheme scheme, std::vector<std::uint8_t> packed,
                                     std::vector<GroupParams> params, std::vector<Outlier> outliers,
                                     std::vector<double> input_scales);
  static QuantizedTensor passthrough(const Matrix& w, std::vector<double> input_scales = {});

  // Copy carrying the given per-input-channel scales (empty clears them).
  QuantizedTensor with_input_scales(std::vector<double> input_scales) const;

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  int bits() const { return bits_; }
  std::size_t group_size() const { return group_size_; }
  Scheme scheme() const { return scheme_; }
  bool is_passthrough() const { return bits_ == 16; }

  std::size_t groups_per_row() const;
  std::size_t group_length(std::size_t g) const;
  std::size_t bytes_per_row() const;

  const std::vector<std::uint8_t>& packed() const { return packed_; }
  const std::vector<GroupParams>& params() const { return params_; }
  const GroupParams& params(std::size_t row, std::size_t group) const { return params_[row * groups_per_row() + group]; }
  const std::vector<Outlier>& outliers() const { return outliers_; }
  const std::vector<double>& input_scales() const { return input_scales_; }
  const Matrix& passthrough_values() const { return passthrough_; }

  // All codes, row-major, padding dropped. Empty for passthrough tensors.
  std::vector<std::uint32_t> unpack() const;

  bool operator==(const QuantizedTensor&) const = default;

 private:
  void validate() const;

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  int bits_ = 16;
  std::size_t group_size_ = 128;
  Scheme scheme_ = Scheme::asymmetric;
  std::vector<std::uint8_t> packed_;
  std::vector<GroupParams> params_;
  std::vector<Outlier> outliers_;
  std::vector<double> input_scales_;
  Matrix passthrough_;
};

// Grid reconstruction: (code - zero_point) * scale, outliers verbatim.
// For tensors with input scales this is the scaled matrix W * diag(s).
Matrix dequantize(const QuantizedTensor& q);

// dequantize(q) with column j divided by input_scales[j]; equals
// dequantize(q) when there are no input scales.
Matrix effective_weights(const QuantizedTensor& q);

}  // namespace mqnt
