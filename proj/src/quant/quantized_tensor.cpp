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

#include "mqnt/quant/quantized_tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mqnt/errors.hpp"
#include "mqnt/quant/packing.hpp"

namespace mqnt {

std::size_t QuantizedTensor::groups_per_row() const {
  if (is_passthrough()) return 0;
  return (cols_ + group_size_ - 1) / group_size_;
}

std::size_t QuantizedTensor::group_length(std::size_t g) const {
  const std::size_t start = g * group_size_;
  return std::min(group_size_, cols_ - start);
}

std::size_t QuantizedTensor::bytes_per_row() const {
  std::size_t n = 0;
  for (std::size_t g = 0; g < groups_per_row(); ++g) n += packed_group_bytes(group_length(g), bits_);
  return n;
}

QuantizedTensor QuantizedTensor::from_codes(std::size_t rows, std::size_t cols, int bits, std::size_t group_size,
                                            Scheme scheme, std::span<const std::uint32_t> codes,
                                            std::vector<GroupParams> params, std::vector<Outlier> outliers,
                                            std::vector<double> input_scales) {
  if (bits == 16) throw FormatError("from_codes: use passthrough() for 16-bit tensors");
  if (group_size == 0) throw FormatError("group_size must be >= 1");
  if (codes.size() != rows * cols) throw FormatError("from_codes: code count mismatch");
  QuantizedTensor q;
  q.rows_ = rows;
  q.cols_ = cols;
  q.bits_ = bits;
  q.group_size_ = group_size;
  q.scheme_ = scheme;
  q.packed_.resize(rows * q.bytes_per_row());
  std::size_t off = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t g = 0; g < q.groups_per_row(); ++g) {
      const std::size_t len = q.group_length(g);
      const std::size_t nbytes = packed_group_bytes(len, bits);
      pack_codes(codes.subspan(r * cols + g * group_size, len), bits,
                 std::span<std::uint8_t>(q.packed_.data() + off, nbytes));
      off += nbytes;
    }
  }
  q.params_ = std::move(params);
  std::sort(outliers.begin(), outliers.end(),
            [](const Outlier& a, const Outlier& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
  q.outliers_ = std::move(outliers);
  q.input_scales_ = std::move(input_scales);
  q.validate();
  return q;
}

QuantizedTensor QuantizedTensor::from_packed(std::size_t rows, std::size_t cols, int bits, std::size_t group_size,
                                             Scheme scheme, std::vector<std::uint8_t> packed,
                                             std::vector<GroupParams> params, std::vector<Outlier> outliers,
                                             std::vector<double> input_scales) {
  if (bits == 16) throw FormatError("from_packed: 16-bit tensors are passthrough");
  if (group_size == 0) throw FormatError("group_size must be >= 1");
  QuantizedTensor q;
  q.rows_ = rows;
  q.cols_ = cols;
  q.bits_ = bits;
  q.group_size_ = group_size;
  q.scheme_ = scheme;
  q.packed_ = std::move(packed);
  q.params_ = std::move(params);
  q.outliers_ = std::move(outliers);
  q.input_scales_ = std::move(input_scales);
  q.validate();
  return q;
}

QuantizedTensor QuantizedTensor::passthrough(const Matrix& w, std::vector<double> input_scales) {
  QuantizedTensor q;
  q.rows_ = w.rows();
  q.cols_ = w.cols();
  q.bits_ = 16;
  q.passthrough_ = w;
  q.input_scales_ = std::move(input_scales);
  q.validate();
  return q;
}

QuantizedTensor QuantizedTensor::with_input_scales(std::vector<double> input_scales) const {
  QuantizedTensor q = *this;
  q.input_scales_ = std::move(input_scales);
  q.validate();
  return q;
}

void QuantizedTensor::validate() const {
  if (!input_scales_.empty()) {
    if (input_scales_.size() != cols_) throw FormatError("input_scales length != cols");
    for (double s : input_scales_) {
      if (!(s > 0.0) || !std::isfinite(s)) throw FormatError("input scale must be positive and finite");
    }
  }
  if (is_passthrough()) {
    if (passthrough_.rows() != rows_ || passthrough_.cols() != cols_) throw FormatError("passthrough shape mismatch");
    return;
  }
  if (bits_ != 2 && bits_ != 3 && bits_ != 4 && bits_ != 8) {
    throw FormatError("unsupported bit-width " + std::to_string(bits_));
  }
  if (packed_.size() != rows_ * bytes_per_row()) {
    throw FormatError("packed payload is " + std::to_string(packed_.size()) + " bytes, expected " +
                      std::to_string(rows_ * bytes_per_row()));
  }
  if (params_.size() != rows_ * groups_per_row()) throw FormatError("group parameter count mismatch");
  for (const auto& p : params_) {
    if (!(p.scale > 0.0) || !std::isfinite(p.scale)) throw FormatError("group scale must be positive and finite");
    if (scheme_ == Scheme::symmetric ? p.zero_point != 0
                                     : (p.zero_point < 0 || static_cast<std::uint32_t>(p.zero_point) > max_code(bits_))) {
      throw FormatError("zero point out of range");
    }
  }
  for (std::size_t i = 0; i < outliers_.size(); ++i) {
    const auto& o = outliers_[i];
    if (o.row >= rows_ || o.col >= cols_) throw FormatError("outlier position out of range");
    if (!std::isfinite(o.value)) throw FormatError("non-finite outlier value");
    if (i > 0) {
      const auto& prev = outliers_[i - 1];
      if (prev.row == o.row && prev.col == o.col) throw FormatError("duplicate outlier position");
      if (prev.row > o.row || (prev.row == o.row && prev.col > o.col)) throw FormatError("outliers not in row-major order");
    }
  }
}

std::vector<std::uint32_t> QuantizedTensor::unpack() const {
  if (is_passthrough()) return {};
  std::vector<std::uint32_t> codes(rows_ * cols_);
  std::size_t off = 0;
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t g = 0; g < groups_per_row(); ++g) {
      const std::size_t len = group_length(g);
      const std::size_t nbytes = packed_group_bytes(len, bits_);
      unpack_codes(std::span<const std::uint8_t>(packed_.data() + off, nbytes), bits_,
                   std::span<std::uint32_t>(codes.data() + r * cols_ + g * group_size_, len));
      off += nbytes;
    }
  }
  return codes;
}

Matrix dequantize(const QuantizedTensor& q) {
  if (q.is_passthrough()) return q.passthrough_values();
  const auto codes = q.unpack();
  Matrix out(q.rows(), q.cols());
  for (std::size_t r = 0; r < q.rows(); ++r) {
    for (std::size_t c = 0; c < q.cols(); ++c) {
      out(r, c) = dequantize_value(codes[r * q.cols() + c], q.params(r, c / q.group_size()), q.bits(), q.scheme());
    }
  }
  for (const auto& o : q.outliers()) out(o.row, o.col) = o.value;
  return out;
}

Matrix effective_weights(const QuantizedTensor& q) {
  Matrix out = dequantize(q);
  const auto& s = q.input_scales();
  if (s.empty()) return out;
  for (std::size_t r = 0; r < out.rows(); ++r)
    for (std::size_t c = 0; c < out.cols(); ++c) out(r, c) /= s[c];
  return out;
}

}  // namespace mqnt
