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

#include "mqnt/quant/rtn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "mqnt/errors.hpp"

namespace mqnt {

QuantizedTensor rtn_quantize(const Matrix& w, const QuantConfig& cfg) {
  cfg.validate();
  if (cfg.passthrough()) return QuantizedTensor::passthrough(w);
  const std::size_t gs = cfg.group_size;
  const std::size_t groups = (w.cols() + gs - 1) / gs;
  std::vector<std::uint32_t> codes(w.size());
  std::vector<GroupParams> params;
  params.reserve(w.rows() * groups);
  for (std::size_t r = 0; r < w.rows(); ++r) {
    const auto row = w.row(r);
    for (std::size_t g = 0; g < groups; ++g) {
      const std::size_t start = g * gs;
      const std::size_t len = std::min(gs, w.cols() - start);
      const auto p = fit_group(row.subspan(start, len), cfg.w_bits, cfg.scheme);
      params.push_back(p);
      for (std::size_t c = start; c < start + len; ++c) {
        codes[r * w.cols() + c] = quantize_value(row[c], p, cfg.w_bits, cfg.scheme);
      }
    }
  }
  return QuantizedTensor::from_codes(w.rows(), w.cols(), cfg.w_bits, gs, cfg.scheme, codes, std::move(params));
}

void quantize_activations_dynamic_inplace(Matrix& x, int a_bits) {
  if (!valid_activation_bits(a_bits)) throw ShapeError("a_bits must be 8 or 16, got " + std::to_string(a_bits));
  if (a_bits == 16) return;
  const double limit = static_cast<double>((1 << (a_bits - 1)) - 1);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    auto row = x.row(r);
    double amax = 0.0;
    for (double v : row) amax = std::max(amax, std::abs(v));
    const double scale = std::max(amax / limit, kScaleFloor);
    for (double& v : row) v = std::clamp(std::round(v / scale), -limit, limit) * scale;
  }
}

Matrix quantize_activations_dynamic(const Matrix& x, int a_bits) {
  Matrix out = x;
  quantize_activations_dynamic_inplace(out, a_bits);
  return out;
}

}  // namespace mqnt
