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

#include "mqnt/quantizers/spqr.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "internal.hpp"
#include "mqnt/errors.hpp"

namespace mqnt {

namespace {

void check_shapes(const Matrix& w, const Matrix& h) {
  if (h.rows() != w.cols() || h.cols() != w.cols()) {
    throw ShapeError("spqr: Hessian is " + std::to_string(h.rows()) + "x" + std::to_string(h.cols()) +
                     ", layer has " + std::to_string(w.cols()) + " inputs");
  }
}

Matrix sensitivity_damped(const Matrix& w, const Matrix& hd, const QuantConfig& cfg) {
  const std::size_t gs = cfg.group_size;
  Matrix sens(w.rows(), w.cols());
  std::vector<double> pre_lo, pre_hi, suf_lo, suf_hi;
  constexpr double inf = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < w.rows(); ++r) {
    const auto row = w.row(r);
    for (std::size_t start = 0; start < w.cols(); start += gs) {
      const std::size_t len = std::min(gs, w.cols() - start);
      const auto grp = row.subspan(start, len);
      // Range of the group without element k, from prefix and suffix extrema.
      pre_lo.assign(len + 1, inf);
      pre_hi.assign(len + 1, -inf);
      suf_lo.assign(len + 1, inf);
      suf_hi.assign(len + 1, -inf);
      for (std::size_t k = 0; k < len; ++k) {
        pre_lo[k + 1] = std::min(pre_lo[k], grp[k]);
        pre_hi[k + 1] = std::max(pre_hi[k], grp[k]);
      }
      for (std::size_t k = len; k-- > 0;) {
        suf_lo[k] = std::min(suf_lo[k + 1], grp[k]);
        suf_hi[k] = std::max(suf_hi[k + 1], grp[k]);
      }
      for (std::size_t k = 0; k < len; ++k) {
        const double lo = std::min(pre_lo[k], suf_lo[k + 1]);
        const double hi = std::max(pre_hi[k], suf_hi[k + 1]);
        const std::array<double, 2> range = len > 1 ? std::array<double, 2>{lo, hi} : std::array<double, 2>{0.0, 0.0};
        const GroupParams p = fit_group(range, cfg.w_bits, cfg.scheme);
        const double q = dequantize_value(quantize_value(grp[k], p, cfg.w_bits, cfg.scheme), p, cfg.w_bits, cfg.scheme);
        const double e = grp[k] - q;
        sens(r, start + k) = e * e * hd(start + k, start + k);
      }
    }
  }
  return sens;
}

}  // namespace

Matrix spqr_sensitivity(const Matrix& w, const Matrix& h, const MethodSpec& spec) {
  spec.validate();
  check_shapes(w, h);
  return sensitivity_damped(w, detail::prepare_hessian(h, spec.params.damping), spec.cfg);
}

std::vector<bool> spqr_select_outliers(const Matrix& sensitivity, const MethodSpec& spec) {
  const std::size_t rows = sensitivity.rows(), cols = sensitivity.cols();
  const std::size_t gs = spec.cfg.group_size;
  std::vector<bool> mask(rows * cols, false);
  const auto cap = static_cast<std::size_t>(
      std::ceil(spec.params.outlier_cap_fraction * static_cast<double>(rows) * static_cast<double>(cols)));
  if (cap == 0) return mask;

  std::vector<std::size_t> candidates;
  for (std::size_t r = 0; r < rows; ++r) {
    const auto row = sensitivity.row(r);
    for (std::size_t start = 0; start < cols; start += gs) {
      const std::size_t len = std::min(gs, cols - start);
      double sum = 0.0;
      for (std::size_t k = 0; k < len; ++k) sum += row[start + k];
      const double bar = spec.params.outlier_threshold * (sum / static_cast<double>(len));
      for (std::size_t k = 0; k < len; ++k) {
        if (row[start + k] > bar) candidates.push_back(r * cols + start + k);
      }
    }
  }
  const auto& s = sensitivity.storage();
  std::stable_sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) { return s[a] > s[b]; });
  for (std::size_t i = 0; i < std::min(cap, candidates.size()); ++i) mask[candidates[i]] = true;
  return mask;
}

LayerResult spqr_quantize_layer(const Matrix& w, const Matrix& h, const MethodSpec& spec) {
  spec.validate();
  check_shapes(w, h);
  if (spec.cfg.passthrough()) return detail::passthrough_result(w, spec);
  const Matrix hd = detail::prepare_hessian(h, spec.params.damping);
  const std::vector<bool> mask = spqr_select_outliers(sensitivity_damped(w, hd, spec.cfg), spec);
  QuantizedTensor q = detail::gptq_core(w, hd, spec.cfg, &mask);
  QuantizationReport rep = detail::make_report(w, q, h, hd, spec);
  return {std::move(q), std::move(rep)};
}

}  // namespace mqnt
