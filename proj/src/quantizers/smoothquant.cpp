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

#include "mqnt/quantizers/smoothquant.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "internal.hpp"
#include "mqnt/errors.hpp"
#include "mqnt/quant/rtn.hpp"
#include "mqnt/quantizers/gptq.hpp"
#include "mqnt/quantizers/hessian.hpp"

namespace mqnt {

namespace {

constexpr double kFloor = 1e-8;

}  // namespace

Matrix divide_columns(const Matrix& x, const std::vector<double>& s) {
  if (s.size() != x.cols()) throw ShapeError("divide_columns: scale count mismatch");
  Matrix out = x;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto row = out.row(r);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] /= s[j];
  }
  return out;
}

Smoothing smoothquant_migrate(const Matrix& w, const ActivationStats& stats, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ShapeError("smooth_alpha must be in [0, 1]");
  if (stats.per_channel_absmax.size() != w.cols()) {
    throw ShapeError("smoothquant: activations have " + std::to_string(stats.per_channel_absmax.size()) +
                     " channels, layer has " + std::to_string(w.cols()) + " inputs");
  }
  const std::vector<double> wmax = column_absmax(w);
  Smoothing out{w, std::vector<double>(w.cols())};
  for (std::size_t j = 0; j < w.cols(); ++j) {
    const double ax = std::max(stats.per_channel_absmax[j], kFloor);
    const double aw = std::max(wmax[j], kFloor);
    out.s[j] = std::max(std::pow(ax, alpha) / std::pow(aw, 1.0 - alpha), kFloor);
  }
  for (std::size_t r = 0; r < w.rows(); ++r) {
    auto row = out.w_scaled.row(r);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] *= out.s[j];
  }
  return out;
}

LayerResult smoothquant_quantize_layer(const Matrix& w, const ActivationStats& stats, const MethodSpec& spec) {
  spec.validate();
  Smoothing sm = smoothquant_migrate(w, stats, spec.params.smooth_alpha);
  QuantizedTensor q = rtn_quantize(sm.w_scaled, spec.cfg).with_input_scales(std::move(sm.s));
  const Matrix h = accumulate_hessian(stats);
  QuantizationReport rep = detail::make_report(w, q, h, detail::prepare_hessian(h, spec.params.damping), spec);
  return {std::move(q), std::move(rep)};
}

LayerResult smoothquant_gptq_quantize_layer(const Matrix& w, const ActivationStats& stats, const MethodSpec& spec) {
  spec.validate();
  Smoothing sm = smoothquant_migrate(w, stats, spec.params.smooth_alpha);
  const Matrix h_smoothed = accumulate_hessian(divide_columns(stats.input_matrix, sm.s));
  QuantizedTensor q = gptq_quantize_layer(sm.w_scaled, h_smoothed, spec).tensor.with_input_scales(std::move(sm.s));
  const Matrix h = accumulate_hessian(stats);
  QuantizationReport rep = detail::make_report(w, q, h, detail::prepare_hessian(h, spec.params.damping), spec);
  return {std::move(q), std::move(rep)};
}

}  // namespace mqnt
