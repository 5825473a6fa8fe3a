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

#include "mqnt/quantizers/awq.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "internal.hpp"
#include "mqnt/errors.hpp"
#include "mqnt/numerics/kernels.hpp"
#include "mqnt/quant/rtn.hpp"
#include "mqnt/quantizers/hessian.hpp"
#include "mqnt/quantizers/smoothquant.hpp"

namespace mqnt {

namespace {

constexpr double kFloor = 1e-8;

Matrix scale_columns(const Matrix& w, const std::vector<double>& s) {
  Matrix out = w;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto row = out.row(r);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] *= s[j];
  }
  return out;
}

// Q(W diag(s)) with columns divided back by s: the weights the layer effectively applies.
Matrix scaled_rtn_effective(const Matrix& w, const std::vector<double>& s, const QuantConfig& cfg) {
  return divide_columns(dequantize(rtn_quantize(scale_columns(w, s), cfg)), s);
}

bool all_ones(const std::vector<double>& s) {
  return std::all_of(s.begin(), s.end(), [](double v) { return v == 1.0; });
}

void check_stats(const Matrix& w, const ActivationStats& stats) {
  if (stats.input_matrix.cols() != w.cols() || stats.per_channel_absmax.size() != w.cols()) {
    throw ShapeError("awq: activations have " + std::to_string(stats.input_matrix.cols()) +
                     " channels, layer has " + std::to_string(w.cols()) + " inputs");
  }
}

}  // namespace

std::vector<double> awq_candidate_scales(const std::vector<double>& absmax, double alpha) {
  const std::size_t n = absmax.size();
  std::vector<double> s(n, 1.0);
  if (n == 0 || std::all_of(absmax.begin(), absmax.end(), [&](double v) { return v == absmax.front(); })) return s;
  std::vector<double> logs(n);
  double mean = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    logs[j] = std::log(std::max(absmax[j], kFloor));
    mean += logs[j];
  }
  mean /= static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) s[j] = std::max(std::exp(alpha * (logs[j] - mean)), kFloor);
  return s;
}

double awq_objective(const Matrix& w, const Matrix& x, const std::vector<double>& scales, const QuantConfig& cfg) {
  if (x.cols() != w.cols() || scales.size() != w.cols()) throw ShapeError("awq_objective: shape mismatch");
  const Matrix ref = kernels::omp::gemm_nt(x, w);
  const Matrix q = dequantize(rtn_quantize(scale_columns(w, scales), cfg));
  const Matrix got = kernels::omp::gemm_nt(divide_columns(x, scales), q);
  double total = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const double d = ref.values()[i] - got.values()[i];
    total += d * d;
  }
  return total;
}

AwqSearch awq_search(const Matrix& w, const ActivationStats& stats, const MethodSpec& spec) {
  spec.validate();
  check_stats(w, stats);
  // ||X D^T||^2 = tr(D X^T X D^T): one Gram matrix serves every candidate.
  const Matrix gram = kernels::omp::gram(stats.input_matrix);
  const std::size_t g = spec.params.awq_grid_points;
  AwqSearch best;
  for (std::size_t k = 0; k < g; ++k) {
    const double alpha = static_cast<double>(k) / static_cast<double>(g - 1);
    std::vector<double> s = awq_candidate_scales(stats.per_channel_absmax, alpha);
    const double obj = hessian_trace_loss(w, scaled_rtn_effective(w, s, spec.cfg), gram);
    if (k == 0) best.objective_at_ones = obj;
    if (k == 0 || obj < best.objective) {
      best.objective = obj;
      best.alpha = alpha;
      best.scales = std::move(s);
    }
  }
  return best;
}

std::vector<double> awq_compute_scales(const Matrix& w, const ActivationStats& stats, const MethodSpec& spec) {
  return awq_search(w, stats, spec).scales;
}

LayerResult awq_quantize_layer(const Matrix& w, const ActivationStats& stats, const MethodSpec& spec) {
  std::vector<double> s = awq_compute_scales(w, stats, spec);
  QuantizedTensor q = rtn_quantize(scale_columns(w, s), spec.cfg);
  if (!all_ones(s)) q = q.with_input_scales(std::move(s));
  const Matrix h = accumulate_hessian(stats);
  QuantizationReport rep = detail::make_report(w, q, h, detail::prepare_hessian(h, spec.params.damping), spec);
  return {std::move(q), std::move(rep)};
}

}  // namespace mqnt
