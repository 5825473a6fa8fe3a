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

#include "mqnt/quantizers/gptq.hpp"

#include <algorithm>
#include <string>

#include "internal.hpp"
#include "mqnt/errors.hpp"
#include "mqnt/numerics/kernels.hpp"
#include "mqnt/numerics/linalg.hpp"
#include "mqnt/quantizers/hessian.hpp"

namespace mqnt::detail {

Matrix prepare_hessian(const Matrix& h, double damping) {
  Matrix fixed = h;
  for (std::size_t i = 0; i < fixed.rows(); ++i) {
    if (fixed(i, i) == 0.0) fixed(i, i) = 1.0;
  }
  return damp_diagonal(fixed, damping);
}

namespace {

// Upper Cholesky factor of H^-1, computed as chol((L^T)^-1 (L^T)^-T)^T with L = chol(H).
Matrix inverse_hessian_factor(const Matrix& h_damped) {
  Matrix l;
  try {
    l = cholesky(h_damped);
  } catch (const NotPositiveDefiniteError& e) {
    throw DegenerateCalibrationError(std::string("damped Hessian is not positive definite (") + e.what() + ")");
  }
  const Matrix m = invert_upper_triangular(l.transposed());
  const Matrix hinv = kernels::omp::gemm_nt(m, m);
  try {
    return cholesky(hinv).transposed();
  } catch (const NotPositiveDefiniteError& e) {
    throw DegenerateCalibrationError(std::string("inverse Hessian is not positive definite (") + e.what() + ")");
  }
}

}  // namespace

QuantizedTensor gptq_core(const Matrix& w, const Matrix& h_damped, const QuantConfig& cfg,
                          const std::vector<bool>* outlier_mask) {
  const std::size_t rows = w.rows(), cols = w.cols();
  const Matrix u = inverse_hessian_factor(h_damped);
  const std::size_t gs = cfg.group_size;
  const std::size_t groups = (cols + gs - 1) / gs;
  const auto masked = [&](std::size_t r, std::size_t c) { return outlier_mask && (*outlier_mask)[r * cols + c]; };

  Matrix work = w;
  std::vector<std::uint32_t> codes(rows * cols);
  std::vector<GroupParams> params(rows * groups);
  std::vector<Outlier> outliers;
  std::vector<double> kept;
  for (std::size_t i = 0; i < cols; ++i) {
    if (i % gs == 0) {
      const std::size_t g = i / gs;
      const std::size_t len = std::min(gs, cols - i);
      for (std::size_t r = 0; r < rows; ++r) {
        kept.clear();
        for (std::size_t c = i; c < i + len; ++c) {
          if (!masked(r, c)) kept.push_back(work(r, c));
        }
        if (kept.empty()) kept.push_back(0.0);
        params[r * groups + g] = fit_group(kept, cfg.w_bits, cfg.scheme);
      }
    }
    const std::size_t g = i / gs;
    const double d = u(i, i);
    for (std::size_t r = 0; r < rows; ++r) {
      const double x = work(r, i);
      const GroupParams& p = params[r * groups + g];
      const std::uint32_t code = quantize_value(x, p, cfg.w_bits, cfg.scheme);
      codes[r * cols + i] = code;
      if (masked(r, i)) {
        outliers.push_back({static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(i), x});
        continue;
      }
      const double err = (x - dequantize_value(code, p, cfg.w_bits, cfg.scheme)) / d;
      auto row = work.row(r);
      for (std::size_t j = i + 1; j < cols; ++j) row[j] -= err * u(i, j);
    }
  }
  return QuantizedTensor::from_codes(rows, cols, cfg.w_bits, gs, cfg.scheme, codes, std::move(params),
                                     std::move(outliers));
}

QuantizationReport make_report(const Matrix& w, const QuantizedTensor& q, const Matrix& h, const Matrix& h_damped,
                               const MethodSpec& spec) {
  QuantizationReport rep;
  rep.method = spec;
  const Matrix w_hat = effective_weights(q);
  rep.proxy_loss = std::max(0.0, hessian_trace_loss(w, w_hat, h_damped));
  rep.output_mse = w.rows() == 0 ? 0.0
                                 : std::max(0.0, hessian_trace_loss(w, w_hat, h) / (2.0 * static_cast<double>(w.rows())));
  rep.outlier_count = q.outliers().size();
  return rep;
}

LayerResult passthrough_result(const Matrix& w, const MethodSpec& spec, std::vector<double> input_scales) {
  LayerResult res{QuantizedTensor::passthrough(w, std::move(input_scales)), {}};
  res.report.method = spec;
  return res;
}

}  // namespace mqnt::detail

namespace mqnt {

LayerResult gptq_quantize_layer(const Matrix& w, const Matrix& h, const MethodSpec& spec) {
  spec.validate();
  if (h.rows() != w.cols() || h.cols() != w.cols()) {
    throw ShapeError("gptq: Hessian is " + std::to_string(h.rows()) + "x" + std::to_string(h.cols()) +
                     ", layer has " + std::to_string(w.cols()) + " inputs");
  }
  if (spec.cfg.passthrough()) return detail::passthrough_result(w, spec);
  const Matrix hd = detail::prepare_hessian(h, spec.params.damping);
  QuantizedTensor q = detail::gptq_core(w, hd, spec.cfg, nullptr);
  QuantizationReport rep = detail::make_report(w, q, h, hd, spec);
  return {std::move(q), std::move(rep)};
}

}  // namespace mqnt
