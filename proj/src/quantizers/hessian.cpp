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

#include "mqnt/quantizers/hessian.hpp"

#include "mqnt/errors.hpp"
#include "mqnt/numerics/kernels.hpp"

namespace mqnt {

Matrix accumulate_hessian(const Matrix& inputs) {
  if (inputs.rows() == 0) throw EmptyCalibrationError("accumulate_hessian: no captured rows");
  Matrix h = kernels::omp::gram(inputs);
  const double f = 2.0 / static_cast<double>(inputs.rows());
  for (double& v : h.values()) v *= f;
  return h;
}

Matrix accumulate_hessian(const ActivationStats& stats) { return accumulate_hessian(stats.input_matrix); }

double hessian_trace_loss(const Matrix& w, const Matrix& w_hat, const Matrix& h) {
  if (w.rows() != w_hat.rows() || w.cols() != w_hat.cols() || h.rows() != w.cols() || h.cols() != w.cols()) {
    throw ShapeError("hessian_trace_loss: shape mismatch");
  }
  const std::size_t n = w.cols();
  std::vector<double> d(n), hd(n);
  double total = 0.0;
  for (std::size_t r = 0; r < w.rows(); ++r) {
    for (std::size_t j = 0; j < n; ++j) d[j] = w(r, j) - w_hat(r, j);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += h(i, j) * d[j];
      hd[i] = s;
    }
    for (std::size_t i = 0; i < n; ++i) total += d[i] * hd[i];
  }
  return total;
}

}  // namespace mqnt
