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
#include <string>
#include <string_view>

#include "mqnt/model/config.hpp"
#include "mqnt/quant/grid.hpp"
#include "mqnt/quant/quantized_tensor.hpp"

namespace mqnt {

enum class Method { rtn, gptq, spqr, awq, smoothquant, smoothquant_gptq };
std::string_view to_string(Method m);
Method parse_method(std::string_view s);
// Methods that fake-quantize activations when a_bits == 8.
bool quantizes_activations(Method m);

struct MethodParams {
  double damping = 0.01;               // fraction of mean Hessian diagonal
  double outlier_threshold = 0.2;      // SpQR: multiple of the group-mean sensitivity
  double outlier_cap_fraction = 0.01;  // SpQR: max share of elements kept exact
  std::size_t awq_grid_points = 20;    // AWQ: exponent grid size
  double smooth_alpha = 0.5;           // SmoothQuant migration strength
  bool operator==(const MethodParams&) const = default;
};

struct MethodSpec {
  Method method = Method::gptq;
  QuantConfig cfg;
  MethodParams params;

  // Throws ShapeError naming the offending field.
  void validate() const;
  // "gptq W4A16" style label.
  std::string label() const;
  bool operator==(const MethodSpec&) const = default;
};

struct QuantizationReport {
  LayerRef layer;
  MethodSpec method;
  double proxy_loss = 0.0;  // tr((W - W_hat) H_damped (W - W_hat)^T)
  double output_mse = 0.0;  // mean squared layer-output error on the calibration batch
  std::size_t outlier_count = 0;
};

struct LayerResult {
  QuantizedTensor tensor;
  QuantizationReport report;
};

}  // namespace mqnt
