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

#include <vector>

#include "mqnt/numerics/matrix.hpp"
#include "mqnt/quant/quantized_tensor.hpp"
#include "mqnt/quantizers/method.hpp"

namespace mqnt::detail {

// Dead diagonal entries set to 1, then damped by a fraction of the mean diagonal.
Matrix prepare_hessian(const Matrix& h, double damping);

// Column-by-column quantization with inverse-Hessian error propagation.
// Masked positions (row-major) are kept at their updated value and propagate no error.
QuantizedTensor gptq_core(const Matrix& w, const Matrix& h_damped, const QuantConfig& cfg,
                          const std::vector<bool>* outlier_mask);

// Proxy loss against h_damped; output MSE from the undamped h as tr(D h D^T) / (2 rows).
QuantizationReport make_report(const Matrix& w, const QuantizedTensor& q, const Matrix& h, const Matrix& h_damped,
                               const MethodSpec& spec);

LayerResult passthrough_result(const Matrix& w, const MethodSpec& spec, std::vector<double> input_scales = {});

}  // namespace mqnt::detail
