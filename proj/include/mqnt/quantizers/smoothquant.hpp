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

#include "mqnt/model/capture.hpp"
#include "mqnt/numerics/matrix.hpp"
#include "mqnt/quantizers/method.hpp"

namespace mqnt {

struct Smoothing {
  Matrix w_scaled;         // W diag(s)
  std::vector<double> s;   // per input channel; inputs are divided by s
};

Smoothing smoothquant_migrate(const Matrix& w, const ActivationStats& stats, double alpha);

// Divides column j of x by s[j].
Matrix divide_columns(const Matrix& x, const std::vector<double>& s);

// Smoothing followed by RTN weights.
LayerResult smoothquant_quantize_layer(const Matrix& w, const ActivationStats& stats, const MethodSpec& spec);
// Smoothing followed by GPTQ with the Hessian of the smoothed inputs.
LayerResult smoothquant_gptq_quantize_layer(const Matrix& w, const ActivationStats& stats, const MethodSpec& spec);

}  // namespace mqnt
