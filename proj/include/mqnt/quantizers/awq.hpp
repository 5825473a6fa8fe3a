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

struct AwqSearch {
  std::vector<double> scales;
  double alpha = 0.0;
  double objective = 0.0;           // at the returned scales
  double objective_at_ones = 0.0;   // alpha = 0 candidate
};

// Candidate scales absmax^alpha normalized to geometric mean 1, floored at 1e-8.
std::vector<double> awq_candidate_scales(const std::vector<double>& absmax, double alpha);

// ||X W^T - (X / s) Q(W diag(s))^T||^2 over the captured batch.
double awq_objective(const Matrix& w, const Matrix& x, const std::vector<double>& scales, const QuantConfig& cfg);

AwqSearch awq_search(const Matrix& w, const ActivationStats& stats, const MethodSpec& spec);
std::vector<double> awq_compute_scales(const Matrix& w, const ActivationStats& stats, const MethodSpec& spec);

// RTN of W diag(s); s is stored as the layer's input divisor.
LayerResult awq_quantize_layer(const Matrix& w, const ActivationStats& stats, const MethodSpec& spec);

}  // namespace mqnt
