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
#include "mqnt/quantizers/method.hpp"

namespace mqnt {

// Per-element sensitivity: squared leave-one-out RTN error times the damped
// Hessian diagonal. The element itself is excluded from its group's range fit
// so that a weight sitting at the range endpoint is not scored as harmless.
Matrix spqr_sensitivity(const Matrix& w, const Matrix& h, const MethodSpec& spec);

// Row-major boolean mask of the elements kept exact.
std::vector<bool> spqr_select_outliers(const Matrix& sensitivity, const MethodSpec& spec);

LayerResult spqr_quantize_layer(const Matrix& w, const Matrix& h, const MethodSpec& spec);

}  // namespace mqnt
