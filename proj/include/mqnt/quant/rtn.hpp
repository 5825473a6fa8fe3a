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

#include "mqnt/numerics/matrix.hpp"
#include "mqnt/quant/grid.hpp"
#include "mqnt/quant/quantized_tensor.hpp"

namespace mqnt {

// Round-to-nearest baseline: each (row, group) fitted and rounded
// independently. bits == 16 yields a passthrough tensor.
QuantizedTensor rtn_quantize(const Matrix& w, const QuantConfig& cfg);

// Per-row (per-token) symmetric fake quantization. Returns reals that lie on
// the row's grid; a_bits == 16 returns the input unchanged.
Matrix quantize_activations_dynamic(const Matrix& x, int a_bits);
void quantize_activations_dynamic_inplace(Matrix& x, int a_bits);

}  // namespace mqnt
