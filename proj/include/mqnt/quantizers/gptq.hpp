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
#include "mqnt/quantizers/method.hpp"

namespace mqnt {

// Hessian-compensated quantization of w ([out x in]) against h ([in x in]).
// Zero diagonal entries of h are set to 1 before damping; a damped h that is
// still not positive definite raises DegenerateCalibrationError.
LayerResult gptq_quantize_layer(const Matrix& w, const Matrix& h, const MethodSpec& spec);

}  // namespace mqnt
