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

#include "mqnt/model/capture.hpp"
#include "mqnt/numerics/matrix.hpp"

namespace mqnt {

// (2 / T) * X^T X over the T captured rows. Throws EmptyCalibrationError when T == 0.
Matrix accumulate_hessian(const ActivationStats& stats);
Matrix accumulate_hessian(const Matrix& inputs);

// tr(D H D^T) with D = w - w_hat, evaluated row by row.
double hessian_trace_loss(const Matrix& w, const Matrix& w_hat, const Matrix& h);

}  // namespace mqnt
