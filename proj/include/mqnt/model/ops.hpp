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
#include <span>
#include <vector>

#include "mqnt/numerics/matrix.hpp"

// Block primitives shared by inference and the fitting routine.
namespace mqnt::ops {

inline constexpr double kNormEps = 1e-5;

// y[t, j] = gain[j] * x[t, j] / sqrt(mean_j x[t, j]^2 + eps).
// inv_rms (optional) receives the per-row reciprocal RMS.
Matrix rmsnorm(const Matrix& x, std::span<const double> gain, std::vector<double>* inv_rms = nullptr);

// Accumulates d(gain) into dgain and returns dx.
Matrix rmsnorm_backward(const Matrix& x, std::span<const double> gain, std::span<const double> inv_rms,
                        const Matrix& dy, std::span<double> dgain);

// tanh-approximated GELU.
double gelu(double u);
double gelu_grad(double u);
Matrix gelu(const Matrix& u);

// Causal multi-head attention over one sequence. q, k, v are [T x d_model],
// heads are contiguous column slices. probs (optional) receives one [T x T]
// row-stochastic matrix per head (zeros above the diagonal).
Matrix causal_attention(const Matrix& q, const Matrix& k, const Matrix& v, std::size_t n_heads,
                        std::vector<Matrix>* probs = nullptr);

struct AttentionGrads {
  Matrix dq, dk, dv;
};
AttentionGrads causal_attention_backward(const Matrix& q, const Matrix& k, const Matrix& v,
                                         const std::vector<Matrix>& probs, const Matrix& dout, std::size_t n_heads);

// Numerically stable log-softmax of one logit row.
std::vector<double> log_softmax(std::span<const double> logits);

}  // namespace mqnt::ops
