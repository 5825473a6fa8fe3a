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
#include <cstdint>
#include <span>
#include <vector>

#include "mqnt/model/model.hpp"

namespace mqnt {

// Short next-token fit so the tiny model carries real structure and
// quantization damage shows up in perplexity.
struct FitOptions {
  std::size_t steps = 300;
  std::size_t batch = 8;
  std::size_t seq_len = 0;  // 0 = context_len
  double lr = 3e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double grad_clip = 1.0;
  std::size_t warmup = 20;
  std::uint64_t seed = 1;
};

struct FitReport {
  std::vector<double> losses;  // mean cross-entropy per step (nats)
};

// Adam on next-token cross-entropy over random windows of `corpus`, linear
// warmup then cosine decay to 10% of lr. Weights are rounded to float32 at
// the end. Any quantized layers are dropped.
FitReport fit_next_token(Model& model, std::span<const TokenId> corpus, const FitOptions& opt);

// Sum over positions t < T-1 of -log p(tokens[t+1] | tokens[..t]) for the
// full-precision weights. When grad is non-null, adds scale * d(sum)/d(w).
double sequence_loss(const ModelConfig& cfg, const ModelWeights& w, std::span<const TokenId> tokens,
                     ModelWeights* grad = nullptr, double scale = 1.0);

// Flat views over every parameter, in a fixed order.
std::vector<std::span<double>> parameter_views(ModelWeights& w);

}  // namespace mqnt
