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
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mqnt/model/config.hpp"
#include "mqnt/numerics/matrix.hpp"
#include "mqnt/quant/quantized_tensor.hpp"

namespace mqnt {

// Anything that maps a token sequence to next-token logits. Evaluation code
// depends only on this, so tests can substitute rigged scorers.
class LanguageModel {
 public:
  virtual ~LanguageModel() = default;
  virtual std::size_t vocab_size() const = 0;
  virtual std::size_t context_len() const = 0;
  // [tokens x vocab] logits; row t predicts token t + 1.
  virtual Matrix logits(std::span<const TokenId> tokens) const = 0;
};

struct BlockWeights {
  std::vector<double> attn_norm;
  Matrix q_proj, k_proj, v_proj, o_proj;
  std::vector<double> ff_norm;
  Matrix ff_up, ff_down;
};

// Full-precision parameters. Linear weights are [out_features x in_features].
struct ModelWeights {
  Matrix tok_emb;  // [vocab x d_model]
  Matrix pos_emb;  // [context_len x d_model]
  std::vector<BlockWeights> blocks;
  std::vector<double> final_norm;
  Matrix lm_head;  // [vocab x d_model]

  static ModelWeights zeros(const ModelConfig& cfg);
  Matrix& linear(const LayerRef& ref);
  const Matrix& linear(const LayerRef& ref) const;
  void round_to_float();
};

// Receives the input matrix of each linear layer as the forward pass reaches
// it (the raw input, before any smoothing divisor or activation quantization).
using CaptureSink = std::function<void(const LayerRef&, const Matrix&)>;

// Pre-norm decoder-only transformer: token + learned position embedding,
// n_layers of [RMSNorm -> causal MHA -> residual, RMSNorm -> GELU MLP ->
// residual], final RMSNorm, lm_head. No biases.
//
// Linear layers can be swapped for a QuantizedTensor; the original weights
// are kept (restore / diff) until finalize().
class Model : public LanguageModel {
 public:
  Model(ModelConfig cfg, ModelWeights weights);

  // Deterministic random initialization from a 64-bit seed.
  static Model initialize(const ModelConfig& cfg, std::uint64_t seed);

  const ModelConfig& config() const { return cfg_; }
  const ModelWeights& weights() const { return weights_; }
  // Replaces all full-precision weights and drops any quantized layers.
  void set_weights(ModelWeights w);

  std::size_t vocab_size() const override { return cfg_.vocab_size; }
  std::size_t context_len() const override { return cfg_.context_len; }
  Matrix logits(std::span<const TokenId> tokens) const override { return forward(tokens); }

  // Throws ContextError / VocabError on bad input.
  Matrix forward(std::span<const TokenId> tokens, const CaptureSink& sink = {}) const;

  // Pieces of forward(), used for block-wise activation recapture.
  Matrix embed(std::span<const TokenId> tokens) const;
  Matrix run_block(std::size_t b, const Matrix& x, const CaptureSink& sink = {}) const;
  Matrix final_hidden(const Matrix& x) const;
  Matrix apply_linear(const LayerRef& ref, const Matrix& x) const;

  void replace_weights(const LayerRef& ref, QuantizedTensor q, int act_bits = 16);
  void restore(const LayerRef& ref);
  // Drops retained originals; quantized layers become permanent.
  void finalize();
  bool finalized() const { return finalized_; }

  bool is_quantized(const LayerRef& ref) const;
  const std::optional<QuantizedTensor>& quantized(const LayerRef& ref) const;
  int act_bits(const LayerRef& ref) const;
  // Weight currently used by the forward pass (effective weights if quantized).
  Matrix effective_weight(const LayerRef& ref) const;
  // Full-precision weight (the retained original for quantized layers).
  const Matrix& original_weight(const LayerRef& ref) const;

 private:
  struct LinearState {
    std::optional<QuantizedTensor> quant;
    int act_bits = 16;
    std::vector<double> input_scales;
    Matrix used_t;  // matrix applied by the product, transposed to [in x out]
  };

  std::size_t slot(const LayerRef& ref) const;
  void rebuild(std::size_t s);

  ModelConfig cfg_;
  ModelWeights weights_;
  std::vector<LinearState> linears_;
  bool finalized_ = false;
};

}  // namespace mqnt
