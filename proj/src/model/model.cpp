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

#include "mqnt/model/model.hpp"

#include <cmath>
#include <string>

#include "mqnt/errors.hpp"
#include "mqnt/model/ops.hpp"
#include "mqnt/numerics/kernels.hpp"
#include "mqnt/numerics/rng.hpp"
#include "mqnt/quant/rtn.hpp"

namespace mqnt {

ModelWeights ModelWeights::zeros(const ModelConfig& cfg) {
  ModelWeights w;
  w.tok_emb = Matrix(cfg.vocab_size, cfg.d_model);
  w.pos_emb = Matrix(cfg.context_len, cfg.d_model);
  w.blocks.resize(cfg.n_layers);
  for (auto& b : w.blocks) {
    b.attn_norm.assign(cfg.d_model, 1.0);
    b.ff_norm.assign(cfg.d_model, 1.0);
    b.q_proj = Matrix(cfg.d_model, cfg.d_model);
    b.k_proj = Matrix(cfg.d_model, cfg.d_model);
    b.v_proj = Matrix(cfg.d_model, cfg.d_model);
    b.o_proj = Matrix(cfg.d_model, cfg.d_model);
    b.ff_up = Matrix(cfg.d_ff, cfg.d_model);
    b.ff_down = Matrix(cfg.d_model, cfg.d_ff);
  }
  w.final_norm.assign(cfg.d_model, 1.0);
  w.lm_head = Matrix(cfg.vocab_size, cfg.d_model);
  return w;
}

Matrix& ModelWeights::linear(const LayerRef& ref) {
  return const_cast<Matrix&>(std::as_const(*this).linear(ref));
}

const Matrix& ModelWeights::linear(const LayerRef& ref) const {
  if (ref.name == LayerName::lm_head) return lm_head;
  if (ref.block_index >= blocks.size()) throw ShapeError("layer " + ref.to_string() + " out of range");
  const auto& b = blocks[ref.block_index];
  switch (ref.name) {
    case LayerName::q_proj: return b.q_proj;
    case LayerName::k_proj: return b.k_proj;
    case LayerName::v_proj: return b.v_proj;
    case LayerName::o_proj: return b.o_proj;
    case LayerName::ff_up: return b.ff_up;
    case LayerName::ff_down: return b.ff_down;
    case LayerName::lm_head: break;
  }
  return lm_head;
}

namespace {

void round_values(std::span<double> v) {
  for (double& x : v) x = static_cast<double>(static_cast<float>(x));
}

void fill_normal(Matrix& m, SplitMix64& rng, double std) {
  for (double& x : m.values()) x = rng.normal() * std;
}

}  // namespace

void ModelWeights::round_to_float() {
  round_values(tok_emb.values());
  round_values(pos_emb.values());
  for (auto& b : blocks) {
    round_values(b.attn_norm);
    round_values(b.ff_norm);
    for (Matrix* m : {&b.q_proj, &b.k_proj, &b.v_proj, &b.o_proj, &b.ff_up, &b.ff_down}) round_values(m->values());
  }
  round_values(final_norm);
  round_values(lm_head.values());
}

Model::Model(ModelConfig cfg, ModelWeights weights) : cfg_(cfg) {
  cfg_.validate();
  set_weights(std::move(weights));
}

Model Model::initialize(const ModelConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  ModelWeights w = ModelWeights::zeros(cfg);
  SplitMix64 rng(seed);
  const double d = static_cast<double>(cfg.d_model);
  const double resid = 1.0 / std::sqrt(2.0 * static_cast<double>(std::max<std::size_t>(cfg.n_layers, 1)));
  fill_normal(w.tok_emb, rng, 1.0);
  fill_normal(w.pos_emb, rng, 0.1);
  for (auto& b : w.blocks) {
    fill_normal(b.q_proj, rng, 1.0 / std::sqrt(d));
    fill_normal(b.k_proj, rng, 1.0 / std::sqrt(d));
    fill_normal(b.v_proj, rng, 1.0 / std::sqrt(d));
    fill_normal(b.o_proj, rng, resid / std::sqrt(d));
    fill_normal(b.ff_up, rng, 1.0 / std::sqrt(d));
    fill_normal(b.ff_down, rng, resid / std::sqrt(static_cast<double>(cfg.d_ff)));
  }
  fill_normal(w.lm_head, rng, 1.0 / std::sqrt(d));
  w.round_to_float();
  return Model(cfg, std::move(w));
}

void Model::set_weights(ModelWeights w) {
  const auto expect = [](const Matrix& m, std::size_t r, std::size_t c, const char* what) {
    if (m.rows() != r || m.cols() != c) throw ShapeError(std::string("weight shape mismatch for ") + what);
  };
  expect(w.tok_emb, cfg_.vocab_size, cfg_.d_model, "tok_emb");
  expect(w.pos_emb, cfg_.context_len, cfg_.d_model, "pos_emb");
  expect(w.lm_head, cfg_.vocab_size, cfg_.d_model, "lm_head");
  if (w.blocks.size() != cfg_.n_layers) throw ShapeError("block count mismatch");
  if (w.final_norm.size() != cfg_.d_model) throw ShapeError("final_norm length mismatch");
  for (const auto& b : w.blocks) {
    if (b.attn_norm.size() != cfg_.d_model || b.ff_norm.size() != cfg_.d_model) throw ShapeError("norm length mismatch");
    expect(b.q_proj, cfg_.d_model, cfg_.d_model, "q_proj");
    expect(b.k_proj, cfg_.d_model, cfg_.d_model, "k_proj");
    expect(b.v_proj, cfg_.d_model, cfg_.d_model, "v_proj");
    expect(b.o_proj, cfg_.d_model, cfg_.d_model, "o_proj");
    expect(b.ff_up, cfg_.d_ff, cfg_.d_model, "ff_up");
    expect(b.ff_down, cfg_.d_model, cfg_.d_ff, "ff_down");
  }
  weights_ = std::move(w);
  linears_.assign(cfg_.n_layers * 6 + 1, LinearState{});
  finalized_ = false;
  for (std::size_t s = 0; s < linears_.size(); ++s) rebuild(s);
}

std::size_t Model::slot(const LayerRef& ref) const {
  validate(ref, cfg_);
  if (ref.name == LayerName::lm_head) return cfg_.n_layers * 6;
  return ref.block_index * 6 + static_cast<std::size_t>(ref.name);
}

void Model::rebuild(std::size_t s) {
  auto& st = linears_[s];
  const LayerRef ref = s == cfg_.n_layers * 6 ? LayerRef::head(cfg_) : LayerRef{s / 6, kBlockLayers[s % 6]};
  st.input_scales.clear();
  if (st.quant) {
    st.used_t = dequantize(*st.quant).transposed();
    st.input_scales = st.quant->input_scales();
  } else {
    st.used_t = weights_.linear(ref).transposed();
  }
}

Matrix Model::apply_linear(const LayerRef& ref, const Matrix& x) const {
  const auto& st = linears_[slot(ref)];
  if (x.cols() != st.used_t.rows()) throw ShapeError("linear input width mismatch for " + ref.to_string());
  if (st.input_scales.empty() && st.act_bits == 16) return kernels::omp::gemm(x, st.used_t);
  Matrix in = x;
  if (!st.input_scales.empty()) {
    for (std::size_t t = 0; t < in.rows(); ++t) {
      auto r = in.row(t);
      for (std::size_t j = 0; j < r.size(); ++j) r[j] /= st.input_scales[j];
    }
  }
  quantize_activations_dynamic_inplace(in, st.act_bits);
  return kernels::omp::gemm(in, st.used_t);
}

Matrix Model::embed(std::span<const TokenId> tokens) const {
  if (tokens.size() > cfg_.context_len) {
    throw ContextError("sequence of " + std::to_string(tokens.size()) + " tokens exceeds context " +
                       std::to_string(cfg_.context_len));
  }
  Matrix x(tokens.size(), cfg_.d_model);
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    if (tokens[t] >= cfg_.vocab_size) {
      throw VocabError("token id " + std::to_string(tokens[t]) + " at position " + std::to_string(t) +
                       " exceeds vocab " + std::to_string(cfg_.vocab_size));
    }
    const auto e = weights_.tok_emb.row(tokens[t]);
    const auto p = weights_.pos_emb.row(t);
    auto xr = x.row(t);
    for (std::size_t j = 0; j < cfg_.d_model; ++j) xr[j] = e[j] + p[j];
  }
  return x;
}

Matrix Model::run_block(std::size_t b, const Matrix& x, const CaptureSink& sink) const {
  const auto& bw = weights_.blocks.at(b);
  const auto ref = [b](LayerName n) { return LayerRef{b, n}; };

  const Matrix h = ops::rmsnorm(x, bw.attn_norm);
  if (sink) {
    sink(ref(LayerName::q_proj), h);
    sink(ref(LayerName::k_proj), h);
    sink(ref(LayerName::v_proj), h);
  }
  const Matrix q = apply_linear(ref(LayerName::q_proj), h);
  const Matrix k = apply_linear(ref(LayerName::k_proj), h);
  const Matrix v = apply_linear(ref(LayerName::v_proj), h);
  const Matrix a = ops::causal_attention(q, k, v, cfg_.n_heads);
  if (sink) sink(ref(LayerName::o_proj), a);
  const Matrix o = apply_linear(ref(LayerName::o_proj), a);
  Matrix x1 = x;
  for (std::size_t i = 0; i < x1.size(); ++i) x1.values()[i] += o.values()[i];

  const Matrix h2 = ops::rmsnorm(x1, bw.ff_norm);
  if (sink) sink(ref(LayerName::ff_up), h2);
  const Matrix z = ops::gelu(apply_linear(ref(LayerName::ff_up), h2));
  if (sink) sink(ref(LayerName::ff_down), z);
  const Matrix f = apply_linear(ref(LayerName::ff_down), z);
  for (std::size_t i = 0; i < x1.size(); ++i) x1.values()[i] += f.values()[i];
  return x1;
}

Matrix Model::final_hidden(const Matrix& x) const { return ops::rmsnorm(x, weights_.final_norm); }

Matrix Model::forward(std::span<const TokenId> tokens, const CaptureSink& sink) const {
  Matrix x = embed(tokens);
  for (std::size_t b = 0; b < cfg_.n_layers; ++b) x = run_block(b, x, sink);
  const Matrix h = final_hidden(x);
  const auto head = LayerRef::head(cfg_);
  if (sink) sink(head, h);
  return apply_linear(head, h);
}

void Model::replace_weights(const LayerRef& ref, QuantizedTensor q, int act_bits) {
  const Matrix& w = weights_.linear(ref);
  if (q.rows() != w.rows() || q.cols() != w.cols()) {
    throw ShapeError("replacement for " + ref.to_string() + " is " + std::to_string(q.rows()) + "x" +
                     std::to_string(q.cols()) + ", layer is " + std::to_string(w.rows()) + "x" +
                     std::to_string(w.cols()));
  }
  if (!valid_activation_bits(act_bits)) throw ShapeError("act_bits must be 8 or 16");
  const std::size_t s = slot(ref);
  linears_[s].quant = std::move(q);
  linears_[s].act_bits = act_bits;
  rebuild(s);
}

void Model::restore(const LayerRef& ref) {
  if (finalized_) throw Error("model is finalized; original weights are gone");
  const std::size_t s = slot(ref);
  linears_[s].quant.reset();
  linears_[s].act_bits = 16;
  rebuild(s);
}

void Model::finalize() {
  for (const auto& ref : all_linear_layers(cfg_)) {
    const auto& st = linears_[slot(ref)];
    if (st.quant) weights_.linear(ref) = effective_weights(*st.quant);
  }
  finalized_ = true;
}

bool Model::is_quantized(const LayerRef& ref) const { return linears_[slot(ref)].quant.has_value(); }

const std::optional<QuantizedTensor>& Model::quantized(const LayerRef& ref) const { return linears_[slot(ref)].quant; }

int Model::act_bits(const LayerRef& ref) const { return linears_[slot(ref)].act_bits; }

Matrix Model::effective_weight(const LayerRef& ref) const {
  const auto& st = linears_[slot(ref)];
  return st.quant ? effective_weights(*st.quant) : weights_.linear(ref);
}

const Matrix& Model::original_weight(const LayerRef& ref) const { return weights_.linear(ref); }

}  // namespace mqnt
