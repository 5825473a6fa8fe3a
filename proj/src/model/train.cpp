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

#include "mqnt/model/train.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mqnt/errors.hpp"
#include "mqnt/model/ops.hpp"
#include "mqnt/numerics/kernels.hpp"
#include "mqnt/numerics/rng.hpp"

namespace mqnt {

namespace k = kernels::omp;

std::vector<std::span<double>> parameter_views(ModelWeights& w) {
  std::vector<std::span<double>> v;
  v.push_back(w.tok_emb.values());
  v.push_back(w.pos_emb.values());
  for (auto& b : w.blocks) {
    v.push_back(b.attn_norm);
    v.push_back(b.q_proj.values());
    v.push_back(b.k_proj.values());
    v.push_back(b.v_proj.values());
    v.push_back(b.o_proj.values());
    v.push_back(b.ff_norm);
    v.push_back(b.ff_up.values());
    v.push_back(b.ff_down.values());
  }
  v.push_back(w.final_norm);
  v.push_back(w.lm_head.values());
  return v;
}

namespace {

struct BlockCache {
  Matrix x, h, q, kk, v, a, x1, h2, u, z;
  std::vector<double> r1, r2;
  std::vector<Matrix> probs;
};

void add_into(Matrix& dst, const Matrix& src) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst.values()[i] += src.values()[i];
}

}  // namespace

double sequence_loss(const ModelConfig& cfg, const ModelWeights& w, std::span<const TokenId> tokens,
                     ModelWeights* grad, double scale) {
  const std::size_t t_len = tokens.size();
  if (t_len > cfg.context_len) throw ContextError("training window exceeds context");
  if (t_len < 2) return 0.0;
  for (auto t : tokens)
    if (t >= cfg.vocab_size) throw VocabError("token id out of range in training data");

  Matrix x(t_len, cfg.d_model);
  for (std::size_t t = 0; t < t_len; ++t) {
    for (std::size_t j = 0; j < cfg.d_model; ++j) x(t, j) = w.tok_emb(tokens[t], j) + w.pos_emb(t, j);
  }

  std::vector<BlockCache> cache(cfg.n_layers);
  for (std::size_t b = 0; b < cfg.n_layers; ++b) {
    const auto& bw = w.blocks[b];
    auto& c = cache[b];
    c.x = x;
    c.h = ops::rmsnorm(x, bw.attn_norm, &c.r1);
    c.q = k::gemm_nt(c.h, bw.q_proj);
    c.kk = k::gemm_nt(c.h, bw.k_proj);
    c.v = k::gemm_nt(c.h, bw.v_proj);
    c.a = ops::causal_attention(c.q, c.kk, c.v, cfg.n_heads, &c.probs);
    c.x1 = x;
    add_into(c.x1, k::gemm_nt(c.a, bw.o_proj));
    c.h2 = ops::rmsnorm(c.x1, bw.ff_norm, &c.r2);
    c.u = k::gemm_nt(c.h2, bw.ff_up);
    c.z = ops::gelu(c.u);
    x = c.x1;
    add_into(x, k::gemm_nt(c.z, bw.ff_down));
  }
  std::vector<double> rf;
  const Matrix hf = ops::rmsnorm(x, w.final_norm, &rf);
  const Matrix logits = k::gemm_nt(hf, w.lm_head);

  double loss = 0.0;
  Matrix dlogits(t_len, cfg.vocab_size);
  for (std::size_t t = 0; t + 1 < t_len; ++t) {
    const auto lp = ops::log_softmax(logits.row(t));
    const TokenId target = tokens[t + 1];
    loss -= lp[target];
    if (grad) {
      auto dr = dlogits.row(t);
      for (std::size_t j = 0; j < lp.size(); ++j) dr[j] = scale * std::exp(lp[j]);
      dr[target] -= scale;
    }
  }
  if (!grad) return loss;

  add_into(grad->lm_head, k::gemm_tn(dlogits, hf));
  Matrix dx = ops::rmsnorm_backward(x, w.final_norm, rf, k::gemm(dlogits, w.lm_head), grad->final_norm);

  for (std::size_t b = cfg.n_layers; b-- > 0;) {
    const auto& bw = w.blocks[b];
    auto& gb = grad->blocks[b];
    const auto& c = cache[b];
    // MLP branch: x_out = x1 + gelu(h2 Wup^T) Wdown^T
    add_into(gb.ff_down, k::gemm_tn(dx, c.z));
    Matrix du = k::gemm(dx, bw.ff_down);
    for (std::size_t i = 0; i < du.size(); ++i) du.values()[i] *= ops::gelu_grad(c.u.values()[i]);
    add_into(gb.ff_up, k::gemm_tn(du, c.h2));
    Matrix dx1 = dx;
    add_into(dx1, ops::rmsnorm_backward(c.x1, bw.ff_norm, c.r2, k::gemm(du, bw.ff_up), gb.ff_norm));
    // attention branch: x1 = x + attn(h) Wo^T
    add_into(gb.o_proj, k::gemm_tn(dx1, c.a));
    const Matrix da = k::gemm(dx1, bw.o_proj);
    const auto ag = ops::causal_attention_backward(c.q, c.kk, c.v, c.probs, da, cfg.n_heads);
    add_into(gb.q_proj, k::gemm_tn(ag.dq, c.h));
    add_into(gb.k_proj, k::gemm_tn(ag.dk, c.h));
    add_into(gb.v_proj, k::gemm_tn(ag.dv, c.h));
    Matrix dh = k::gemm(ag.dq, bw.q_proj);
    add_into(dh, k::gemm(ag.dk, bw.k_proj));
    add_into(dh, k::gemm(ag.dv, bw.v_proj));
    dx = dx1;
    add_into(dx, ops::rmsnorm_backward(c.x, bw.attn_norm, c.r1, dh, gb.attn_norm));
  }
  for (std::size_t t = 0; t < t_len; ++t) {
    for (std::size_t j = 0; j < cfg.d_model; ++j) {
      grad->tok_emb(tokens[t], j) += dx(t, j);
      grad->pos_emb(t, j) += dx(t, j);
    }
  }
  return loss;
}

FitReport fit_next_token(Model& model, std::span<const TokenId> corpus, const FitOptions& opt) {
  const ModelConfig& cfg = model.config();
  const std::size_t seq = opt.seq_len == 0 ? cfg.context_len : opt.seq_len;
  if (seq < 2 || seq > cfg.context_len) throw ContextError("fit window must be in [2, context_len]");
  if (corpus.size() < seq) throw SizeError("fit corpus shorter than one window");

  ModelWeights w = model.weights();
  auto params = parameter_views(w);
  std::size_t n_params = 0;
  for (auto p : params) n_params += p.size();
  std::vector<double> m(n_params, 0.0), v(n_params, 0.0);

  SplitMix64 rng(opt.seed);
  FitReport report;
  const double per_token = 1.0 / static_cast<double>(opt.batch * (seq - 1));
  for (std::size_t step = 0; step < opt.steps; ++step) {
    ModelWeights g = ModelWeights::zeros(cfg);
    for (auto& b : g.blocks) {
      std::fill(b.attn_norm.begin(), b.attn_norm.end(), 0.0);
      std::fill(b.ff_norm.begin(), b.ff_norm.end(), 0.0);
    }
    std::fill(g.final_norm.begin(), g.final_norm.end(), 0.0);

    double loss = 0.0;
    for (std::size_t i = 0; i < opt.batch; ++i) {
      const auto off = static_cast<std::size_t>(rng.uniform_below(corpus.size() - seq + 1));
      loss += sequence_loss(cfg, w, corpus.subspan(off, seq), &g, per_token);
    }
    report.losses.push_back(loss * per_token);

    auto grads = parameter_views(g);
    double norm2 = 0.0;
    for (auto gs : grads)
      for (double x : gs) norm2 += x * x;
    const double norm = std::sqrt(norm2);
    const double clip = (opt.grad_clip > 0.0 && norm > opt.grad_clip) ? opt.grad_clip / norm : 1.0;

    double lr = opt.lr;
    if (step < opt.warmup) {
      lr *= static_cast<double>(step + 1) / static_cast<double>(opt.warmup);
    } else {
      const double span = static_cast<double>(std::max<std::size_t>(opt.steps - opt.warmup, 1));
      const double prog = static_cast<double>(step - opt.warmup) / span;
      lr *= 0.1 + 0.9 * 0.5 * (1.0 + std::cos(std::numbers::pi * prog));
    }
    const double t = static_cast<double>(step + 1);
    const double bc1 = 1.0 - std::pow(opt.beta1, t);
    const double bc2 = 1.0 - std::pow(opt.beta2, t);
    std::size_t idx = 0;
    for (std::size_t p = 0; p < params.size(); ++p) {
      for (std::size_t j = 0; j < params[p].size(); ++j, ++idx) {
        const double gj = grads[p][j] * clip;
        m[idx] = opt.beta1 * m[idx] + (1.0 - opt.beta1) * gj;
        v[idx] = opt.beta2 * v[idx] + (1.0 - opt.beta2) * gj * gj;
        params[p][j] -= lr * (m[idx] / bc1) / (std::sqrt(v[idx] / bc2) + opt.eps);
      }
    }
  }
  w.round_to_float();
  model.set_weights(std::move(w));
  return report;
}

}  // namespace mqnt
