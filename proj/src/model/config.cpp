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

#include "mqnt/model/config.hpp"

#include <charconv>

#include "mqnt/errors.hpp"

namespace mqnt {

void ModelConfig::validate() const {
  if (vocab_size < 2) throw ShapeError("vocab_size must be >= 2");
  if (context_len < 2) throw ShapeError("context_len must be >= 2");
  if (d_model == 0 || n_heads == 0 || d_model % n_heads != 0) throw ShapeError("d_model must be divisible by n_heads");
  if (d_ff == 0) throw ShapeError("d_ff must be positive");
}

std::string_view to_string(LayerName n) {
  switch (n) {
    case LayerName::q_proj: return "q_proj";
    case LayerName::k_proj: return "k_proj";
    case LayerName::v_proj: return "v_proj";
    case LayerName::o_proj: return "o_proj";
    case LayerName::ff_up: return "ff_up";
    case LayerName::ff_down: return "ff_down";
    case LayerName::lm_head: return "lm_head";
  }
  return "?";
}

LayerName parse_layer_name(std::string_view s) {
  for (auto n : {LayerName::q_proj, LayerName::k_proj, LayerName::v_proj, LayerName::o_proj, LayerName::ff_up,
                 LayerName::ff_down, LayerName::lm_head}) {
    if (to_string(n) == s) return n;
  }
  throw FormatError("unknown layer name '" + std::string(s) + "'");
}

std::string LayerRef::to_string() const {
  if (name == LayerName::lm_head) return "lm_head";
  return "blocks." + std::to_string(block_index) + "." + std::string(mqnt::to_string(name));
}

LayerRef LayerRef::parse(std::string_view s, const ModelConfig& cfg) {
  if (s == "lm_head") return head(cfg);
  constexpr std::string_view prefix = "blocks.";
  if (!s.starts_with(prefix)) throw FormatError("bad layer reference '" + std::string(s) + "'");
  s.remove_prefix(prefix.size());
  const auto dot = s.find('.');
  if (dot == std::string_view::npos) throw FormatError("bad layer reference");
  std::size_t idx = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + dot, idx);
  if (ec != std::errc() || ptr != s.data() + dot) throw FormatError("bad block index in layer reference");
  const LayerRef ref{idx, parse_layer_name(s.substr(dot + 1))};
  validate(ref, cfg);
  return ref;
}

void validate(const LayerRef& ref, const ModelConfig& cfg) {
  if (ref.name == LayerName::lm_head) {
    if (ref.block_index != cfg.n_layers) throw ShapeError("lm_head must use block_index == n_layers");
  } else if (ref.block_index >= cfg.n_layers) {
    throw ShapeError("block index " + std::to_string(ref.block_index) + " out of range");
  }
}

std::vector<LayerRef> all_linear_layers(const ModelConfig& cfg) {
  std::vector<LayerRef> out;
  for (std::size_t b = 0; b < cfg.n_layers; ++b)
    for (auto n : kBlockLayers) out.push_back({b, n});
  out.push_back(LayerRef::head(cfg));
  return out;
}

}  // namespace mqnt
