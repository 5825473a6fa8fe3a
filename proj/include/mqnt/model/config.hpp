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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mqnt/numerics/matrix.hpp"
#include "mqnt/tokens.hpp"

namespace mqnt {

struct ModelConfig {
  std::size_t vocab_size = 256;
  std::size_t context_len = 128;
  std::size_t d_model = 64;
  std::size_t n_layers = 2;
  std::size_t n_heads = 4;
  std::size_t d_ff = 256;

  std::size_t head_dim() const { return d_model / n_heads; }
  void validate() const;
  bool operator==(const ModelConfig&) const = default;
};

enum class LayerName { q_proj, k_proj, v_proj, o_proj, ff_up, ff_down, lm_head };

std::string_view to_string(LayerName n);
LayerName parse_layer_name(std::string_view s);

// Addresses one linear layer. lm_head uses block_index == n_layers.
struct LayerRef {
  std::size_t block_index = 0;
  LayerName name = LayerName::q_proj;

  static LayerRef head(const ModelConfig& cfg) { return {cfg.n_layers, LayerName::lm_head}; }

  // "blocks.<i>.<name>" or "lm_head".
  std::string to_string() const;
  static LayerRef parse(std::string_view s, const ModelConfig& cfg);

  auto operator<=>(const LayerRef&) const = default;
};

void validate(const LayerRef& ref, const ModelConfig& cfg);

// The six per-block linear layers in forward (and quantization) order.
inline constexpr LayerName kBlockLayers[] = {LayerName::q_proj, LayerName::k_proj, LayerName::v_proj,
                                             LayerName::o_proj, LayerName::ff_up,  LayerName::ff_down};

// Every linear layer of a model in quantization order, lm_head last.
std::vector<LayerRef> all_linear_layers(const ModelConfig& cfg);

}  // namespace mqnt
