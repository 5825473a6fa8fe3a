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

#include <cstdint>
#include <filesystem>

#include "mqnt/model/model.hpp"
#include "mqnt/model/train.hpp"

namespace mqnt {

// Sizes and seeds of the bundled desk-scale data.
struct BundleSpec {
  std::size_t sentiment_records = 1000;
  std::size_t exam_records = 500;
  std::size_t train_bytes = 200000;
  std::size_t eval_bytes = 20000;
  std::uint64_t seed = 2024;
};

// Writes datasets/*.mqtk, corpus/{train,eval}.mqtk and templates/*.json under `dir`.
void write_data_bundle(const std::filesystem::path& dir, const BundleSpec& spec = {});

// The bundled tiny model: 2 blocks, d_model 64, 4 heads, d_ff 256,
// context 128, byte vocabulary, initialized from `seed` and fitted to `corpus`.
ModelConfig tiny_model_config();
FitOptions tiny_fit_options(std::uint64_t seed);
Model fit_tiny_model(std::span<const TokenId> corpus, std::uint64_t seed, FitReport* report = nullptr);

}  // namespace mqnt
