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
#include <span>
#include <vector>

#include "mqnt/model/model.hpp"

namespace mqnt {

// Model snapshot layout (all integers little-endian):
//
//   0   magic "MQNT0001"
//   8   u64 header length H
//   16  H bytes of UTF-8 JSON header (config, checksum, tensor index)
//   P   payload, P = 16 + H rounded up to a multiple of 64
//
// Tensor offsets in the index are relative to P and multiples of 64. The
// header's "checksum" is CRC-64/XZ over the whole payload. Byte-level
// details are in docs/formats.md.
inline constexpr std::uint32_t kModelFormatVersion = 1;

std::vector<std::uint8_t> serialize_model(const Model& model);
Model deserialize_model(std::span<const std::uint8_t> bytes, bool verify_checksum = true);

void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path, bool verify_checksum = true);

}  // namespace mqnt
