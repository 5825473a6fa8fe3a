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

#include "mqnt/calib/dataset.hpp"

namespace mqnt {

// Tokenized corpus / dataset layout (little-endian):
//
//   magic "MQTK0001", u32 vocab_size, u32 flags (bit 0: record index,
//   bit 1: metadata), u64 token count N, N x u32 token ids,
//   [u64 record count R, R x (u64 offset, u64 length)],
//   [u64 byte length M, M bytes of UTF-8 JSON metadata]
std::vector<std::uint8_t> serialize_corpus(std::span<const TokenId> tokens, std::uint32_t vocab_size = 256);
std::vector<std::uint8_t> serialize_dataset(const DatasetHandle& h, std::uint32_t vocab_size = 256);

// Whole token stream of any corpus file.
TokenSeq deserialize_corpus(std::span<const std::uint8_t> bytes);
// Requires a record index. Without metadata the dataset id is `fallback_id`.
DatasetHandle deserialize_dataset(std::span<const std::uint8_t> bytes, const std::string& fallback_id = "dataset");

void save_corpus(std::span<const TokenId> tokens, const std::filesystem::path& path, std::uint32_t vocab_size = 256);
void save_dataset(const DatasetHandle& h, const std::filesystem::path& path, std::uint32_t vocab_size = 256);
TokenSeq load_corpus(const std::filesystem::path& path);
DatasetHandle load_dataset(const std::filesystem::path& path);

}  // namespace mqnt
