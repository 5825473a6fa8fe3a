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

// Code packing for one group. Codes are written as a little-endian bit
// stream: code i occupies bits [i*bits, (i+1)*bits) where bit k lives in
// byte k/8 at position k%8. The group is padded with zero codes to a
// multiple of 8 codes, so every group fills a whole number of bytes
// (8 codes -> `bits` bytes; e.g. 3-bit packs 8 codes per 3 bytes).
namespace mqnt {

std::size_t padded_code_count(std::size_t n);
std::size_t packed_group_bytes(std::size_t n, int bits);

void pack_codes(std::span<const std::uint32_t> codes, int bits, std::span<std::uint8_t> out);
std::vector<std::uint8_t> pack_codes(std::span<const std::uint32_t> codes, int bits);

void unpack_codes(std::span<const std::uint8_t> bytes, int bits, std::span<std::uint32_t> out);
std::vector<std::uint32_t> unpack_codes(std::span<const std::uint8_t> bytes, int bits, std::size_t count);

}  // namespace mqnt
