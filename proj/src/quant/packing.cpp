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

#include "mqnt/quant/packing.hpp"

#include <algorithm>
#include <string>

#include "mqnt/errors.hpp"

namespace mqnt {

namespace {

void check_bits(int bits) {
  if (bits < 1 || bits > 8) throw FormatError("packing supports 1..8 bits, got " + std::to_string(bits));
}

}  // namespace

std::size_t padded_code_count(std::size_t n) { return (n + 7) / 8 * 8; }

std::size_t packed_group_bytes(std::size_t n, int bits) {
  return padded_code_count(n) / 8 * static_cast<std::size_t>(bits);
}

void pack_codes(std::span<const std::uint32_t> codes, int bits, std::span<std::uint8_t> out) {
  check_bits(bits);
  if (out.size() != packed_group_bytes(codes.size(), bits)) throw FormatError("pack_codes: output size mismatch");
  std::fill(out.begin(), out.end(), std::uint8_t{0});
  const std::uint32_t mask = (std::uint32_t{1} << bits) - 1;
  std::size_t bit = 0;
  for (std::uint32_t c : codes) {
    if (c > mask) throw FormatError("pack_codes: code " + std::to_string(c) + " exceeds " + std::to_string(bits) + " bits");
    for (int b = 0; b < bits; ++b, ++bit) {
      if ((c >> b) & 1u) out[bit / 8] |= static_cast<std::uint8_t>(1u << (bit % 8));
    }
  }
}

std::vector<std::uint8_t> pack_codes(std::span<const std::uint32_t> codes, int bits) {
  std::vector<std::uint8_t> out(packed_group_bytes(codes.size(), bits));
  pack_codes(codes, bits, out);
  return out;
}

void unpack_codes(std::span<const std::uint8_t> bytes, int bits, std::span<std::uint32_t> out) {
  check_bits(bits);
  if (bytes.size() != packed_group_bytes(out.size(), bits)) {
    throw FormatError("unpack_codes: " + std::to_string(bytes.size()) + " bytes cannot hold " +
                      std::to_string(out.size()) + " codes of " + std::to_string(bits) + " bits");
  }
  std::size_t bit = 0;
  for (auto& c : out) {
    std::uint32_t v = 0;
    for (int b = 0; b < bits; ++b, ++bit) v |= static_cast<std::uint32_t>((bytes[bit / 8] >> (bit % 8)) & 1u) << b;
    c = v;
  }
}

std::vector<std::uint32_t> unpack_codes(std::span<const std::uint8_t> bytes, int bits, std::size_t count) {
  std::vector<std::uint32_t> out(count);
  unpack_codes(bytes, bits, out);
  return out;
}

}  // namespace mqnt
