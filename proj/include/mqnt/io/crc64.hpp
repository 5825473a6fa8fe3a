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
#include <span>

namespace mqnt {

// CRC-64/XZ: reflected polynomial 0xC96C5795D7870F42, init and final XOR all
// ones. Check value for "123456789" is 0x995DC9BBDF1939FA.
std::uint64_t crc64_xz(std::span<const std::uint8_t> bytes);

}  // namespace mqnt
