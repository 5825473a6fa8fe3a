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

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>

#include <unistd.h>

#include "mqnt/io/byte_io.hpp"
#include "mqnt/numerics/kernels.hpp"
#include "mqnt/numerics/matrix.hpp"
#include "mqnt/numerics/rng.hpp"

namespace mqnt::testing {

inline std::filesystem::path data_dir() { return MQNT_DATA_DIR; }
inline std::filesystem::path test_dir() { return MQNT_TEST_DIR; }
inline std::filesystem::path config_dir() { return MQNT_CONFIG_DIR; }

inline std::string read_text(const std::filesystem::path& p) {
  const auto bytes = read_file(p);
  return std::string(bytes.begin(), bytes.end());
}

inline Matrix random_matrix(std::size_t r, std::size_t c, SplitMix64& rng, double scale = 1.0) {
  Matrix m(r, c);
  for (double& v : m.values()) v = scale * rng.normal();
  return m;
}

// X^T X / rows + ridge * I for a random X with more rows than columns.
inline Matrix random_spd(std::size_t n, SplitMix64& rng, double ridge = 1e-3) {
  const Matrix x = random_matrix(4 * n, n, rng);
  Matrix h = kernels::serial::gram(x);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h(i, j) /= static_cast<double>(4 * n);
  for (std::size_t i = 0; i < n; ++i) h(i, i) += ridge;
  return h;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() / ("mqnt_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  static int& counter() {
    static int n = 0;
    return n;
  }
  std::filesystem::path path_;
};

}  // namespace mqnt::testing
