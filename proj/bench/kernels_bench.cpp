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

// Serial reference kernels against their OpenMP counterparts. Both produce
// bit-identical results; this only measures throughput.

#include <cstdint>

#include <benchmark/benchmark.h>

#include "mqnt/model/model.hpp"
#include "mqnt/numerics/kernels.hpp"
#include "mqnt/numerics/rng.hpp"

namespace {

mqnt::Matrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
  mqnt::SplitMix64 rng(seed);
  mqnt::Matrix m(r, c);
  for (double& v : m.values()) v = rng.uniform01() - 0.5;
  return m;
}

template <mqnt::Matrix (*Kernel)(const mqnt::Matrix&, const mqnt::Matrix&)>
void BM_Gemm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_matrix(n, n, 1);
  const auto b = random_matrix(n, n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(a, b));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n * n));
}

template <mqnt::Matrix (*Kernel)(const mqnt::Matrix&)>
void BM_Gram(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = random_matrix(4 * n, n, 3);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(x));
}

void BM_Forward(benchmark::State& state) {
  const mqnt::Model model = mqnt::Model::initialize(mqnt::ModelConfig{}, 5);
  mqnt::TokenSeq tokens(model.context_len());
  for (std::size_t i = 0; i < tokens.size(); ++i) tokens[i] = static_cast<mqnt::TokenId>((i * 37) % 256);
  for (auto _ : state) benchmark::DoNotOptimize(model.forward(tokens));
}

}  // namespace

BENCHMARK(BM_Gemm<mqnt::kernels::serial::gemm>)->Name("gemm/serial")->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(BM_Gemm<mqnt::kernels::omp::gemm>)->Name("gemm/omp")->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(BM_Gemm<mqnt::kernels::serial::gemm_nt>)->Name("gemm_nt/serial")->Arg(128);
BENCHMARK(BM_Gemm<mqnt::kernels::omp::gemm_nt>)->Name("gemm_nt/omp")->Arg(128);
BENCHMARK(BM_Gram<mqnt::kernels::serial::gram>)->Name("gram/serial")->Arg(64)->Arg(256);
BENCHMARK(BM_Gram<mqnt::kernels::omp::gram>)->Name("gram/omp")->Arg(64)->Arg(256);
BENCHMARK(BM_Forward)->Name("forward/tiny");

BENCHMARK_MAIN();
