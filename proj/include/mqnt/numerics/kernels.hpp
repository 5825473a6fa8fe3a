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

#include "mqnt/numerics/matrix.hpp"

// Dense product kernels in two flavours with identical results.
//
// `serial` is the straight-line reference: one dot product per output entry.
// `omp` splits output rows across OpenMP threads and streams the inner loop
// as an axpy so it vectorizes. Every output entry is still accumulated from
// 0.0 in ascending k order in both, so the two agree bit-for-bit (the build
// disables FMA contraction). Tests hold them to that.
namespace mqnt::kernels {

namespace serial {
Matrix gemm(const Matrix& a, const Matrix& b);     // a * b
Matrix gemm_nt(const Matrix& a, const Matrix& b);  // a * b^T
Matrix gemm_tn(const Matrix& a, const Matrix& b);  // a^T * b
Matrix gram(const Matrix& x);                      // x^T * x
}  // namespace serial

namespace omp {
Matrix gemm(const Matrix& a, const Matrix& b);
Matrix gemm_nt(const Matrix& a, const Matrix& b);
Matrix gemm_tn(const Matrix& a, const Matrix& b);
Matrix gram(const Matrix& x);
}  // namespace omp

// Number of OpenMP workers; honours MQNT_WORKERS when set.
int worker_count();
void configure_workers_from_env();

}  // namespace mqnt::kernels
