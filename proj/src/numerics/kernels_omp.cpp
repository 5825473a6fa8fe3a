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

#include <omp.h>

#include <cstdlib>
#include <string>

#include "mqnt/errors.hpp"
#include "mqnt/numerics/kernels.hpp"

namespace mqnt::kernels {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw ShapeError(std::string("kernel shape mismatch: ") + what);
}

// c[i, :] = sum_k a[i, k] * bt[k, :], rows of c split across threads.
void gemm_rows(const Matrix& a, const Matrix& bt, Matrix& c) {
  const auto m = static_cast<std::ptrdiff_t>(a.rows());
  const std::size_t kk = a.cols();
  const std::size_t n = bt.cols();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < m; ++i) {
    double* out = c.row(static_cast<std::size_t>(i)).data();
    const double* ai = a.row(static_cast<std::size_t>(i)).data();
    for (std::size_t k = 0; k < kk; ++k) {
      const double s = ai[k];
      const double* bk = bt.row(k).data();
      for (std::size_t j = 0; j < n; ++j) out[j] += s * bk[j];
    }
  }
}

}  // namespace

namespace omp {

Matrix gemm(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.rows(), "gemm a.cols != b.rows");
  Matrix c(a.rows(), b.cols());
  gemm_rows(a, b, c);
  return c;
}

Matrix gemm_nt(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.cols(), "gemm_nt a.cols != b.cols");
  Matrix c(a.rows(), b.rows());
  gemm_rows(a, b.transposed(), c);
  return c;
}

Matrix gemm_tn(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows(), "gemm_tn a.rows != b.rows");
  Matrix c(a.cols(), b.cols());
  const auto m = static_cast<std::ptrdiff_t>(a.cols());
  const std::size_t t_count = a.rows();
  const std::size_t n = b.cols();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < m; ++i) {
    double* out = c.row(static_cast<std::size_t>(i)).data();
    for (std::size_t t = 0; t < t_count; ++t) {
      const double s = a(t, static_cast<std::size_t>(i));
      const double* bt = b.row(t).data();
      for (std::size_t j = 0; j < n; ++j) out[j] += s * bt[j];
    }
  }
  return c;
}

Matrix gram(const Matrix& x) { return gemm_tn(x, x); }

}  // namespace omp

int worker_count() { return omp_get_max_threads(); }

void configure_workers_from_env() {
  if (const char* env = std::getenv("MQNT_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }
}

}  // namespace mqnt::kernels
