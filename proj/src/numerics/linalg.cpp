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

#include "mqnt/numerics/linalg.hpp"

#include <cmath>
#include <string>

#include "mqnt/errors.hpp"
#include "mqnt/numerics/kernels.hpp"

namespace mqnt {

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " * " +
                     std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  return kernels::omp::gemm(a, b);
}

Matrix damp_diagonal(const Matrix& a, double damping) {
  if (a.rows() != a.cols()) throw ShapeError("damp_diagonal: matrix is not square");
  if (!(damping >= 0.0)) throw ShapeError("damp_diagonal: damping must be >= 0");
  Matrix out = a;
  const std::size_t n = a.rows();
  if (n == 0 || damping == 0.0) return out;
  double trace = 0.0;
  for (std::size_t i = 0; i < n; ++i) trace += a(i, i);
  const double add = damping * (trace / static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) out(i, i) += add;
  return out;
}

Matrix cholesky(const Matrix& a, double damping) {
  const Matrix d = damp_diagonal(a, damping);
  const std::size_t n = d.rows();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double x = d(i, j), y = d(j, i);
      if (std::abs(x - y) > 1e-9 * std::max({1.0, std::abs(x), std::abs(y)})) {
        throw ShapeError("cholesky: matrix is not symmetric at (" + std::to_string(i) + "," +
                         std::to_string(j) + ")");
      }
    }
  }
  Matrix l(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = d(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      if (i == j) {
        if (!(s > 0.0)) {
          throw NotPositiveDefiniteError("cholesky: non-positive pivot " + std::to_string(s) +
                                         " at row " + std::to_string(i));
        }
        l(i, i) = std::sqrt(s);
      } else {
        l(i, j) = s / l(j, j);
      }
    }
  }
  return l;
}

Matrix invert_upper_triangular(const Matrix& u) {
  if (u.rows() != u.cols()) throw ShapeError("invert_upper_triangular: matrix is not square");
  const std::size_t n = u.rows();
  for (std::size_t i = 0; i < n; ++i) {
    if (u(i, i) == 0.0) throw SingularityError("zero diagonal at " + std::to_string(i));
  }
  // Column j of the inverse solves U x = e_j; x is zero below row j.
  Matrix inv(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t ii = j + 1; ii-- > 0;) {
      double s = ii == j ? 1.0 : 0.0;
      for (std::size_t k = ii + 1; k <= j; ++k) s -= u(ii, k) * inv(k, j);
      inv(ii, j) = s / u(ii, ii);
    }
  }
  return inv;
}

}  // namespace mqnt
