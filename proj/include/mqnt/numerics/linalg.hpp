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

namespace mqnt {

// a * b through the parallel kernel. Throws ShapeError on mismatch.
Matrix matmul(const Matrix& a, const Matrix& b);

// Lower-triangular L with L * L^T == a + damping * mean(diag(a)) * I.
// Throws NotPositiveDefiniteError when a pivot is not strictly positive.
Matrix cholesky(const Matrix& a, double damping = 0.0);

// Inverse of an upper-triangular matrix by back substitution.
// Throws SingularityError on a zero diagonal entry.
Matrix invert_upper_triangular(const Matrix& u);

// Adds damping * mean(diag(a)) to the diagonal.
Matrix damp_diagonal(const Matrix& a, double damping);

}  // namespace mqnt
