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

#include "mqnt/model/capture.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mqnt/errors.hpp"

namespace mqnt {

std::vector<double> column_absmax(const Matrix& x) {
  std::vector<double> m(x.cols(), 0.0);
  for (std::size_t t = 0; t < x.rows(); ++t) {
    const auto r = x.row(t);
    for (std::size_t j = 0; j < r.size(); ++j) m[j] = std::max(m[j], std::abs(r[j]));
  }
  return m;
}

ActivationStats ActivationStats::from_rows(const LayerRef& layer, Matrix input) {
  ActivationStats s{layer, std::move(input), {}};
  s.per_channel_absmax = column_absmax(s.input_matrix);
  return s;
}

Matrix stack_rows(std::span<const Matrix> parts) {
  if (parts.empty()) return {};
  const std::size_t cols = parts.front().cols();
  std::size_t rows = 0;
  for (const auto& p : parts) {
    if (p.cols() != cols) throw ShapeError("stack_rows: column mismatch");
    rows += p.rows();
  }
  std::vector<double> data;
  data.reserve(rows * cols);
  for (const auto& p : parts) data.insert(data.end(), p.values().begin(), p.values().end());
  return Matrix(rows, cols, std::move(data));
}

std::map<LayerRef, ActivationStats> capture_activations(const Model& model, const CalibrationSet& calib,
                                                        const std::set<LayerRef>& layers) {
  if (calib.sequences.empty()) throw EmptyCalibrationError("calibration set is empty");
  for (const auto& l : layers) validate(l, model.config());
  std::map<LayerRef, std::vector<Matrix>> parts;
  const CaptureSink sink = [&](const LayerRef& ref, const Matrix& x) {
    if (layers.contains(ref)) parts[ref].push_back(x);
  };
  for (const auto& seq : calib.sequences) model.forward(seq, sink);
  std::map<LayerRef, ActivationStats> out;
  for (const auto& l : layers) out.emplace(l, ActivationStats::from_rows(l, stack_rows(parts[l])));
  return out;
}

}  // namespace mqnt
