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

#include <map>
#include <set>
#include <span>
#include <vector>

#include "mqnt/calib/dataset.hpp"
#include "mqnt/model/model.hpp"

namespace mqnt {

// Inputs seen by one linear layer over a calibration batch.
struct ActivationStats {
  LayerRef layer;
  Matrix input_matrix;                     // [total tokens x in_features]
  std::vector<double> per_channel_absmax;  // column-wise max |x|

  static ActivationStats from_rows(const LayerRef& layer, Matrix input);
};

std::vector<double> column_absmax(const Matrix& x);

// Runs every calibration sequence through the model and stacks the input of
// each requested layer, sequences in order. Model outputs are unaffected.
// Throws EmptyCalibrationError on an empty set, ContextError on overlong
// sequences.
std::map<LayerRef, ActivationStats> capture_activations(const Model& model, const CalibrationSet& calib,
                                                        const std::set<LayerRef>& layers);

// Vertical concatenation.
Matrix stack_rows(std::span<const Matrix> parts);

}  // namespace mqnt
