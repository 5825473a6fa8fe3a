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

#include <cstddef>
#include <exception>
#include <string>
#include <utility>
#include <vector>

#include "mqnt/calib/dataset.hpp"
#include "mqnt/errors.hpp"
#include "mqnt/model/capture.hpp"
#include "mqnt/model/model.hpp"
#include "mqnt/quantizers/method.hpp"

namespace mqnt {

// A per-layer failure inside compose_quantize. what() is prefixed with the layer
// name; cause() holds the original exception.
class LayerQuantizationError : public Error {
 public:
  LayerQuantizationError(LayerRef layer, const std::string& message, std::exception_ptr cause)
      : Error(layer.to_string() + ": " + message), layer_(layer), cause_(std::move(cause)) {}
  const LayerRef& layer() const { return layer_; }
  std::exception_ptr cause() const { return cause_; }

 private:
  LayerRef layer_;
  std::exception_ptr cause_;
};

struct ComposeOptions {
  // Upper bound on calibration tokens held in memory. 0 disables the check.
  std::size_t max_calibration_tokens = std::size_t{1} << 20;
};

struct ComposeResult {
  Model model;
  std::vector<QuantizationReport> reports;  // in quantization order
};

// Quantizes one layer from its captured inputs with the method in spec.
LayerResult quantize_layer(const Matrix& w, const ActivationStats& stats, const MethodSpec& spec);

ComposeResult compose_quantize(const Model& model, const CalibrationSet& calib, const MethodSpec& spec,
                               const ComposeOptions& options = {});

}  // namespace mqnt
