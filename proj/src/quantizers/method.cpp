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

#include "mqnt/quantizers/method.hpp"

#include "mqnt/errors.hpp"

namespace mqnt {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::rtn: return "rtn";
    case Method::gptq: return "gptq";
    case Method::spqr: return "spqr";
    case Method::awq: return "awq";
    case Method::smoothquant: return "smoothquant";
    case Method::smoothquant_gptq: return "smoothquant_gptq";
  }
  return "?";
}

Method parse_method(std::string_view s) {
  for (auto m : {Method::rtn, Method::gptq, Method::spqr, Method::awq, Method::smoothquant, Method::smoothquant_gptq}) {
    if (to_string(m) == s) return m;
  }
  throw FormatError("unknown method '" + std::string(s) + "'");
}

bool quantizes_activations(Method m) { return m == Method::smoothquant || m == Method::smoothquant_gptq; }

void MethodSpec::validate() const {
  cfg.validate();
  if (!(params.damping >= 0.0)) throw ShapeError("damping must be >= 0");
  if (!(params.outlier_threshold >= 0.0)) throw ShapeError("outlier_threshold must be >= 0");
  if (!(params.outlier_cap_fraction >= 0.0 && params.outlier_cap_fraction <= 0.05)) {
    throw ShapeError("outlier_cap_fraction must be in [0, 0.05]");
  }
  if (params.awq_grid_points < 2) throw ShapeError("awq_grid_points must be >= 2");
  if (!(params.smooth_alpha >= 0.0 && params.smooth_alpha <= 1.0)) throw ShapeError("smooth_alpha must be in [0, 1]");
}

std::string MethodSpec::label() const {
  return std::string(to_string(method)) + " W" + std::to_string(cfg.w_bits) + "A" + std::to_string(cfg.a_bits);
}

}  // namespace mqnt
