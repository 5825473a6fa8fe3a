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

#include "mqnt/quantizers/compose.hpp"

#include <array>
#include <map>
#include <string>

#include "internal.hpp"
#include "mqnt/model/capture.hpp"
#include "mqnt/quant/rtn.hpp"
#include "mqnt/quantizers/awq.hpp"
#include "mqnt/quantizers/gptq.hpp"
#include "mqnt/quantizers/hessian.hpp"
#include "mqnt/quantizers/smoothquant.hpp"
#include "mqnt/quantizers/spqr.hpp"

namespace mqnt {

LayerResult quantize_layer(const Matrix& w, const ActivationStats& stats, const MethodSpec& spec) {
  switch (spec.method) {
    case Method::rtn: {
      spec.validate();
      QuantizedTensor q = rtn_quantize(w, spec.cfg);
      const Matrix h = accumulate_hessian(stats);
      QuantizationReport rep = detail::make_report(w, q, h, detail::prepare_hessian(h, spec.params.damping), spec);
      return {std::move(q), std::move(rep)};
    }
    case Method::gptq: return gptq_quantize_layer(w, accumulate_hessian(stats), spec);
    case Method::spqr: return spqr_quantize_layer(w, accumulate_hessian(stats), spec);
    case Method::awq: return awq_quantize_layer(w, stats, spec);
    case Method::smoothquant: return smoothquant_quantize_layer(w, stats, spec);
    case Method::smoothquant_gptq: return smoothquant_gptq_quantize_layer(w, stats, spec);
  }
  throw ShapeError("unknown method");
}

namespace {

using StatsByName = std::map<LayerName, ActivationStats>;

// Inputs of the requested layers of block b, stacked over all calibration sequences.
StatsByName capture_block(const Model& m, std::size_t b, const std::vector<Matrix>& hidden,
                          std::span<const LayerName> wanted) {
  std::map<LayerName, std::vector<Matrix>> parts;
  const CaptureSink sink = [&](const LayerRef& ref, const Matrix& x) {
    for (LayerName n : wanted) {
      if (ref.name == n) parts[n].push_back(x);
    }
  };
  for (const Matrix& h : hidden) m.run_block(b, h, sink);
  StatsByName out;
  for (LayerName n : wanted) out.emplace(n, ActivationStats::from_rows({b, n}, stack_rows(parts[n])));
  return out;
}

LayerResult quantize_annotated(const Model& m, const LayerRef& ref, const ActivationStats& stats,
                               const MethodSpec& spec) {
  try {
    LayerResult r = quantize_layer(m.weights().linear(ref), stats, spec);
    r.report.layer = ref;
    return r;
  } catch (const std::exception& e) {
    throw LayerQuantizationError(ref, e.what(), std::current_exception());
  }
}

}  // namespace

ComposeResult compose_quantize(const Model& model, const CalibrationSet& calib, const MethodSpec& spec,
                               const ComposeOptions& options) {
  spec.validate();
  if (calib.sequences.empty()) throw EmptyCalibrationError("calibration set is empty");
  const std::size_t tokens = calib.total_tokens();
  if (options.max_calibration_tokens != 0 && tokens > options.max_calibration_tokens) {
    throw SizeError("calibration set holds " + std::to_string(tokens) + " tokens, memory bound is " +
                    std::to_string(options.max_calibration_tokens));
  }
  const ModelConfig& cfg = model.config();
  const int act_bits = spec.cfg.a_bits;
  ComposeResult out{model, {}};
  Model& m = out.model;

  std::vector<Matrix> hidden;
  hidden.reserve(calib.sequences.size());
  for (const auto& seq : calib.sequences) hidden.push_back(m.embed(seq));

  for (std::size_t b = 0; b < cfg.n_layers; ++b) {
    if (spec.cfg.sequential_mode == SequentialMode::block_sequential) {
      const StatsByName stats = capture_block(m, b, hidden, kBlockLayers);
      constexpr std::size_t n = std::size(kBlockLayers);
      std::array<LayerResult, n> results;
      std::array<std::exception_ptr, n> errors;
#pragma omp parallel for schedule(static)
      for (std::size_t i = 0; i < n; ++i) {
        try {
          const LayerRef ref{b, kBlockLayers[i]};
          results[i] = quantize_annotated(m, ref, stats.at(ref.name), spec);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
      for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
      for (std::size_t i = 0; i < n; ++i) {
        m.replace_weights({b, kBlockLayers[i]}, std::move(results[i].tensor), act_bits);
        out.reports.push_back(std::move(results[i].report));
      }
    } else {
      for (LayerName name : kBlockLayers) {
        const LayerName one[] = {name};
        const StatsByName stats = capture_block(m, b, hidden, one);
        const LayerRef ref{b, name};
        LayerResult r = quantize_annotated(m, ref, stats.at(name), spec);
        m.replace_weights(ref, std::move(r.tensor), act_bits);
        out.reports.push_back(std::move(r.report));
      }
    }
    for (Matrix& h : hidden) h = m.run_block(b, h);
  }

  const LayerRef head = LayerRef::head(cfg);
  std::vector<Matrix> parts;
  parts.reserve(hidden.size());
  for (const Matrix& h : hidden) parts.push_back(m.final_hidden(h));
  const ActivationStats head_stats = ActivationStats::from_rows(head, stack_rows(parts));
  LayerResult r = quantize_annotated(m, head, head_stats, spec);
  m.replace_weights(head, std::move(r.tensor), act_bits);
  out.reports.push_back(std::move(r.report));
  return out;
}

}  // namespace mqnt
