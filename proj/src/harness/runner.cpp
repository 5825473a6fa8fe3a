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

#include "mqnt/harness/runner.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <memory>
#include <optional>

#include "mqnt/errors.hpp"
#include "mqnt/io/byte_io.hpp"
#include "mqnt/io/corpus_file.hpp"
#include "mqnt/io/crc64.hpp"
#include "mqnt/io/model_file.hpp"
#include "mqnt/quantizers/compose.hpp"

namespace mqnt {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Calibration set, evaluation records and exemplar pool derived from one dataset entry.
struct Prepared {
  DatasetHandle source;
  std::optional<CalibrationSet> calib;
  std::string calib_error;
  std::optional<DatasetHandle> test;
  DatasetHandle exemplars;
  std::string test_error;
};

Prepared prepare(const DatasetEntry& entry, const DatasetHandle& src, const CalibrationPolicy& policy) {
  Prepared p;
  p.source = src;
  if (policy.mode == CalibrationMode::carve_from_test) {
    try {
      CalibrationResult r = build_calibration_set(src, policy);
      p.calib = std::move(r.calibration);
      p.test = std::move(r.remaining);
      p.exemplars = std::move(r.exemplars);
    } catch (const Error& e) {
      p.calib_error = p.test_error = e.what();
    }
    return p;
  }
  p.test = src;
  try {
    const DatasetHandle train = load_dataset(*entry.train);
    CalibrationResult r = build_calibration_set(train, policy);
    p.calib = std::move(r.calibration);
    p.exemplars = std::move(r.exemplars);
  } catch (const Error& e) {
    p.calib_error = e.what();
  }
  return p;
}

struct Outcome {
  std::optional<MetricValue> metric;
  std::string error;
  double wall_time = 0.0;
};

Outcome evaluate(const Model& model, const Prepared& p, std::size_t shots, MetricName metric, const EvalSettings& es) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    if (!p.test) throw Error("test set unavailable: " + p.test_error);
    const std::size_t ctx = es.context_len == 0 ? model.context_len() : es.context_len;
    if (ctx > model.context_len()) {
      throw ContextError("eval.context_len " + std::to_string(ctx) + " exceeds the model context " +
                         std::to_string(model.context_len()));
    }
    const DatasetHandle& test = *p.test;
    if (metric == MetricName::ppl) {
      std::vector<std::size_t> keep(es.max_items == 0 ? test.size() : std::min(es.max_items, test.size()));
      for (std::size_t i = 0; i < keep.size(); ++i) keep[i] = i;
      const TokenSeq tokens = test.subset(keep).concatenated();
      o.metric = perplexity(model, tokens, ctx);
    } else {
      Task task = Task::generic_mc;
      if (!test.task.empty()) task = parse_task(test.task);
      const auto items = build_eval_items(test, builtin_template(task), shots, p.exemplars, ctx, es.max_items);
      o.metric = mc_accuracy(model, items, es.normalization);
    }
  } catch (const std::exception& e) {
    o.error = e.what();
  }
  o.wall_time = seconds_since(t0);
  return o;
}

std::string method_key(const MethodSpec& m) {
  return std::string(to_string(m.method)) + "/" + std::to_string(m.cfg.w_bits) + "/" + std::to_string(m.cfg.a_bits);
}

}  // namespace

std::size_t expected_row_count(const RunConfig& cfg, std::size_t scenario_cells) {
  return (cfg.methods.size() + 1) * scenario_cells * cfg.shots.size() * cfg.eval.metrics.size();
}

std::vector<RunResult> run_matrix(const RunConfig& cfg, const ProgressSink& progress) {
  const auto say = [&](const std::string& s) {
    if (progress) progress(s);
  };

  // Provenance: resolved config plus the bytes of every input file.
  std::string digest_input = cfg.canonical();
  const auto add_file = [&](const std::filesystem::path& p) {
    const auto bytes = read_file(p);
    digest_input += p.filename().string() + ":" + std::to_string(crc64_xz(bytes)) + "\n";
  };
  add_file(cfg.model_path);
  for (const auto& d : cfg.datasets) {
    add_file(d.path);
    if (d.train) add_file(*d.train);
  }
  const std::uint64_t run_digest = fnv1a64(digest_input);

  const Model fp = load_model(cfg.model_path);
  std::vector<DatasetHandle> handles;
  for (const auto& d : cfg.datasets) handles.push_back(load_dataset(d.path));

  // Calibration records longer than the model context are cut to it.
  CalibrationPolicy policy = cfg.calibration;
  if (policy.max_tokens == 0 || policy.max_tokens > fp.context_len()) policy.max_tokens = fp.context_len();

  std::map<std::string, Prepared> prepared;
  for (std::size_t i = 0; i < handles.size(); ++i) {
    const std::string label = handles[i].label();
    if (prepared.contains(label)) throw ValidationError({"datasets: duplicate dataset " + label});
    prepared.emplace(label, prepare(cfg.datasets[i], handles[i], policy));
  }

  const auto scenarios = enumerate_scenarios(handles, cfg.shifts, cfg.shots);

  struct Quantized {
    std::shared_ptr<const Model> model;
    std::string error;
  };
  std::map<std::string, Quantized> models;
  const auto quantized_model = [&](const std::string& calib_label, const MethodSpec& spec) -> const Quantized& {
    const std::string key = calib_label + "|" + method_key(spec);
    if (auto it = models.find(key); it != models.end()) return it->second;
    say("quantize " + calib_label + " " + spec.label());
    Quantized q;
    const Prepared& p = prepared.at(calib_label);
    if (!p.calib) {
      q.error = "calibration set unavailable: " + p.calib_error;
    } else {
      try {
        ComposeOptions opt;
        opt.max_calibration_tokens = cfg.max_calibration_tokens;
        q.model = std::make_shared<const Model>(compose_quantize(fp, *p.calib, spec, opt).model);
      } catch (const std::exception& e) {
        q.error = std::string("quantization failed: ") + e.what();
      }
    }
    return models.emplace(key, std::move(q)).first->second;
  };

  std::map<std::string, Outcome> evals;
  const auto evaluation = [&](const std::string& model_key, const Model& model, const std::string& test_label,
                              std::size_t shots, MetricName metric) -> const Outcome& {
    const std::string key = model_key + "|" + test_label + "|" + std::to_string(shots) + "|" + std::string(to_string(metric));
    if (auto it = evals.find(key); it != evals.end()) return it->second;
    say("eval " + model_key + " on " + test_label + " shots=" + std::to_string(shots) + " " + std::string(to_string(metric)));
    return evals.emplace(key, evaluate(model, prepared.at(test_label), shots, metric, cfg.eval)).first->second;
  };

  std::vector<RunResult> results;
  for (const ScenarioSpec& sc : scenarios) {
    const std::string calib_label = sc.calib_source.label();
    const std::string test_label = sc.test_source.label();
    for (std::size_t m = 0; m <= cfg.methods.size(); ++m) {
      const bool baseline = m == 0;
      const MethodSpec* spec = baseline ? nullptr : &cfg.methods[m - 1];
      const Quantized* q = baseline ? nullptr : &quantized_model(calib_label, *spec);
      for (MetricName metric : cfg.eval.metrics) {
        RunResult r;
        r.method = baseline ? kBaselineMethod : std::string(to_string(spec->method));
        r.w_bits = baseline ? 16 : spec->cfg.w_bits;
        r.a_bits = baseline ? 16 : spec->cfg.a_bits;
        r.calib_id = calib_label;
        r.test_id = test_label;
        r.shift = sc.shift;
        r.iid = sc.iid();
        r.shots = sc.shots;
        r.metric = metric;
        r.provenance = fnv1a64(r.method + "|" + std::to_string(r.w_bits) + "/" + std::to_string(r.a_bits) + "|" +
                                   calib_label + "|" + test_label + "|" + std::to_string(r.shots) + "|" +
                                   std::string(to_string(metric)),
                               run_digest);
        if (q && !q->model) {
          r.ok = false;
          r.error = q->error;
          r.value = std::nan("");
        } else {
          const std::string model_key = baseline ? "baseline" : calib_label + "|" + method_key(*spec);
          const Outcome& o = evaluation(model_key, baseline ? fp : *q->model, test_label, sc.shots, metric);
          r.wall_time = o.wall_time;
          if (o.metric) {
            r.value = o.metric->value;
            r.n_items = o.metric->n_items;
          } else {
            r.ok = false;
            r.error = o.error;
            r.value = std::nan("");
          }
        }
        results.push_back(std::move(r));
      }
    }
  }
  sort_results(results);
  return results;
}

}  // namespace mqnt
