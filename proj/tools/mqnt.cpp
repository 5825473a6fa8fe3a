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

// mqnt: post-training quantization toolkit and benchmark runner.
//
//   mqnt quantize --model M --calib D --method gptq --bits 4/16 --output Q
//   mqnt eval     --model M --dataset D [--metric accuracy|ppl] [--shots K]
//   mqnt run      --config run.yaml [--seed S] [--output DIR] [--format F]
//   mqnt report   --input results.csv [--format csv|json|markdown]
//   mqnt gen-data --output data
//   mqnt fit      --corpus data/corpus/train.mqtk --output data/tiny.mqnt
//
// Exit status: 0 success, 1 invalid input or fatal error, 2 when a run
// finished with failed cells. MQNT_WORKERS sets the worker thread count.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mqnt/calib/calibration.hpp"
#include "mqnt/errors.hpp"
#include "mqnt/eval/metrics.hpp"
#include "mqnt/harness/bundle.hpp"
#include "mqnt/harness/config.hpp"
#include "mqnt/harness/report.hpp"
#include "mqnt/harness/runner.hpp"
#include "mqnt/io/byte_io.hpp"
#include "mqnt/io/corpus_file.hpp"
#include "mqnt/io/model_file.hpp"
#include "mqnt/io/results_file.hpp"
#include "mqnt/numerics/kernels.hpp"
#include "mqnt/quantizers/compose.hpp"

namespace fs = std::filesystem;
using namespace mqnt;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitPartial = 2;

void emit(const std::string& text, const std::string& output) {
  if (output.empty()) {
    std::cout << text;
  } else {
    write_file_atomic(output, text);
  }
}

bool has_record_index(const fs::path& p) {
  const auto bytes = read_file(p);
  return bytes.size() >= 16 && (bytes[12] & 1);
}

struct QuantizeArgs {
  std::string model, calib, method = "gptq", bits = "4/16", scheme = "asymmetric", mode = "block_sequential", output;
  std::size_t group_size = 128, n = 128, reserve = 300;
  std::uint64_t seed = 42;
};

int cmd_quantize(const QuantizeArgs& a) {
  const Model fp = load_model(a.model);
  MethodSpec spec;
  spec.method = parse_method(a.method);
  std::tie(spec.cfg.w_bits, spec.cfg.a_bits) = parse_bit_setting(a.bits);
  spec.cfg.group_size = a.group_size;
  spec.cfg.scheme = parse_scheme(a.scheme);
  spec.cfg.sequential_mode = parse_sequential_mode(a.mode);
  spec.validate();

  CalibrationSet calib;
  if (has_record_index(a.calib)) {
    CalibrationPolicy policy;
    policy.n = a.n;
    policy.reserve = a.reserve;
    policy.seed = a.seed;
    policy.max_tokens = fp.context_len();
    calib = build_calibration_set(load_dataset(a.calib), policy).calibration;
  } else {
    calib = build_c4_style_segments(load_corpus(a.calib), a.n, fp.context_len(), a.seed,
                                    fs::path(a.calib).stem().string());
  }
  ComposeResult res = compose_quantize(fp, calib, spec);
  res.model.finalize();
  save_model(res.model, a.output);
  for (const auto& r : res.reports) {
    std::printf("%-18s proxy_loss=%.6g output_mse=%.6g outliers=%zu\n", r.layer.to_string().c_str(), r.proxy_loss,
                r.output_mse, r.outlier_count);
  }
  return kExitOk;
}

struct EvalArgs {
  std::string model, dataset, metric = "accuracy", normalization = "per_token", format = "csv", output;
  std::size_t shots = 0, context_len = 0, max_items = 0;
  std::uint64_t seed = 42;
  bool carve = false;
};

int cmd_eval(const EvalArgs& a) {
  const Model model = load_model(a.model);
  const std::size_t ctx = a.context_len == 0 ? model.context_len() : a.context_len;
  RunResult r;
  r.method = "model";
  r.metric = parse_metric(a.metric);
  r.shots = a.shots;
  if (r.metric == MetricName::ppl) {
    const TokenSeq tokens = has_record_index(a.dataset) ? load_dataset(a.dataset).concatenated() : load_corpus(a.dataset);
    const MetricValue v = perplexity(model, tokens, ctx);
    r.test_id = fs::path(a.dataset).stem().string();
    r.value = v.value;
    r.n_items = v.n_items;
  } else {
    DatasetHandle test = load_dataset(a.dataset);
    DatasetHandle exemplars;
    if (a.carve || a.shots > 0) {
      CalibrationPolicy policy;
      policy.seed = a.seed;
      CalibrationResult c = build_calibration_set(test, policy);
      test = c.remaining;
      exemplars = c.exemplars;
    }
    const Task task = test.task.empty() ? Task::generic_mc : parse_task(test.task);
    const auto items = build_eval_items(test, builtin_template(task), a.shots, exemplars, ctx, a.max_items);
    const MetricValue v = mc_accuracy(model, items, parse_normalization(a.normalization));
    r.test_id = test.label();
    r.value = v.value;
    r.n_items = v.n_items;
  }
  r.calib_id = "-";
  const std::vector<RunResult> rows{r};
  emit(emit_report(rows, parse_report_format(a.format)), a.output);
  return kExitOk;
}

struct RunArgs {
  std::string config, output, format = "markdown";
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

int cmd_run(const RunArgs& a) {
  RunConfig cfg = load_config(a.config);
  if (a.seed) {
    cfg.seed = *a.seed;
    cfg.calibration.seed = *a.seed;
  }
  if (!a.output.empty()) cfg.output_dir = a.output;
  const auto results = run_matrix(cfg, [&](std::string_view s) {
    if (!a.quiet) std::cerr << s << "\n";
  });
  fs::create_directories(cfg.output_dir);
  write_results(cfg.output_dir / "results.csv", results);
  write_file_atomic(cfg.output_dir / "report.csv", emit_report(results, ReportFormat::csv));
  write_file_atomic(cfg.output_dir / "report.json", emit_report(results, ReportFormat::json));
  write_file_atomic(cfg.output_dir / "report.md", emit_report(results, ReportFormat::markdown));
  std::cout << emit_report(results, parse_report_format(a.format));
  std::size_t failed = 0;
  for (const auto& r : results) failed += r.ok ? 0 : 1;
  if (failed) {
    std::cerr << failed << " of " << results.size() << " cells failed\n";
    return kExitPartial;
  }
  return kExitOk;
}

int cmd_report(const std::string& input, const std::string& format, const std::string& output) {
  const auto results = read_results(input);
  emit(emit_report(results, parse_report_format(format)), output);
  return kExitOk;
}

int cmd_fit(const std::string& corpus, const std::string& output, std::uint64_t seed) {
  const TokenSeq tokens = load_corpus(corpus);
  FitReport rep;
  const Model m = fit_tiny_model(tokens, seed, &rep);
  save_model(m, output);
  if (!rep.losses.empty()) {
    std::printf("fitted %zu steps: loss %.4f -> %.4f\n", rep.losses.size(), rep.losses.front(), rep.losses.back());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  kernels::configure_workers_from_env();
  CLI::App app{"mqnt: post-training quantization toolkit and benchmark runner"};
  app.require_subcommand(1);

  QuantizeArgs qa;
  auto* quantize = app.add_subcommand("quantize", "Quantize one model with one method");
  quantize->add_option("--model", qa.model, "FP model file")->required();
  quantize->add_option("--calib", qa.calib, "Calibration dataset or corpus file")->required();
  quantize->add_option("--method", qa.method, "rtn, gptq, spqr, awq, smoothquant, smoothquant_gptq");
  quantize->add_option("--bits", qa.bits, "W/A setting, e.g. 4/16");
  quantize->add_option("--group-size", qa.group_size);
  quantize->add_option("--scheme", qa.scheme);
  quantize->add_option("--mode", qa.mode, "block_sequential or layer_sequential");
  quantize->add_option("--n", qa.n, "Calibration examples");
  quantize->add_option("--reserve", qa.reserve, "Records carved from a test split");
  quantize->add_option("--seed", qa.seed);
  quantize->add_option("--output", qa.output, "Quantized model file")->required();

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "Evaluate a model file on a dataset or corpus");
  eval->add_option("--model", ea.model)->required();
  eval->add_option("--dataset", ea.dataset)->required();
  eval->add_option("--metric", ea.metric, "accuracy or ppl");
  eval->add_option("--shots", ea.shots);
  eval->add_option("--normalization", ea.normalization, "per_token or sum");
  eval->add_option("--context-len", ea.context_len);
  eval->add_option("--max-items", ea.max_items);
  eval->add_option("--seed", ea.seed, "Seed of the carve that supplies exemplars");
  eval->add_flag("--carve", ea.carve, "Drop the calibration carve from the test records even at 0 shots");
  eval->add_option("--format", ea.format, "csv, json or markdown");
  eval->add_option("--output", ea.output, "Write the report here instead of stdout");

  RunArgs ra;
  auto* run = app.add_subcommand("run", "Run the full matrix from a config file");
  run->add_option("--config", ra.config)->required();
  run->add_option("--seed", ra.seed, "Override the config seed");
  run->add_option("--output", ra.output, "Override output_dir");
  run->add_option("--format", ra.format, "Report printed to stdout: csv, json or markdown");
  run->add_flag("--quiet", ra.quiet, "No progress lines");

  std::string rep_in, rep_format = "markdown", rep_out;
  auto* report = app.add_subcommand("report", "Render a results file as a table");
  report->add_option("--input", rep_in, "results.csv written by run")->required();
  report->add_option("--format", rep_format, "csv, json or markdown");
  report->add_option("--output", rep_out);

  std::string gen_out = "data";
  BundleSpec bundle;
  auto* gen = app.add_subcommand("gen-data", "Regenerate the bundled synthetic datasets, corpora and templates");
  gen->add_option("--output", gen_out);
  gen->add_option("--seed", bundle.seed);

  std::string fit_corpus, fit_out;
  std::uint64_t fit_seed = 7;
  auto* fit = app.add_subcommand("fit", "Initialize and fit the tiny model on a corpus");
  fit->add_option("--corpus", fit_corpus)->required();
  fit->add_option("--output", fit_out)->required();
  fit->add_option("--seed", fit_seed);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*quantize) return cmd_quantize(qa);
    if (*eval) return cmd_eval(ea);
    if (*run) return cmd_run(ra);
    if (*report) return cmd_report(rep_in, rep_format, rep_out);
    if (*gen) {
      write_data_bundle(gen_out, bundle);
      return kExitOk;
    }
    if (*fit) return cmd_fit(fit_corpus, fit_out, fit_seed);
  } catch (const ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitOk;
}
