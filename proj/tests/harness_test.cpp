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

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "mqnt/calib/synthetic.hpp"
#include "mqnt/errors.hpp"
#include "mqnt/harness/config.hpp"
#include "mqnt/harness/report.hpp"
#include "mqnt/harness/runner.hpp"
#include "mqnt/io/corpus_file.hpp"
#include "mqnt/io/model_file.hpp"
#include "test_util.hpp"

namespace mqnt {
namespace {

using testing::TempDir;

// A small model and two sentiment datasets on disk.
struct Workspace {
  TempDir dir{"harness"};
  Workspace() {
    ModelConfig c;
    c.context_len = 48;
    c.d_model = 16;
    c.n_heads = 2;
    c.d_ff = 32;
    c.n_layers = 1;
    save_model(Model::initialize(c, 5), dir.path() / "m.mqnt");
    const auto& styles = synthetic::sentiment_styles();
    save_dataset(synthetic::sentiment_dataset(styles[0], 40, 1), dir.path() / "a.mqtk");
    save_dataset(synthetic::sentiment_dataset(styles[1], 40, 2), dir.path() / "b.mqtk");
    save_dataset(synthetic::sentiment_dataset(styles[2], 5, 3), dir.path() / "small.mqtk");
  }
  std::string config(const std::string& datasets, const std::string& extra = "") const {
    return "model: m.mqnt\n"
           "datasets: " + datasets + "\n"
           "methods:\n  - name: rtn\n    bits: [\"4/16\"]\n"
           "calibration: {n: 4, reserve: 8}\n" + extra;
  }
  RunConfig load(const std::string& text) const { return validate_config(text, dir.path()); }
};

std::vector<std::string> violations_of(const Workspace& ws, const std::string& text) {
  try {
    ws.load(text);
  } catch (const ValidationError& e) {
    return e.violations();
  }
  return {};
}

bool mentions(const std::vector<std::string>& v, const std::string& needle) {
  for (const auto& s : v)
    if (s.find(needle) != std::string::npos) return true;
  return false;
}

TEST(Config, MinimalConfigGetsDefaults) {
  Workspace ws;
  const RunConfig cfg = ws.load(ws.config("[a.mqtk]", "scenarios: {}\n"));
  ASSERT_EQ(cfg.methods.size(), 1u);
  EXPECT_EQ(cfg.methods[0].cfg.group_size, 128u);
  EXPECT_EQ(cfg.methods[0].cfg.w_bits, 4);
  EXPECT_EQ(cfg.methods[0].cfg.a_bits, 16);
  EXPECT_EQ(cfg.seed, 42u);
  EXPECT_EQ(cfg.calibration.seed, 42u);
  EXPECT_EQ(cfg.shifts, std::vector<Shift>{Shift::cross_dataset});
  EXPECT_EQ(cfg.shots, std::vector<std::size_t>{0});
  EXPECT_EQ(cfg.eval.metrics, std::vector<MetricName>{MetricName::accuracy});
  EXPECT_EQ(cfg.model_path, ws.dir.path() / "m.mqnt");
  EXPECT_EQ(cfg.output_dir, ws.dir.path() / "out");
}

TEST(Config, BadBitWidthNamesTheField) {
  Workspace ws;
  std::string text = ws.config("[a.mqtk]", "scenarios: {}\n");
  text.replace(text.find("4/16"), 4, "5/16");
  const auto v = violations_of(ws, text);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].find("methods[0].bits[0]"), std::string::npos) << v[0];
  EXPECT_NE(v[0].find("w_bits"), std::string::npos) << v[0];
}

TEST(Config, AllViolationsReportedTogether) {
  Workspace ws;
  const auto v = violations_of(ws, ws.config("[a.mqtk, missing.mqtk]", "scenarios: {shifts: [sideways]}\ncolour: red\n"));
  EXPECT_EQ(v.size(), 3u) << ::testing::PrintToString(v);
  EXPECT_TRUE(mentions(v, "datasets[1]"));
  EXPECT_TRUE(mentions(v, "scenarios.shifts[0]"));
  EXPECT_TRUE(mentions(v, "colour: unknown key"));
}

TEST(Config, CalibrationConstraints) {
  Workspace ws;
  EXPECT_TRUE(violations_of(ws, ws.config("[a.mqtk]", "scenarios: {}\neval: {metrics: [ppl]}\n")).empty());
  std::string text = ws.config("[a.mqtk]", "scenarios: {}\n");
  text.replace(text.find("n: 4"), 4, "n: 9");
  EXPECT_TRUE(mentions(violations_of(ws, text), "calibration.n"));
  text = ws.config("[a.mqtk]", "scenarios: {}\n");
  text.replace(text.find("{n: 4"), 1, "{mode: from_train, ");
  EXPECT_TRUE(mentions(violations_of(ws, text), "datasets[0].train"));
  EXPECT_THROW(ws.load("model: [unclosed"), ValidationError);
}

TEST(Config, BitSettingParser) {
  EXPECT_EQ(parse_bit_setting("4/8"), std::make_pair(4, 8));
  EXPECT_THROW(parse_bit_setting("4"), FormatError);
  EXPECT_THROW(parse_bit_setting("4/x"), FormatError);
}

TEST(Config, CanonicalTextIgnoresDirectories) {
  Workspace ws;
  RunConfig a = ws.load(ws.config("[a.mqtk]", "scenarios: {}\n"));
  RunConfig b = a;
  b.model_path = "/elsewhere/m.mqnt";
  EXPECT_EQ(a.canonical(), b.canonical());
  b.seed = 7;
  EXPECT_NE(a.canonical(), b.canonical());
}

TEST(Runner, SingleCellRowCount) {
  Workspace ws;
  const RunConfig cfg = ws.load(ws.config("[a.mqtk]", "scenarios: {shifts: [iid]}\neval: {metrics: [ppl]}\n"));
  const auto rows = run_matrix(cfg);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows.size(), expected_row_count(cfg, 1));
  EXPECT_EQ(rows[0].method, kBaselineMethod);
  EXPECT_EQ(rows[1].method, "rtn");
  for (const auto& r : rows) {
    EXPECT_TRUE(r.ok) << r.error;
    EXPECT_TRUE(r.iid);
    EXPECT_EQ(r.metric, MetricName::ppl);
    EXPECT_GT(r.value, 1.0);
  }
  EXPECT_NE(rows[0].provenance, rows[1].provenance);
}

TEST(Runner, FailuresStayInTheirCells) {
  Workspace ws;  // small.mqtk holds 5 "tweets" records, fewer than the reserve
  const RunConfig cfg = ws.load(ws.config("[a.mqtk, small.mqtk]", "scenarios: {}\neval: {max_items: 4}\n"));
  const auto rows = run_matrix(cfg);
  ASSERT_EQ(rows.size(), expected_row_count(cfg, 4));
  for (const auto& r : rows) {
    const bool needs_small_calib = r.method != kBaselineMethod && r.calib_id != "reviews";
    const bool needs_small_test = r.test_id != "reviews";
    if (needs_small_calib || needs_small_test) {
      EXPECT_FALSE(r.ok) << r.method << " " << r.calib_id << " -> " << r.test_id;
      EXPECT_TRUE(std::isnan(r.value));
      EXPECT_NE(r.error.find("short by"), std::string::npos) << r.error;
    } else {
      EXPECT_TRUE(r.ok) << r.error;
    }
  }
}

TEST(Runner, RowsAreInCanonicalOrder) {
  Workspace ws;
  const RunConfig cfg = ws.load(ws.config("[a.mqtk, b.mqtk]", "scenarios: {shots: [0, 1]}\neval: {max_items: 3}\n"));
  const auto rows = run_matrix(cfg);
  EXPECT_EQ(rows.size(), expected_row_count(cfg, 4));
  EXPECT_TRUE(std::is_sorted(rows.begin(), rows.end(), result_less));
  auto again = run_matrix(cfg);
  ASSERT_EQ(again.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    again[i].wall_time = rows[i].wall_time;
    EXPECT_EQ(again[i], rows[i]) << i;
  }
}

TEST(Result, Fnv1aVectors) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(Result, SortOrder) {
  std::vector<RunResult> rows(5);
  rows[0].test_id = "b";
  rows[1].test_id = "a";
  rows[1].method = "gptq";
  rows[1].w_bits = 3;
  rows[2].test_id = "a";
  rows[2].method = "gptq";
  rows[2].w_bits = 4;
  rows[3].test_id = "a";
  rows[3].method = kBaselineMethod;
  rows[4].test_id = "a";
  rows[4].method = "awq";
  sort_results(rows);
  EXPECT_EQ(rows[0].method, kBaselineMethod);
  EXPECT_EQ(rows[1].method, "awq");
  EXPECT_EQ(rows[2].w_bits, 4);
  EXPECT_EQ(rows[3].w_bits, 3);
  EXPECT_EQ(rows[4].test_id, "b");
}

RunResult cell(std::string method, int w, std::string calib, std::string test, double value, MetricName m) {
  RunResult r;
  r.method = std::move(method);
  r.w_bits = w;
  r.calib_id = std::move(calib);
  r.test_id = std::move(test);
  r.iid = r.calib_id == r.test_id;
  r.shift = r.iid ? Shift::iid : Shift::cross_dataset;
  r.value = value;
  r.metric = m;
  return r;
}

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

TEST(Report, CsvHasHeaderAndOneLinePerRow) {
  const std::vector<RunResult> rows{cell("gptq", 4, "a", "b", 0.5, MetricName::accuracy)};
  const std::string csv = emit_report(rows, ReportFormat::csv);
  EXPECT_EQ(count(csv, "\n"), 2u);
  EXPECT_EQ(csv.rfind("method,", 0), 0u);
  EXPECT_EQ(csv.find("wall_time"), std::string::npos);
  EXPECT_EQ(parse_report_format("markdown_table"), ReportFormat::markdown);
  EXPECT_THROW(parse_report_format("xml"), FormatError);
}

TEST(Report, MarkdownBoldsEveryTiedBest) {
  const std::vector<RunResult> acc{cell(kBaselineMethod, 16, "a", "t", 0.1, MetricName::accuracy),
                                   cell("gptq", 4, "a", "t", 0.2, MetricName::accuracy),
                                   cell("gptq", 3, "a", "t", 0.3, MetricName::accuracy),
                                   cell("awq", 4, "a", "t", 0.3, MetricName::accuracy)};
  const std::string md = emit_report(acc, ReportFormat::markdown);
  EXPECT_EQ(count(md, "**30.00**"), 2u) << md;
  EXPECT_EQ(count(md, "**"), 4u);
  // Single calibration source: one row per method, one column per test set.
  EXPECT_NE(md.find("### calibration a, 0-shot, accuracy"), std::string::npos) << md;
  EXPECT_NE(md.find("| method | W/A | t |"), std::string::npos) << md;

  std::vector<RunResult> ppl{cell("gptq", 4, "a", "t", 9.0, MetricName::ppl),
                             cell("gptq", 3, "a", "t", 12.0, MetricName::ppl)};
  EXPECT_NE(emit_report(ppl, ReportFormat::markdown).find("**9.00**"), std::string::npos);
  ppl[0].ok = false;
  ppl[0].value = std::nan("");
  const std::string failed = emit_report(ppl, ReportFormat::markdown);
  EXPECT_NE(failed.find("| - |"), std::string::npos) << failed;
  EXPECT_NE(failed.find("**12.00**"), std::string::npos) << failed;
}

TEST(Report, CompositionPerplexityTableLayout) {
  // One calibration corpus, two methods at three bit settings plus the
  // baseline, three test corpora.
  std::vector<RunResult> rows;
  const std::vector<std::string> tests{"ptb", "wiki", "web"};
  for (const auto& t : tests) rows.push_back(cell(kBaselineMethod, 16, "web", t, 5.0, MetricName::ppl));
  for (const char* m : {"smoothquant", "smoothquant_gptq"}) {
    for (int w : {8, 4, 3}) {
      for (const auto& t : tests) {
        RunResult r = cell(m, w, "web", t, 10.0 * (9 - w) + (m[11] ? 0.0 : 1.0), MetricName::ppl);
        r.a_bits = 8;
        rows.push_back(r);
      }
    }
  }
  sort_results(rows);
  const std::string md = emit_report(rows, ReportFormat::markdown);
  EXPECT_EQ(count(md, "### "), 1u) << md;
  EXPECT_NE(md.find("| method | W/A | ptb | web | wiki |\n| --- | --- | --- | --- | --- |\n"
                    "| baseline | 16/16 | **5.00** | **5.00** | **5.00** |\n"
                    "| smoothquant | 8/8 | 11.00 | 11.00 | 11.00 |\n"),
            std::string::npos)
      << md;
  EXPECT_NE(md.find("| smoothquant_gptq | 3/8 | 60.00 | 60.00 | 60.00 |\n"), std::string::npos) << md;
  EXPECT_EQ(count(md, "\n| "), 9u);  // header, rule, 7 method rows
}

TEST(Report, CrossCalibrationGridMarksIid) {
  std::vector<RunResult> rows;
  for (const char* c : {"x", "y"})
    for (const char* t : {"x", "y"}) rows.push_back(cell("gptq", 4, c, t, std::string(c) == t ? 0.9 : 0.5, MetricName::accuracy));
  const std::string md = emit_report(rows, ReportFormat::markdown);
  EXPECT_NE(md.find("| test \\ calibration | x | y |"), std::string::npos) << md;
  EXPECT_EQ(count(md, "(iid)"), 2u);
  EXPECT_NE(md.find("| x | **90.00** (iid) | 50.00 |"), std::string::npos) << md;
}

}  // namespace
}  // namespace mqnt
