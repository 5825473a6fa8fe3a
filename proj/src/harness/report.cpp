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

#include "mqnt/harness/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <tuple>

#include "mqnt/errors.hpp"
#include "mqnt/io/results_file.hpp"

namespace mqnt {

std::string_view to_string(ReportFormat f) {
  switch (f) {
    case ReportFormat::csv: return "csv";
    case ReportFormat::json: return "json";
    case ReportFormat::markdown: return "markdown";
  }
  return "?";
}

ReportFormat parse_report_format(std::string_view s) {
  if (s == "csv") return ReportFormat::csv;
  if (s == "json") return ReportFormat::json;
  if (s == "markdown" || s == "markdown_table" || s == "md") return ReportFormat::markdown;
  throw FormatError("unknown report format '" + std::string(s) + "'");
}

namespace {

std::string format_value(const RunResult& r) {
  if (!r.ok || std::isnan(r.value)) return "-";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", r.metric == MetricName::accuracy ? 100.0 * r.value : r.value);
  return buf;
}

bool better(MetricName m, double a, double b) { return m == MetricName::ppl ? a < b : a > b; }

// Bold flags for the cells of one row or column: every cell equal to the best.
std::vector<bool> best_cells(const std::vector<const RunResult*>& cells) {
  std::optional<double> best;
  MetricName metric = MetricName::accuracy;
  for (const RunResult* c : cells) {
    if (!c || !c->ok || std::isnan(c->value)) continue;
    metric = c->metric;
    if (!best || better(metric, c->value, *best)) best = c->value;
  }
  std::vector<bool> out(cells.size(), false);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const RunResult* c = cells[i];
    out[i] = best && c && c->ok && c->value == *best;
  }
  return out;
}

std::string cell_text(const RunResult* r, bool bold, bool mark_iid) {
  if (!r) return "";
  std::string v = format_value(*r);
  if (bold) v = "**" + v + "**";
  if (mark_iid && r->iid) v += " (iid)";
  return v;
}

std::string bits_label(const RunResult& r) { return std::to_string(r.w_bits) + "/" + std::to_string(r.a_bits); }

using GroupKey = std::tuple<bool, std::string, int, int, std::size_t, int>;

GroupKey group_key(const RunResult& r) {
  return {r.method != kBaselineMethod, r.method, -r.w_bits, -r.a_bits, r.shots, static_cast<int>(r.metric)};
}

void table_row(std::string& out, const std::vector<std::string>& cells) {
  out += "|";
  for (const auto& c : cells) out += " " + c + " |";
  out += "\n";
}

// Test rows x calibration columns per (method, bits, shots, metric).
std::string pivot_by_calibration(std::span<const RunResult> results) {
  std::set<std::string> calibs, tests;
  std::map<GroupKey, std::map<std::pair<std::string, std::string>, const RunResult*>> groups;
  for (const auto& r : results) {
    calibs.insert(r.calib_id);
    tests.insert(r.test_id);
    groups[group_key(r)][{r.test_id, r.calib_id}] = &r;
  }
  std::string out;
  for (const auto& [key, cells] : groups) {
    const RunResult& any = *cells.begin()->second;
    out += "### " + any.method + " " + bits_label(any) + ", " + std::to_string(any.shots) + "-shot, " +
           std::string(to_string(any.metric)) + "\n\n";
    std::vector<std::string> head{"test \\ calibration"};
    head.insert(head.end(), calibs.begin(), calibs.end());
    table_row(out, head);
    table_row(out, std::vector<std::string>(head.size(), "---"));
    for (const auto& t : tests) {
      std::vector<const RunResult*> row;
      for (const auto& c : calibs) {
        const auto it = cells.find({t, c});
        row.push_back(it == cells.end() ? nullptr : it->second);
      }
      const auto bold = best_cells(row);
      std::vector<std::string> line{t};
      for (std::size_t i = 0; i < row.size(); ++i) line.push_back(cell_text(row[i], bold[i], true));
      table_row(out, line);
    }
    out += "\n";
  }
  return out;
}

// Method/bits rows x test columns per (shots, metric), for a single calibration source.
std::string pivot_by_test(std::span<const RunResult> results) {
  std::set<std::string> tests;
  using RowKey = std::tuple<bool, std::string, int, int>;
  std::map<std::pair<std::size_t, int>, std::map<RowKey, std::map<std::string, const RunResult*>>> tables;
  for (const auto& r : results) {
    tests.insert(r.test_id);
    tables[{r.shots, static_cast<int>(r.metric)}][{r.method != kBaselineMethod, r.method, -r.w_bits, -r.a_bits}]
          [r.test_id] = &r;
  }
  std::string out;
  for (const auto& [key, rows] : tables) {
    const RunResult& any = *rows.begin()->second.begin()->second;
    out += "### calibration " + any.calib_id + ", " + std::to_string(key.first) + "-shot, " +
           std::string(to_string(any.metric)) + "\n\n";
    std::vector<std::string> head{"method", "W/A"};
    head.insert(head.end(), tests.begin(), tests.end());
    table_row(out, head);
    table_row(out, std::vector<std::string>(head.size(), "---"));
    std::map<std::string, std::vector<bool>> bold;
    for (const auto& t : tests) {
      std::vector<const RunResult*> col;
      for (const auto& [rk, cells] : rows) {
        const auto it = cells.find(t);
        col.push_back(it == cells.end() ? nullptr : it->second);
      }
      bold[t] = best_cells(col);
    }
    std::size_t i = 0;
    for (const auto& [rk, cells] : rows) {
      const RunResult& first = *cells.begin()->second;
      std::vector<std::string> line{first.method, bits_label(first)};
      for (const auto& t : tests) {
        const auto it = cells.find(t);
        line.push_back(cell_text(it == cells.end() ? nullptr : it->second, bold[t][i], false));
      }
      table_row(out, line);
      ++i;
    }
    out += "\n";
  }
  return out;
}

}  // namespace

std::string emit_report(std::span<const RunResult> results, ReportFormat format) {
  switch (format) {
    case ReportFormat::csv: return results_to_csv(results, false);
    case ReportFormat::json: return results_to_json(results, false);
    case ReportFormat::markdown: {
      std::set<std::string> calibs;
      for (const auto& r : results) calibs.insert(r.calib_id);
      return calibs.size() <= 1 ? pivot_by_test(results) : pivot_by_calibration(results);
    }
  }
  return {};
}

}  // namespace mqnt
