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

#include "mqnt/io/results_file.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cinttypes>

#include <json.hpp>

#include "mqnt/errors.hpp"
#include "mqnt/io/byte_io.hpp"

namespace mqnt {

namespace {

constexpr std::string_view kSchemaPrefix = "# mqnt-results v";

const std::vector<std::string> kColumns = {"method", "w_bits", "a_bits", "calib", "test",   "shift",      "iid",
                                           "shots",  "metric", "value",  "n_items", "status", "error", "provenance"};

std::string real(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::vector<std::string> row_fields(const RunResult& r, bool wall) {
  std::vector<std::string> f = {r.method,
                                std::to_string(r.w_bits),
                                std::to_string(r.a_bits),
                                r.calib_id,
                                r.test_id,
                                std::string(to_string(r.shift)),
                                r.iid ? "1" : "0",
                                std::to_string(r.shots),
                                std::string(to_string(r.metric)),
                                real(r.value),
                                std::to_string(r.n_items),
                                r.ok ? "ok" : "failed",
                                r.error,
                                hex64(r.provenance)};
  if (wall) f.push_back(real(r.wall_time));
  return f;
}

// RFC 4180 style records; quoted fields may span lines.
std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n') {
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else if (c != '\r') {
      field += c;
      any = true;
    }
  }
  if (quoted) throw FormatError("results: unterminated quoted field");
  if (any) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <class T>
T parse_number(const std::string& s, const char* what) {
  T v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) throw FormatError(std::string("results: bad ") + what + " '" + s + "'");
  return v;
}

double parse_real(const std::string& s, const char* what) {
  if (s == "nan") return std::nan("");
  return parse_number<double>(s, what);
}

}  // namespace

std::string results_to_csv(std::span<const RunResult> results, bool include_wall_time) {
  std::string out;
  for (std::size_t i = 0; i < kColumns.size(); ++i) out += (i ? "," : "") + kColumns[i];
  if (include_wall_time) out += ",wall_time";
  out += '\n';
  for (const auto& r : results) {
    const auto f = row_fields(r, include_wall_time);
    for (std::size_t i = 0; i < f.size(); ++i) out += (i ? "," : "") + csv_field(f[i]);
    out += '\n';
  }
  return out;
}

std::string results_to_json(std::span<const RunResult> results, bool include_wall_time) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    nlohmann::ordered_json j;
    j["method"] = r.method;
    j["w_bits"] = r.w_bits;
    j["a_bits"] = r.a_bits;
    j["calib"] = r.calib_id;
    j["test"] = r.test_id;
    j["shift"] = to_string(r.shift);
    j["iid"] = r.iid;
    j["shots"] = r.shots;
    j["metric"] = to_string(r.metric);
    j["value"] = std::isnan(r.value) ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(r.value);
    j["n_items"] = r.n_items;
    j["status"] = r.ok ? "ok" : "failed";
    j["error"] = r.error;
    j["provenance"] = hex64(r.provenance);
    if (include_wall_time) j["wall_time"] = r.wall_time;
    rows.push_back(std::move(j));
  }
  nlohmann::ordered_json doc;
  doc["schema_version"] = kResultsSchemaVersion;
  doc["results"] = std::move(rows);
  return doc.dump(2) + "\n";
}

std::string results_file_text(std::span<const RunResult> results) {
  return std::string(kSchemaPrefix) + std::to_string(kResultsSchemaVersion) + "\n" + results_to_csv(results, true);
}

std::vector<RunResult> parse_results_file(std::string_view text) {
  const std::size_t eol = text.find('\n');
  const std::string_view first = text.substr(0, eol);
  if (!first.starts_with(kSchemaPrefix)) throw FormatError("results: missing schema line");
  const std::string ver(first.substr(kSchemaPrefix.size()));
  if (ver != std::to_string(kResultsSchemaVersion)) {
    throw VersionError("results schema version " + ver + ", this build reads " + std::to_string(kResultsSchemaVersion));
  }
  auto rows = parse_csv(eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1));
  if (rows.empty()) throw FormatError("results: missing header row");
  std::vector<std::string> header = kColumns;
  header.push_back("wall_time");
  if (rows.front() != header) throw FormatError("results: unexpected header row");
  std::vector<RunResult> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i];
    if (f.size() != header.size()) throw FormatError("results: row " + std::to_string(i) + " has " + std::to_string(f.size()) + " fields");
    RunResult r;
    r.method = f[0];
    r.w_bits = parse_number<int>(f[1], "w_bits");
    r.a_bits = parse_number<int>(f[2], "a_bits");
    r.calib_id = f[3];
    r.test_id = f[4];
    r.shift = parse_shift(f[5]);
    r.iid = f[6] == "1";
    r.shots = parse_number<std::size_t>(f[7], "shots");
    r.metric = parse_metric(f[8]);
    r.value = parse_real(f[9], "value");
    r.n_items = parse_number<std::size_t>(f[10], "n_items");
    if (f[11] != "ok" && f[11] != "failed") throw FormatError("results: bad status '" + f[11] + "'");
    r.ok = f[11] == "ok";
    r.error = f[12];
    std::uint64_t prov = 0;
    const auto res = std::from_chars(f[13].data(), f[13].data() + f[13].size(), prov, 16);
    if (res.ec != std::errc{} || res.ptr != f[13].data() + f[13].size()) throw FormatError("results: bad provenance");
    r.provenance = prov;
    r.wall_time = parse_real(f[14], "wall_time");
    out.push_back(std::move(r));
  }
  return out;
}

void write_results(const std::filesystem::path& path, std::span<const RunResult> results) {
  write_file_atomic(path, results_file_text(results));
}

std::vector<RunResult> read_results(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return parse_results_file(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

}  // namespace mqnt
