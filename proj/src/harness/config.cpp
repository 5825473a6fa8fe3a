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

#include "mqnt/harness/config.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "mqnt/errors.hpp"

namespace mqnt {

std::pair<int, int> parse_bit_setting(std::string_view s) {
  const std::size_t slash = s.find('/');
  int w = 0, a = 0;
  const auto ok = [](std::string_view part, int& out) {
    const auto r = std::from_chars(part.data(), part.data() + part.size(), out);
    return r.ec == std::errc{} && r.ptr == part.data() + part.size();
  };
  if (slash == std::string_view::npos || !ok(s.substr(0, slash), w) || !ok(s.substr(slash + 1), a)) {
    throw FormatError("bit setting '" + std::string(s) + "' is not of the form W/A");
  }
  return {w, a};
}

namespace {

// Collects violations with their YAML location instead of stopping at the first.
class Checker {
 public:
  void fail(const std::string& where, const std::string& what) { errors_.push_back(where + ": " + what); }
  const std::vector<std::string>& errors() const { return errors_; }

  void known_keys(const YAML::Node& map, const std::string& where, std::initializer_list<const char*> keys) {
    if (!map.IsMap()) {
      fail(where, "expected a mapping");
      return;
    }
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& kv : map) {
      const auto k = kv.first.as<std::string>();
      if (!allowed.contains(k)) fail(where.empty() ? k : where + "." + k, "unknown key");
    }
  }

  template <class T>
  std::optional<T> scalar(const YAML::Node& n, const std::string& where) {
    if (!n.IsScalar()) {
      fail(where, "expected a scalar");
      return std::nullopt;
    }
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      fail(where, "cannot read '" + n.Scalar() + "'");
      return std::nullopt;
    }
  }

  // Parses an enum via a throwing parser, reporting its message.
  template <class F>
  auto parsed(const YAML::Node& n, const std::string& where, F parse) -> std::optional<decltype(parse(""))> {
    const auto s = scalar<std::string>(n, where);
    if (!s) return std::nullopt;
    try {
      return parse(*s);
    } catch (const Error& e) {
      fail(where, e.what());
      return std::nullopt;
    }
  }

 private:
  std::vector<std::string> errors_;
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

void require_file(Checker& c, const std::filesystem::path& p, const std::string& where) {
  if (!std::filesystem::is_regular_file(p)) c.fail(where, "file not found: " + p.string());
}

void read_method(Checker& c, const YAML::Node& m, const std::string& where, RunConfig& cfg) {
  c.known_keys(m, where,
               {"name", "bits", "group_size", "scheme", "sequential_mode", "damping", "outlier_threshold",
                "outlier_cap_fraction", "awq_grid_points", "smooth_alpha"});
  if (!m.IsMap()) return;
  MethodSpec base;
  bool good = true;
  if (!m["name"]) {
    c.fail(where + ".name", "required");
    good = false;
  } else if (auto v = c.parsed(m["name"], where + ".name", parse_method)) {
    base.method = *v;
  } else {
    good = false;
  }
  const auto set = [&](const char* key, auto& field) {
    if (!m[key]) return;
    using T = std::remove_reference_t<decltype(field)>;
    if (auto v = c.scalar<T>(m[key], where + "." + key)) {
      field = *v;
    } else {
      good = false;
    }
  };
  set("group_size", base.cfg.group_size);
  set("damping", base.params.damping);
  set("outlier_threshold", base.params.outlier_threshold);
  set("outlier_cap_fraction", base.params.outlier_cap_fraction);
  set("awq_grid_points", base.params.awq_grid_points);
  set("smooth_alpha", base.params.smooth_alpha);
  if (m["scheme"]) {
    if (auto v = c.parsed(m["scheme"], where + ".scheme", parse_scheme)) base.cfg.scheme = *v;
  }
  if (m["sequential_mode"]) {
    if (auto v = c.parsed(m["sequential_mode"], where + ".sequential_mode", parse_sequential_mode)) {
      base.cfg.sequential_mode = *v;
    }
  }
  const YAML::Node bits = m["bits"];
  if (!bits || !bits.IsSequence() || bits.size() == 0) {
    c.fail(where + ".bits", "expected a nonempty list of W/A settings such as \"4/16\"");
    return;
  }
  for (std::size_t i = 0; i < bits.size(); ++i) {
    const std::string at = where + ".bits[" + std::to_string(i) + "]";
    const auto wa = c.parsed(bits[i], at, parse_bit_setting);
    if (!wa) continue;
    MethodSpec spec = base;
    spec.cfg.w_bits = wa->first;
    spec.cfg.a_bits = wa->second;
    try {
      spec.validate();
    } catch (const Error& e) {
      c.fail(at, e.what());
      continue;
    }
    if (good) cfg.methods.push_back(spec);
  }
  if (good) {
    try {
      base.validate();
    } catch (const Error& e) {
      // Bit settings were checked above; report only the remaining fields.
      if (std::string(e.what()).find("bits") == std::string::npos) c.fail(where, e.what());
    }
  }
}

template <class T, class F>
std::vector<T> read_list(Checker& c, const YAML::Node& n, const std::string& where, F parse) {
  std::vector<T> out;
  if (!n.IsSequence()) {
    c.fail(where, "expected a list");
    return out;
  }
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (auto v = parse(n[i], where + "[" + std::to_string(i) + "]")) out.push_back(*v);
  }
  return out;
}

}  // namespace

RunConfig validate_config(std::string_view text, const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ValidationError({std::string("config is not valid YAML: ") + e.what()});
  }
  Checker c;
  RunConfig cfg;
  c.known_keys(root, "", {"model", "datasets", "methods", "scenarios", "calibration", "eval", "limits", "output_dir", "seed"});
  if (!root.IsMap()) throw ValidationError(c.errors());

  if (root["seed"]) {
    if (auto v = c.scalar<std::uint64_t>(root["seed"], "seed")) cfg.seed = *v;
  }
  cfg.calibration.seed = cfg.seed;

  if (!root["model"]) {
    c.fail("model", "required");
  } else if (auto v = c.scalar<std::string>(root["model"], "model")) {
    cfg.model_path = resolve(base_dir, *v);
    require_file(c, cfg.model_path, "model");
  }

  if (!root["datasets"] || !root["datasets"].IsSequence() || root["datasets"].size() == 0) {
    c.fail("datasets", "expected a nonempty list");
  } else {
    const YAML::Node ds = root["datasets"];
    for (std::size_t i = 0; i < ds.size(); ++i) {
      const std::string at = "datasets[" + std::to_string(i) + "]";
      DatasetEntry e;
      if (ds[i].IsScalar()) {
        e.path = resolve(base_dir, ds[i].as<std::string>());
      } else {
        c.known_keys(ds[i], at, {"path", "train"});
        if (!ds[i].IsMap() || !ds[i]["path"]) {
          c.fail(at + ".path", "required");
          continue;
        }
        if (auto p = c.scalar<std::string>(ds[i]["path"], at + ".path")) e.path = resolve(base_dir, *p);
        if (ds[i]["train"]) {
          if (auto p = c.scalar<std::string>(ds[i]["train"], at + ".train")) e.train = resolve(base_dir, *p);
        }
      }
      require_file(c, e.path, at);
      if (e.train) require_file(c, *e.train, at + ".train");
      cfg.datasets.push_back(e);
    }
  }

  if (!root["methods"] || !root["methods"].IsSequence() || root["methods"].size() == 0) {
    c.fail("methods", "expected a nonempty list");
  } else {
    for (std::size_t i = 0; i < root["methods"].size(); ++i) {
      read_method(c, root["methods"][i], "methods[" + std::to_string(i) + "]", cfg);
    }
  }

  if (!root["scenarios"]) {
    c.fail("scenarios", "required");
  } else {
    const YAML::Node s = root["scenarios"];
    c.known_keys(s, "scenarios", {"shifts", "shots"});
    if (s.IsMap()) {
      if (s["shifts"]) {
        cfg.shifts = read_list<Shift>(c, s["shifts"], "scenarios.shifts", [&](const YAML::Node& n, const std::string& w) {
          return c.parsed(n, w, parse_shift);
        });
        if (s["shifts"].IsSequence() && s["shifts"].size() == 0) c.fail("scenarios.shifts", "expected at least one shift kind");
      }
      if (s["shots"]) {
        cfg.shots = read_list<std::size_t>(c, s["shots"], "scenarios.shots", [&](const YAML::Node& n, const std::string& w) {
          return c.scalar<std::size_t>(n, w);
        });
        if (s["shots"].IsSequence() && s["shots"].size() == 0) c.fail("scenarios.shots", "expected at least one shot count");
      }
    }
  }

  if (root["calibration"]) {
    const YAML::Node k = root["calibration"];
    c.known_keys(k, "calibration", {"mode", "n", "reserve", "seed", "max_tokens"});
    if (k.IsMap()) {
      if (k["mode"]) {
        if (auto v = c.parsed(k["mode"], "calibration.mode", parse_calibration_mode)) cfg.calibration.mode = *v;
      }
      if (k["n"]) {
        if (auto v = c.scalar<std::size_t>(k["n"], "calibration.n")) cfg.calibration.n = *v;
      }
      if (k["reserve"]) {
        if (auto v = c.scalar<std::size_t>(k["reserve"], "calibration.reserve")) cfg.calibration.reserve = *v;
      }
      if (k["seed"]) {
        if (auto v = c.scalar<std::uint64_t>(k["seed"], "calibration.seed")) cfg.calibration.seed = *v;
      }
      if (k["max_tokens"]) {
        if (auto v = c.scalar<std::size_t>(k["max_tokens"], "calibration.max_tokens")) cfg.calibration.max_tokens = *v;
      }
      if (cfg.calibration.mode == CalibrationMode::carve_from_test && cfg.calibration.n > cfg.calibration.reserve) {
        c.fail("calibration.n", "must not exceed calibration.reserve");
      }
    }
  }
  if (cfg.calibration.mode == CalibrationMode::from_train) {
    for (std::size_t i = 0; i < cfg.datasets.size(); ++i) {
      if (!cfg.datasets[i].train) c.fail("datasets[" + std::to_string(i) + "].train", "required by calibration.mode from_train");
    }
  }

  if (root["eval"]) {
    const YAML::Node e = root["eval"];
    c.known_keys(e, "eval", {"metrics", "normalization", "context_len", "max_items"});
    if (e.IsMap()) {
      if (e["metrics"]) {
        cfg.eval.metrics = read_list<MetricName>(c, e["metrics"], "eval.metrics", [&](const YAML::Node& n, const std::string& w) {
          return c.parsed(n, w, parse_metric);
        });
        if (e["metrics"].IsSequence() && e["metrics"].size() == 0) c.fail("eval.metrics", "expected at least one metric");
      }
      if (e["normalization"]) {
        if (auto v = c.parsed(e["normalization"], "eval.normalization", parse_normalization)) cfg.eval.normalization = *v;
      }
      if (e["context_len"]) {
        if (auto v = c.scalar<std::size_t>(e["context_len"], "eval.context_len")) cfg.eval.context_len = *v;
      }
      if (e["max_items"]) {
        if (auto v = c.scalar<std::size_t>(e["max_items"], "eval.max_items")) cfg.eval.max_items = *v;
      }
    }
  }

  if (root["limits"]) {
    const YAML::Node l = root["limits"];
    c.known_keys(l, "limits", {"max_calibration_tokens"});
    if (l.IsMap() && l["max_calibration_tokens"]) {
      if (auto v = c.scalar<std::size_t>(l["max_calibration_tokens"], "limits.max_calibration_tokens")) {
        cfg.max_calibration_tokens = *v;
      }
    }
  }

  if (root["output_dir"]) {
    if (auto v = c.scalar<std::string>(root["output_dir"], "output_dir")) cfg.output_dir = resolve(base_dir, *v);
  } else {
    cfg.output_dir = resolve(base_dir, "out");
  }

  if (!c.errors().empty()) throw ValidationError(c.errors());
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError({"config file not found: " + path.string()});
  std::stringstream ss;
  ss << in.rdbuf();
  return validate_config(ss.str(), path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

std::string RunConfig::canonical() const {
  std::ostringstream o;
  o << std::setprecision(17);
  o << "model=" << model_path.filename().string() << "\n";
  for (const auto& d : datasets) {
    o << "dataset=" << d.path.filename().string();
    if (d.train) o << " train=" << d.train->filename().string();
    o << "\n";
  }
  for (const auto& m : methods) {
    o << "method=" << to_string(m.method) << " w=" << m.cfg.w_bits << " a=" << m.cfg.a_bits
      << " group=" << m.cfg.group_size << " scheme=" << to_string(m.cfg.scheme)
      << " mode=" << to_string(m.cfg.sequential_mode) << " damping=" << m.params.damping
      << " threshold=" << m.params.outlier_threshold << " cap=" << m.params.outlier_cap_fraction
      << " grid=" << m.params.awq_grid_points << " alpha=" << m.params.smooth_alpha << "\n";
  }
  o << "shifts=";
  for (auto s : shifts) o << to_string(s) << ",";
  o << "\nshots=";
  for (auto s : shots) o << s << ",";
  o << "\ncalibration=" << to_string(calibration.mode) << " n=" << calibration.n << " reserve=" << calibration.reserve
    << " seed=" << calibration.seed << " max_tokens=" << calibration.max_tokens << "\n";
  o << "metrics=";
  for (auto m : eval.metrics) o << to_string(m) << ",";
  o << "\nnormalization=" << to_string(eval.normalization) << " context_len=" << eval.context_len
    << " max_items=" << eval.max_items << "\n";
  o << "max_calibration_tokens=" << max_calibration_tokens << "\nseed=" << seed << "\n";
  return o.str();
}

}  // namespace mqnt
