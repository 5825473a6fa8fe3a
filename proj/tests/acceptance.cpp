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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails or overruns its time budget. Pass criterion numbers as
// arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "mqnt/calib/calibration.hpp"
#include "mqnt/calib/scenario.hpp"
#include "mqnt/errors.hpp"
#include "mqnt/eval/metrics.hpp"
#include "mqnt/eval/template.hpp"
#include "mqnt/harness/config.hpp"
#include "mqnt/harness/report.hpp"
#include "mqnt/harness/runner.hpp"
#include "mqnt/io/corpus_file.hpp"
#include "mqnt/io/model_file.hpp"
#include "mqnt/io/results_file.hpp"
#include "mqnt/numerics/kernels.hpp"
#include "mqnt/numerics/linalg.hpp"
#include "mqnt/quant/packing.hpp"
#include "mqnt/quant/rtn.hpp"
#include "mqnt/quantizers/compose.hpp"
#include "mqnt/quantizers/gptq.hpp"
#include "mqnt/quantizers/hessian.hpp"
#include "mqnt/quantizers/smoothquant.hpp"
#include "mqnt/quantizers/spqr.hpp"
#include "test_util.hpp"

namespace mqnt {
namespace {

using testing::random_matrix;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failures; the first few are kept for the report line.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) notes_ += (notes_.empty() ? "" : "; ") + what;
  }
  Outcome outcome(std::string summary) const {
    if (failures_ > 0) summary += " | " + std::to_string(failures_) + " failure(s): " + notes_;
    return {failures_ == 0, summary};
  }

 private:
  int failures_ = 0;
  std::string notes_;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

MethodSpec spec_for(Method m, int w_bits, int a_bits = 16, std::size_t group = 128) {
  MethodSpec s;
  s.method = m;
  s.cfg.w_bits = w_bits;
  s.cfg.a_bits = a_bits;
  s.cfg.group_size = group;
  return s;
}

double trace_oracle(const Matrix& w, const Matrix& v, const Matrix& h) {
  double total = 0;
  for (std::size_t r = 0; r < w.rows(); ++r)
    for (std::size_t i = 0; i < w.cols(); ++i)
      for (std::size_t j = 0; j < w.cols(); ++j) total += (w(r, i) - v(r, i)) * h(i, j) * (w(r, j) - v(r, j));
  return total;
}

double output_mse_oracle(const Matrix& w, const Matrix& v, const Matrix& x) {
  double total = 0;
  for (std::size_t t = 0; t < x.rows(); ++t) {
    for (std::size_t r = 0; r < w.rows(); ++r) {
      double d = 0;
      for (std::size_t i = 0; i < w.cols(); ++i) d += x(t, i) * (w(r, i) - v(r, i));
      total += d * d;
    }
  }
  return total / static_cast<double>(x.rows() * w.rows());
}

// 1. Pack/unpack round trip and the half-step bound.
Outcome grid_correctness() {
  Check c;
  SplitMix64 rng(101);
  std::size_t groups = 0;
  for (int bits : {2, 3, 4, 8}) {
    std::size_t done = 0;
    while (done < 10000) {
      const std::size_t rows = 1 + rng.uniform_below(4);
      const std::size_t cols = 1 + rng.uniform_below(96);
      QuantConfig cfg;
      cfg.w_bits = bits;
      cfg.group_size = 1 + rng.uniform_below(40);  // mostly not byte aligned
      cfg.scheme = rng.uniform_below(2) ? Scheme::symmetric : Scheme::asymmetric;
      const Matrix w = random_matrix(rows, cols, rng, 0.01 + 5 * rng.uniform01());
      const QuantizedTensor q = rtn_quantize(w, cfg);
      const std::vector<std::uint32_t> codes = q.unpack();

      // Independent route: fit and round each group directly.
      std::vector<std::uint32_t> want;
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t g = 0; g < q.groups_per_row(); ++g) {
          const std::size_t lo = g * cfg.group_size, hi = std::min(cols, lo + cfg.group_size);
          std::vector<double> vals(hi - lo);
          for (std::size_t j = lo; j < hi; ++j) vals[j - lo] = w(r, j);
          const GroupParams p = fit_group(vals, bits, cfg.scheme);
          c.expect(p == q.params(r, g), "params differ");
          const double glo = grid_min(p, bits, cfg.scheme), ghi = grid_max(p, bits, cfg.scheme);
          for (double x : vals) {
            const std::uint32_t code = quantize_value(x, p, bits, cfg.scheme);
            want.push_back(code);
            const double err = std::abs(dequantize_value(code, p, bits, cfg.scheme) - x);
            if (x >= glo && x <= ghi) {
              c.expect(err <= 0.5 * p.scale * (1 + 1e-12), fmt("half-step bound: err %.3g scale %.3g", err, p.scale));
            }
          }
          ++done;
        }
      }
      c.expect(codes == want, "unpacked codes differ from direct rounding");
      const QuantizedTensor rebuilt =
          QuantizedTensor::from_codes(rows, cols, bits, cfg.group_size, cfg.scheme, codes, q.params());
      c.expect(rebuilt.packed() == q.packed(), "repacked bytes differ");

      // Raw stream round trip with arbitrary codes of the full range.
      std::vector<std::uint32_t> raw(1 + rng.uniform_below(70));
      for (auto& v : raw) v = static_cast<std::uint32_t>(rng.uniform_below(max_code(bits) + 1));
      c.expect(unpack_codes(pack_codes(raw, bits), bits, raw.size()) == raw, "raw pack round trip");
    }
    groups += done;
  }
  return c.outcome(std::to_string(groups) + " groups over bits {2,3,4,8}");
}

// Hessian of inputs with a random covariance: X = Z A, H = X^T X / T + ridge.
Matrix random_covariance_spd(std::size_t n, SplitMix64& rng) {
  const Matrix x = kernels::serial::gemm(random_matrix(4 * n, n, rng), random_matrix(n, n, rng));
  Matrix h = kernels::serial::gram(x);
  for (double& v : h.values()) v /= static_cast<double>(4 * n);
  for (std::size_t i = 0; i < n; ++i) h(i, i) += 1e-3;
  return h;
}

// 2. GPTQ proxy loss at or below RTN.
Outcome gptq_dominance() {
  Check c;
  SplitMix64 rng(202);
  std::string summary;
  for (int bits : {2, 3, 4}) {
    int wins = 0;
    for (int t = 0; t < 100; ++t) {
      const Matrix w = random_matrix(8, 16, rng);
      const Matrix h = random_covariance_spd(16, rng);
      const MethodSpec s = spec_for(Method::gptq, bits);
      const LayerResult g = gptq_quantize_layer(w, h, s);
      const Matrix hd = damp_diagonal(h, s.params.damping);
      const double lg = trace_oracle(w, dequantize(g.tensor), hd);
      const double lr = trace_oracle(w, dequantize(rtn_quantize(w, s.cfg)), hd);
      c.expect(std::abs(g.report.proxy_loss - lg) <= 1e-9 * (1 + lg), "reported proxy loss disagrees with oracle");
      wins += lg <= lr;
    }
    c.expect(wins >= 95, "bits " + std::to_string(bits) + ": " + std::to_string(wins) + "/100");
    summary += "W" + std::to_string(bits) + " " + std::to_string(wins) + "/100 ";
  }
  return c.outcome(summary + "(need >= 95)");
}

// 3. GPTQ with an identity Hessian is RTN.
Outcome identity_reduction() {
  Check c;
  SplitMix64 rng(303);
  for (int t = 0; t < 100; ++t) {
    const std::size_t rows = 1 + rng.uniform_below(12), cols = 1 + rng.uniform_below(48);
    const int bits = std::vector<int>{2, 3, 4, 8}[rng.uniform_below(4)];
    MethodSpec s = spec_for(Method::gptq, bits, 16, 1 + rng.uniform_below(32));
    s.cfg.scheme = rng.uniform_below(2) ? Scheme::symmetric : Scheme::asymmetric;
    const Matrix w = random_matrix(rows, cols, rng, 0.1 + 3 * rng.uniform01());
    c.expect(gptq_quantize_layer(w, Matrix::identity(cols), s).tensor == rtn_quantize(w, s.cfg),
             "layer " + std::to_string(t) + " differs");
  }
  return c.outcome("100 layers bit-identical");
}

// 4. SpQR with planted outliers.
Outcome spqr_outliers() {
  Check c;
  SplitMix64 rng(404);
  int wins = 0;
  std::size_t max_kept = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t rows = 16, cols = 32;
    Matrix w = random_matrix(rows, cols, rng);
    const std::size_t planted = static_cast<std::size_t>(std::lround(0.02 * rows * cols));
    for (std::size_t i : partial_shuffle(rows * cols, planted, 1000 + t)) w.values()[i] *= 50.0;
    const Matrix x = random_matrix(128, cols, rng);
    const Matrix h = accumulate_hessian(x);
    MethodSpec s = spec_for(Method::spqr, 3);
    s.params.outlier_cap_fraction = 0.02;
    const LayerResult sp = spqr_quantize_layer(w, h, s);
    const LayerResult gp = gptq_quantize_layer(w, h, s);
    const double ms = output_mse_oracle(w, dequantize(sp.tensor), x);
    const double mg = output_mse_oracle(w, dequantize(gp.tensor), x);
    wins += ms <= mg;
    const auto cap = static_cast<std::size_t>(std::ceil(s.params.outlier_cap_fraction * rows * cols));
    c.expect(sp.tensor.outliers().size() <= cap, "cap exceeded");
    max_kept = std::max(max_kept, sp.tensor.outliers().size());
  }
  c.expect(wins >= 90, std::to_string(wins) + "/100 wins");
  return c.outcome(std::to_string(wins) + "/100 trials SpQR MSE <= GPTQ (need >= 90), max outliers kept " +
                   std::to_string(max_kept) + " of cap 11");
}

double rel_error(const Matrix& got, const Matrix& want) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < want.size(); ++i) {
    const double d = got.values()[i] - want.values()[i];
    num += d * d;
    den += want.values()[i] * want.values()[i];
  }
  return std::sqrt(num / std::max(den, 1e-300));
}

// 5. Smoothing without quantization leaves layer outputs unchanged.
Outcome smoothing_invariance() {
  Check c;
  SplitMix64 rng(505);
  double worst = 0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t out = 1 + rng.uniform_below(24), in = 1 + rng.uniform_below(48);
    const Matrix w = random_matrix(out, in, rng);
    Matrix x = random_matrix(32, in, rng);
    // Outlier channels make the migration nontrivial.
    for (std::size_t k = 0; k < 1 + in / 8; ++k) {
      const std::size_t j = rng.uniform_below(in);
      for (std::size_t r = 0; r < x.rows(); ++r) x(r, j) *= 30.0;
    }
    const ActivationStats stats = ActivationStats::from_rows(LayerRef{}, x);
    const Matrix want = kernels::serial::gemm_nt(x, w);
    for (double alpha : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const Smoothing sm = smoothquant_migrate(w, stats, alpha);
      const double e1 = rel_error(kernels::serial::gemm_nt(divide_columns(x, sm.s), sm.w_scaled), want);
      // Same pipeline through the stored 16-bit layer.
      MethodSpec s = spec_for(Method::smoothquant, 16);
      s.params.smooth_alpha = alpha;
      const QuantizedTensor q = smoothquant_quantize_layer(w, stats, s).tensor;
      const Matrix xin = q.input_scales().empty() ? x : divide_columns(x, q.input_scales());
      const double e2 = rel_error(kernels::serial::gemm_nt(xin, dequantize(q)), want);
      worst = std::max({worst, e1, e2});
      c.expect(e1 <= 1e-6 && e2 <= 1e-6, fmt("alpha %.2f rel error %.3g", alpha, std::max(e1, e2)));
    }
  }
  return c.outcome(fmt("250 (layer, alpha) pairs, worst relative error %.2e (limit 1e-6)", worst));
}

struct TinySetup {
  Model fp;
  TokenSeq train;
  TokenSeq eval;
};

const TinySetup& tiny() {
  static const TinySetup s{load_model(testing::data_dir() / "tiny.mqnt"),
                           load_corpus(testing::data_dir() / "corpus" / "train.mqtk"),
                           load_corpus(testing::data_dir() / "corpus" / "eval.mqtk")};
  return s;
}

double tiny_ppl(const MethodSpec& spec, std::uint64_t seed) {
  const TinySetup& t = tiny();
  const CalibrationSet calib = build_c4_style_segments(t.train, 128, t.fp.context_len(), seed, "train");
  const Model q = compose_quantize(t.fp, calib, spec).model;
  return perplexity(q, t.eval, q.context_len()).value;
}

constexpr std::uint64_t kSeeds[] = {1, 2, 3, 4, 5};

// 6. SmoothQuant+GPTQ at or below SmoothQuant alone.
Outcome composition_direction() {
  Check c;
  std::string summary;
  for (int bits : {4, 3}) {
    int holds = 0;
    std::string vals;
    for (std::uint64_t seed : kSeeds) {
      const double sq = tiny_ppl(spec_for(Method::smoothquant, bits, 8), seed);
      const double sg = tiny_ppl(spec_for(Method::smoothquant_gptq, bits, 8), seed);
      holds += sg <= sq;
      vals += fmt(" %.2f/%.2f", sg, sq);
    }
    c.expect(holds >= 4, "W" + std::to_string(bits) + "A8 holds in " + std::to_string(holds) + "/5");
    summary += "W" + std::to_string(bits) + "A8 " + std::to_string(holds) + "/5 (sq+gptq/sq:" + vals + ") ";
  }
  return c.outcome(summary + "need >= 4/5");
}

// 7. GPTQ perplexity ordered by bit width.
Outcome bitwidth_trend() {
  Check c;
  std::vector<double> med;
  for (int bits : {4, 3, 2}) {
    std::vector<double> v;
    for (std::uint64_t seed : kSeeds) v.push_back(tiny_ppl(spec_for(Method::gptq, bits), seed));
    std::sort(v.begin(), v.end());
    med.push_back(v[2]);
  }
  c.expect(med[0] <= med[1] && med[1] <= med[2], "median order violated");
  return c.outcome(fmt("median PPL W4 %.3f, W3 %.3f, W2 %.3f", med[0], med[1], med[2]));
}

const std::vector<std::size_t> kCarveOracle = {
#include "oracles/carve_1000_300_seed42.inc"
};

DatasetHandle numbered(std::size_t n) {
  std::vector<TokenSeq> records;
  for (std::size_t i = 0; i < n; ++i) {
    records.push_back({static_cast<TokenId>(i & 0xff), static_cast<TokenId>((i >> 8) & 0xff)});
  }
  return DatasetHandle::from_records("synth", Split::test, std::nullopt, records);
}

std::size_t index_of(std::span<const TokenId> r) { return r[0] | (r[1] << 8); }

// 8. Carving reproduces the oracle draw; calibration and test never overlap.
Outcome calibration_determinism() {
  Check c;
  CalibrationPolicy p;
  p.n = 128;
  p.reserve = 300;
  p.seed = 42;
  const CalibrationResult r = build_calibration_set(numbered(1000), p);
  std::vector<std::size_t> calib, ex;
  for (const auto& s : r.calibration.sequences) calib.push_back(index_of(s));
  for (std::size_t i = 0; i < r.exemplars.size(); ++i) ex.push_back(index_of(r.exemplars.record(i)));
  c.expect(calib == std::vector<std::size_t>(kCarveOracle.begin(), kCarveOracle.begin() + 128),
           "calibration indices differ from oracle");
  c.expect(ex == std::vector<std::size_t>(kCarveOracle.begin() + 128, kCarveOracle.end()),
           "exemplar indices differ from oracle");
  c.expect(r.remaining.size() == 700, "remaining size");

  SplitMix64 rng(808);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t size = 1 + rng.uniform_below(600);
    CalibrationPolicy q;
    q.reserve = 1 + rng.uniform_below(size);
    q.n = 1 + rng.uniform_below(q.reserve);
    q.seed = rng.next();
    const CalibrationResult cr = build_calibration_set(numbered(size), q);
    std::set<std::size_t> held;
    for (const auto& s : cr.calibration.sequences) held.insert(index_of(s));
    for (std::size_t i = 0; i < cr.exemplars.size(); ++i) held.insert(index_of(cr.exemplars.record(i)));
    std::set<std::size_t> test;
    for (std::size_t i = 0; i < cr.remaining.size(); ++i) test.insert(index_of(cr.remaining.record(i)));
    bool disjoint = true;
    for (std::size_t i : held) disjoint &= !test.contains(i);
    c.expect(disjoint && held.size() == q.reserve && held.size() + test.size() == size,
             "policy " + std::to_string(t) + " overlaps or loses records");
  }
  return c.outcome("oracle list matched; 1000 random policies disjoint");
}

class FnModel : public LanguageModel {
 public:
  using Fn = std::function<std::vector<double>(std::span<const TokenId>)>;
  FnModel(std::size_t vocab, std::size_t ctx, Fn fn) : vocab_(vocab), ctx_(ctx), fn_(std::move(fn)) {}
  std::size_t vocab_size() const override { return vocab_; }
  std::size_t context_len() const override { return ctx_; }
  Matrix logits(std::span<const TokenId> tokens) const override {
    Matrix out(tokens.size(), vocab_);
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      const auto row = fn_(tokens.first(t + 1));
      for (std::size_t v = 0; v < vocab_; ++v) out(t, v) = row[v];
    }
    return out;
  }

 private:
  std::size_t vocab_, ctx_;
  Fn fn_;
};

// 9. Perplexity and multiple-choice scoring against hand values.
Outcome evaluation_oracles() {
  Check c;
  const FnModel uniform(256, 64, [](auto) { return std::vector<double>(256, 0.0); });
  TokenSeq corpus(2000);
  SplitMix64 rng(909);
  for (auto& t : corpus) t = static_cast<TokenId>(rng.uniform_below(256));
  const double pu = perplexity(uniform, corpus, 64).value;
  c.expect(std::abs(pu - 256.0) <= 1e-6, fmt("uniform PPL %.12f", pu));

  // Logits ln(p): p(0 | 2) = 1/2, p(1 | 2 0) = 1/4, so PPL = 2^1.5.
  const std::vector<double> z0{std::log(0.5), std::log(0.25), std::log(0.25)};
  const std::vector<double> z1{std::log(0.5), std::log(0.25), std::log(0.25)};
  const FnModel hand(3, 8, [&](std::span<const TokenId> p) { return p.size() == 1 ? z0 : z1; });
  const double ph = perplexity(hand, TokenSeq{2, 0, 1}, 8).value;
  c.expect(std::abs(ph - 2.8284271247461903) <= 1e-12, fmt("3-token PPL %.15f", ph));

  const std::vector<std::function<double(double)>> transforms{
      [](double x) { return std::exp(x); }, [](double x) { return 3 * x + 7; },
      [](double x) { return std::atan(x); }, [](double x) { return x * x * x; }};
  for (int t = 0; t < 100; ++t) {
    std::vector<double> s(2 + rng.uniform_below(6));
    for (double& v : s) v = rng.normal();
    const std::size_t want = pick_choice(s);
    for (const auto& f : transforms) {
      std::vector<double> u(s.size());
      for (std::size_t i = 0; i < s.size(); ++i) u[i] = f(s[i]);
      c.expect(pick_choice(u) == want, "argmax changed under a monotone transform");
    }
  }
  return c.outcome(fmt("uniform PPL %.9f, 3-token PPL %.12f, 100 score sets invariant", pu, ph));
}

// 10. The shipped example config is reproducible byte for byte.
Outcome end_to_end() {
  Check c;
  RunConfig cfg = load_config(testing::config_dir() / "example.yaml");
  std::vector<std::string> csv;
  testing::TempDir dir("e2e");
  for (int run = 0; run < 2; ++run) {
    const auto results = run_matrix(cfg);
    const auto path = dir.path() / ("results" + std::to_string(run) + ".csv");
    write_results(path, results);
    // results.csv carries per-cell wall times; everything else must match.
    csv.push_back(results_to_csv(read_results(path), false) + emit_report(results, ReportFormat::csv));
    std::size_t failed = 0;
    for (const auto& r : results) failed += !r.ok;
    c.expect(failed == 0, std::to_string(failed) + " failed cells");
  }
  c.expect(csv[0] == csv[1], "CSV reports differ between runs");

  std::vector<DatasetHandle> handles;
  for (const auto& d : cfg.datasets) handles.push_back(load_dataset(d.path));
  const std::size_t cells = enumerate_scenarios(handles, cfg.shifts).size();
  const std::size_t want = expected_row_count(cfg, cells);
  const std::size_t rows = read_results(dir.path() / "results0.csv").size();
  c.expect(cells == 16, "expected a 4x4 grid, got " + std::to_string(cells) + " cells");
  c.expect(rows == want, "rows " + std::to_string(rows) + " vs formula " + std::to_string(want));
  return c.outcome(std::to_string(rows) + " rows = (" + std::to_string(cfg.methods.size()) + " + 1) x " +
                   std::to_string(cells) + " cells x " + std::to_string(cfg.shots.size()) + " shots x " +
                   std::to_string(cfg.eval.metrics.size()) + " metric; two runs byte-identical");
}

std::string golden(const std::string& name) {
  return testing::read_text(testing::test_dir() / "golden" / "prompts" / name);
}

// 11. Rendered prompts equal the transcribed golden files.
Outcome prompt_fidelity() {
  Check c;
  const auto same = [&](const std::string& got, const std::string& file) {
    c.expect(got == golden(file), file + " differs");
  };
  c.expect(default_shots(Task::EQA) == 1 && default_shots(Task::SA) == 3 && default_shots(Task::NLI) == 3 &&
               default_shots(Task::TD) == 2,
           "default shot counts");

  const std::vector<Exemplar> sa{{{{"Text", "the staff were kind"}}, "positive"},
                                 {{{"Text", "my order never came"}}, "negative"},
                                 {{{"Text", "it is a chair"}}, "neutral"}};
  const Fields sa_item{{"Text", "the soup was cold"}};
  same(render_prompt_text(builtin_template(Task::SA), default_shots(Task::SA), sa, sa_item), "SA_3shot.txt");
  same(render_prompt_text(builtin_template(Task::SA), 0, sa, sa_item), "SA_0shot.txt");

  const std::vector<Exemplar> nli{
      {{{"Premise", "a dog runs in a park"}, {"Hypothesis", "an animal is outside"}}, "entailment"},
      {{{"Premise", "two men play chess"}, {"Hypothesis", "the men are brothers"}}, "neutral"},
      {{{"Premise", "the room is empty"}, {"Hypothesis", "a crowd fills the room"}}, "contradiction"}};
  same(render_prompt_text(builtin_template(Task::NLI), default_shots(Task::NLI), nli,
                          {{"Premise", "she bought apples"}, {"Hypothesis", "she bought fruit"}}),
       "NLI_3shot.txt");

  const std::vector<Exemplar> td{{{{"Text", "have a nice day"}}, "benign"},
                                 {{{"Text", "you are worthless"}}, "toxic"},
                                 {{{"Text", "unused third"}}, "benign"}};
  same(render_prompt_text(builtin_template(Task::TD), default_shots(Task::TD), td, {{"Text", "see you tomorrow"}}),
       "TD_2shot.txt");

  const std::vector<Exemplar> eqa{
      {{{"Passage", "The bridge opened in 1932."}, {"Question", "When did the bridge open?"}}, "1932"}};
  same(render_prompt_text(builtin_template(Task::EQA), default_shots(Task::EQA), eqa,
                          {{"Passage", "Mara painted the fence blue."}, {"Question", "What color is the fence?"}}),
       "EQA_1shot.txt");

  const std::vector<Exemplar> cds{
      {{{"Question", "一加一等于几？"}, {"A", "一"}, {"B", "二"}, {"C", "三"}, {"D", "四"}}, "B"},
      {{{"Question", "水的化学式是什么？"}, {"A", "CO2"}, {"B", "O2"}, {"C", "H2O"}, {"D", "NaCl"}}, "C"}};
  same(render_prompt_text(builtin_template(Task::CDS), 2, cds,
                          {{"Question", "中国的首都是哪里？"}, {"A", "上海"}, {"B", "北京"}, {"C", "广州"}, {"D", "深圳"}}),
       "CDS_2shot.txt");
  return c.outcome("SA 3/0-shot, NLI 3-shot, TD 2-shot, EQA 1-shot, CDS 2-shot byte-equal");
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace mqnt

int main(int argc, char** argv) {
  using namespace mqnt;
  const std::vector<Criterion> all{
      {1, "grid correctness", 10, grid_correctness},
      {2, "GPTQ dominance", 30, gptq_dominance},
      {3, "identity reduction", 5, identity_reduction},
      {4, "SpQR outliers", 60, spqr_outliers},
      {5, "smoothing FP invariance", 10, smoothing_invariance},
      {6, "composition direction", 300, composition_direction},
      {7, "bit-width trend", 300, bitwidth_trend},
      {8, "calibration determinism", 10, calibration_determinism},
      {9, "evaluation oracles", 10, evaluation_oracles},
      {10, "end-to-end determinism", 600, end_to_end},
      {11, "prompt fidelity", 5, prompt_fidelity},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  kernels::configure_workers_from_env();
  int failed = 0;
  for (const Criterion& c : all) {
    if (!only.empty() && !only.contains(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool over = secs > c.budget_s;
    const bool pass = o.pass && !over;
    failed += !pass;
    std::printf("[%s] criterion %2d %-24s %7.2fs / %4.0fs  %s%s\n", pass ? "PASS" : "FAIL", c.id, c.name, secs,
                c.budget_s, o.detail.c_str(), over ? " | over time budget" : "");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
