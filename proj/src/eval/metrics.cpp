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

#include "mqnt/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mqnt/errors.hpp"
#include "mqnt/model/ops.hpp"

namespace mqnt {

std::string_view to_string(MetricName m) { return m == MetricName::ppl ? "ppl" : "accuracy"; }

MetricName parse_metric(std::string_view s) {
  if (s == "ppl") return MetricName::ppl;
  if (s == "accuracy") return MetricName::accuracy;
  throw FormatError("unknown metric '" + std::string(s) + "'");
}

std::string_view to_string(Normalization n) { return n == Normalization::sum ? "sum" : "per_token"; }

Normalization parse_normalization(std::string_view s) {
  if (s == "sum") return Normalization::sum;
  if (s == "per_token") return Normalization::per_token;
  throw FormatError("unknown normalization '" + std::string(s) + "'");
}

namespace {

// Neumaier's compensated sum, accumulated in sequence order.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double token_logprob(const Matrix& logits, std::size_t row, TokenId tok) {
  const auto lp = ops::log_softmax(logits.row(row));
  return lp[tok];
}

}  // namespace

MetricValue perplexity(const LanguageModel& model, std::span<const TokenId> corpus, std::size_t context_len) {
  if (corpus.size() < 2) throw SizeError("perplexity needs at least 2 tokens, got " + std::to_string(corpus.size()));
  if (context_len < 2 || context_len > model.context_len()) {
    throw ContextError("perplexity window " + std::to_string(context_len) + " must be in [2, " +
                       std::to_string(model.context_len()) + "]");
  }
  const std::size_t windows = (corpus.size() + context_len - 1) / context_len;
  std::vector<std::vector<double>> nll(windows);
  std::vector<std::exception_ptr> errors(windows);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t w = 0; w < windows; ++w) {
    try {
      const std::size_t start = w * context_len;
      const std::size_t len = std::min(context_len, corpus.size() - start);
      if (len < 2) continue;
      const auto window = corpus.subspan(start, len);
      const Matrix logits = model.logits(window);
      nll[w].reserve(len - 1);
      for (std::size_t t = 1; t < len; ++t) nll[w].push_back(-token_logprob(logits, t - 1, window[t]));
    } catch (...) {
      errors[w] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  CompensatedSum total;
  std::size_t count = 0;
  for (const auto& v : nll) {
    for (double x : v) total.add(x);
    count += v.size();
  }
  if (count == 0) throw SizeError("perplexity: no predicted positions");
  return {MetricName::ppl, std::exp(total.value() / static_cast<double>(count)), count};
}

ChoiceScore score_choice(const LanguageModel& model, std::span<const TokenId> context,
                         std::span<const TokenId> choice) {
  if (choice.empty()) throw ShapeError("score_choice: empty choice");
  const std::size_t total = context.size() + choice.size();
  if (total > model.context_len()) {
    throw ContextError("context + choice is " + std::to_string(total) + " tokens, model context is " +
                       std::to_string(model.context_len()));
  }
  TokenSeq seq(context.begin(), context.end());
  seq.insert(seq.end(), choice.begin(), choice.end());
  const Matrix logits = model.logits(seq);
  double sum = 0.0;
  for (std::size_t k = 0; k < choice.size(); ++k) {
    const std::size_t pos = context.size() + k;
    sum += token_logprob(logits, pos == 0 ? 0 : pos - 1, seq[pos]);
  }
  return {sum, sum / static_cast<double>(choice.size())};
}

std::size_t pick_choice(std::span<const double> scores) {
  if (scores.empty()) throw ShapeError("pick_choice: no choices");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

std::size_t pick_choice(std::span<const ChoiceScore> scores, Normalization norm) {
  std::vector<double> v;
  v.reserve(scores.size());
  for (const auto& s : scores) v.push_back(norm == Normalization::sum ? s.sum_logprob : s.per_token_logprob);
  return pick_choice(v);
}

std::vector<EvalItem> build_eval_items(const DatasetHandle& items, const PromptTemplate& t, std::size_t shots,
                                       const DatasetHandle& exemplars, std::size_t context_len,
                                       std::size_t max_items) {
  if (!items.has_meta()) throw TemplateError("dataset '" + items.label() + "' has no record fields");
  const std::vector<Exemplar> pool = shots == 0 ? std::vector<Exemplar>{} : exemplars_from(exemplars);
  const std::size_t n = max_items == 0 ? items.size() : std::min(max_items, items.size());
  std::vector<EvalItem> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const RecordMeta& m = items.meta(i);
    const auto& choices = items.choices_for(i);
    if (choices.size() < 2) throw TemplateError("record " + std::to_string(i) + " has fewer than 2 choices");
    if (!m.gold || *m.gold >= choices.size()) {
      throw TemplateError("record " + std::to_string(i) + " of '" + items.label() + "' has no valid gold answer");
    }
    EvalItem item;
    item.gold_index = *m.gold;
    std::size_t longest = 0;
    for (const auto& c : choices) {
      item.choices.push_back(bytes_to_tokens(t.choice_prefix + c));
      longest = std::max(longest, item.choices.back().size());
    }
    if (longest >= context_len) throw ContextError("choice longer than the evaluation context");
    item.context = render_prompt(t, shots, pool, m.fields);
    const std::size_t room = context_len - longest;
    if (item.context.size() > room) item.context.erase(item.context.begin(), item.context.end() - room);
    out.push_back(std::move(item));
  }
  return out;
}

MetricValue mc_accuracy(const LanguageModel& model, std::span<const EvalItem> items, Normalization norm) {
  if (items.empty()) throw SizeError("mc_accuracy: no items");
  std::vector<char> correct(items.size(), 0);
  std::vector<std::exception_ptr> errors(items.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < items.size(); ++i) {
    try {
      const EvalItem& item = items[i];
      std::vector<ChoiceScore> scores;
      scores.reserve(item.choices.size());
      for (const auto& c : item.choices) scores.push_back(score_choice(model, item.context, c));
      correct[i] = pick_choice(scores, norm) == item.gold_index;
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::size_t hits = 0;
  for (char c : correct) hits += c ? 1 : 0;
  return {MetricName::accuracy, static_cast<double>(hits) / static_cast<double>(items.size()), items.size()};
}

MetricValue mc_accuracy(const LanguageModel& model, const DatasetHandle& items, const PromptTemplate& t,
                        std::size_t shots, const DatasetHandle& exemplars, Normalization norm,
                        std::size_t max_items) {
  const auto built = build_eval_items(items, t, shots, exemplars, model.context_len(), max_items);
  return mc_accuracy(model, built, norm);
}

}  // namespace mqnt
