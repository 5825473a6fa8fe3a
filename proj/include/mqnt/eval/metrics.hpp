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

#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "mqnt/calib/dataset.hpp"
#include "mqnt/eval/template.hpp"
#include "mqnt/model/model.hpp"

namespace mqnt {

enum class MetricName { ppl, accuracy };
std::string_view to_string(MetricName m);
MetricName parse_metric(std::string_view s);

struct MetricValue {
  MetricName name = MetricName::ppl;
  double value = 0.0;
  std::size_t n_items = 0;
};

enum class Normalization { sum, per_token };
std::string_view to_string(Normalization n);
Normalization parse_normalization(std::string_view s);

// exp(mean NLL) over non-overlapping windows of context_len tokens; the
// first token of each window is not predicted. Throws SizeError when the
// corpus has fewer than 2 tokens.
MetricValue perplexity(const LanguageModel& model, std::span<const TokenId> corpus, std::size_t context_len);

struct ChoiceScore {
  double sum_logprob = 0.0;
  double per_token_logprob = 0.0;
};

// Log-probability of `choice` following `context`. With an empty context the
// first choice token is scored from position 0's distribution. Throws
// ContextError when the combined length exceeds the model context.
ChoiceScore score_choice(const LanguageModel& model, std::span<const TokenId> context,
                         std::span<const TokenId> choice);

// Index of the best score; ties go to the lowest index.
std::size_t pick_choice(std::span<const ChoiceScore> scores, Normalization norm);
std::size_t pick_choice(std::span<const double> scores);

struct EvalItem {
  TokenSeq context;
  std::vector<TokenSeq> choices;
  std::size_t gold_index = 0;
};

// Items from a dataset: rendered prompts (left-truncated to fit the model
// context) and choice strings. max_items = 0 takes all records.
std::vector<EvalItem> build_eval_items(const DatasetHandle& items, const PromptTemplate& t, std::size_t shots,
                                       const DatasetHandle& exemplars, std::size_t context_len,
                                       std::size_t max_items = 0);

MetricValue mc_accuracy(const LanguageModel& model, std::span<const EvalItem> items, Normalization norm);
MetricValue mc_accuracy(const LanguageModel& model, const DatasetHandle& items, const PromptTemplate& t,
                        std::size_t shots, const DatasetHandle& exemplars, Normalization norm,
                        std::size_t max_items = 0);

}  // namespace mqnt
