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
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mqnt/calib/dataset.hpp"

// Desk-scale stand-ins for the benchmark datasets. Every generator is a pure
// function of its arguments and draws only from SplitMix64.
namespace mqnt::synthetic {

// Word shape and letter statistics of one synthetic source.
struct Style {
  std::string dataset_id;
  std::string alphabet;       // letters drawn uniformly; repeats weight a letter
  std::size_t min_word = 2;   // word length range, inclusive
  std::size_t max_word = 6;
  std::size_t min_words = 4;  // words per record, inclusive
  std::size_t max_words = 10;
};

// Four sentiment sources with disjoint-ish letter distributions.
const std::vector<Style>& sentiment_styles();
const Style& sentiment_style(std::string_view dataset_id);

// Sentiment labels, in gold-index order.
const std::vector<std::string>& sentiment_labels();

// Each record: pseudo-words in the source's style plus one cue word carrying
// the label. Task "SA", field "Text", dataset-level choices = labels.
DatasetHandle sentiment_dataset(const Style& style, std::size_t records, std::uint64_t seed,
                                Split split = Split::test);

// Subject tags of the exam source.
const std::vector<std::string>& exam_subjects();

// Four-option exam questions for one subject tag. Task "CDS", fields
// "Question", "A".."D", dataset-level choices "A".."D".
DatasetHandle exam_dataset(std::string_view subject, std::size_t records, std::uint64_t seed,
                           Split split = Split::test);

// Running text mixing every sentiment style, with labelled "Text: ... //
// Prediction: ..." lines interleaved so a fitted model sees the prompt shape.
std::string web_corpus(std::size_t bytes, std::uint64_t seed);

}  // namespace mqnt::synthetic
