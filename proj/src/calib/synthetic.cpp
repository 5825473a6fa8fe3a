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

#include "mqnt/calib/synthetic.hpp"

#include <algorithm>
#include <array>

#include "mqnt/errors.hpp"
#include "mqnt/numerics/rng.hpp"

namespace mqnt::synthetic {

namespace {

constexpr std::size_t kLexiconSize = 160;

const std::array<std::vector<std::string>, 3> kCues = {{
    {"bad", "awful", "poor", "dull", "broken"},
    {"good", "great", "lovely", "fine", "superb"},
    {"okay", "plain", "average", "usual", "so-so"},
}};

std::size_t pick_between(SplitMix64& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.uniform_below(hi - lo + 1));
}

std::string make_word(SplitMix64& rng, std::string_view alphabet, std::size_t lo, std::size_t hi) {
  std::string w(pick_between(rng, lo, hi), ' ');
  for (char& c : w) c = alphabet[rng.uniform_below(alphabet.size())];
  return w;
}

// Lexicon of a style; fixed per dataset id so train and test share words.
std::vector<std::string> lexicon(const Style& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s.dataset_id) h = (h ^ c) * 0x100000001b3ULL;
  SplitMix64 rng(h);
  std::vector<std::string> words;
  words.reserve(kLexiconSize);
  for (std::size_t i = 0; i < kLexiconSize; ++i) words.push_back(make_word(rng, s.alphabet, s.min_word, s.max_word));
  return words;
}

// Skewed toward the front of the lexicon: min of two uniform draws.
const std::string& zipfish(SplitMix64& rng, const std::vector<std::string>& words) {
  const auto a = rng.uniform_below(words.size());
  const auto b = rng.uniform_below(words.size());
  return words[std::min(a, b)];
}

std::string sentence(SplitMix64& rng, const Style& s, const std::vector<std::string>& words, std::size_t label) {
  const std::size_t n = pick_between(rng, s.min_words, s.max_words);
  const std::size_t cue_at = rng.uniform_below(n + 1);
  std::string out;
  for (std::size_t i = 0; i <= n; ++i) {
    if (!out.empty()) out += ' ';
    if (i == cue_at) {
      const auto& cues = kCues[label];
      out += cues[rng.uniform_below(cues.size())];
    } else {
      out += zipfish(rng, words);
    }
  }
  return out;
}

}  // namespace

const std::vector<Style>& sentiment_styles() {
  static const std::vector<Style> styles = {
      {"reviews", "aaeeiioonrstlcdm", 3, 7, 6, 12},
      {"dialogue", "aeiouuyhwkgnpb", 2, 5, 4, 9},
      {"tweets", "eeaaoizxqvjkrt", 2, 6, 3, 8},
      {"phrases", "iiaaeeoulrnmsf", 4, 9, 3, 6},
  };
  return styles;
}

const Style& sentiment_style(std::string_view dataset_id) {
  for (const auto& s : sentiment_styles()) {
    if (s.dataset_id == dataset_id) return s;
  }
  throw FormatError("unknown synthetic style '" + std::string(dataset_id) + "'");
}

const std::vector<std::string>& sentiment_labels() {
  static const std::vector<std::string> labels = {"negative", "positive", "neutral"};
  return labels;
}

DatasetHandle sentiment_dataset(const Style& style, std::size_t records, std::uint64_t seed, Split split) {
  const auto words = lexicon(style);
  SplitMix64 rng(seed);
  std::vector<TokenSeq> toks;
  std::vector<RecordMeta> meta;
  toks.reserve(records);
  meta.reserve(records);
  for (std::size_t i = 0; i < records; ++i) {
    const std::size_t label = rng.uniform_below(3);
    std::string text = sentence(rng, style, words, label);
    toks.push_back(bytes_to_tokens(text));
    meta.push_back({{{"Text", std::move(text)}}, {}, label});
  }
  auto h = DatasetHandle::from_records(style.dataset_id, split, std::nullopt, toks, std::move(meta));
  h.task = "SA";
  h.choices = sentiment_labels();
  return h;
}

const std::vector<std::string>& exam_subjects() {
  static const std::vector<std::string> subjects = {"humanities", "social_science", "stem"};
  return subjects;
}

namespace {

Style exam_style(std::string_view subject) {
  if (subject == "humanities") return {"exam", "aeiolnrsthy", 3, 8, 5, 9};
  if (subject == "social_science") return {"exam", "aeioucmpdgb", 3, 7, 5, 9};
  if (subject == "stem") return {"exam", "aeixyzqkvw0123456789", 1, 5, 5, 9};
  throw FormatError("unknown exam subject '" + std::string(subject) + "'");
}

}  // namespace

DatasetHandle exam_dataset(std::string_view subject, std::size_t records, std::uint64_t seed, Split split) {
  Style style = exam_style(subject);
  style.dataset_id = "exam/" + std::string(subject);
  const auto words = lexicon(style);
  SplitMix64 rng(seed);
  std::vector<TokenSeq> toks;
  std::vector<RecordMeta> meta;
  toks.reserve(records);
  meta.reserve(records);
  static constexpr std::array<const char*, 4> kLetters = {"A", "B", "C", "D"};
  for (std::size_t i = 0; i < records; ++i) {
    std::string question;
    const std::size_t n = pick_between(rng, style.min_words, style.max_words);
    for (std::size_t w = 0; w < n; ++w) {
      if (w) question += ' ';
      question += zipfish(rng, words);
    }
    question += '?';
    const std::size_t gold = rng.uniform_below(4);
    Fields fields{{"Question", question}};
    std::string text = question;
    for (std::size_t c = 0; c < 4; ++c) {
      std::string opt = zipfish(rng, words) + ' ' + zipfish(rng, words);
      text += '\n';
      text += kLetters[c];
      text += ". ";
      text += opt;
      fields.emplace_back(kLetters[c], std::move(opt));
    }
    toks.push_back(bytes_to_tokens(text));
    meta.push_back({std::move(fields), {}, gold});
  }
  auto h = DatasetHandle::from_records("exam", split, std::string(subject), toks, std::move(meta));
  h.task = "CDS";
  h.choices = {"A", "B", "C", "D"};
  return h;
}

std::string web_corpus(std::size_t bytes, std::uint64_t seed) {
  const auto& styles = sentiment_styles();
  std::vector<std::vector<std::string>> lexicons;
  for (const auto& s : styles) lexicons.push_back(lexicon(s));
  SplitMix64 rng(seed);
  std::string out;
  out.reserve(bytes + 256);
  while (out.size() < bytes) {
    const std::size_t k = rng.uniform_below(styles.size());
    const std::size_t label = rng.uniform_below(3);
    const std::string s = sentence(rng, styles[k], lexicons[k], label);
    if (rng.uniform_below(2) == 0) {
      out += "Text: " + s + " // Prediction: " + sentiment_labels()[label] + "\n";
    } else {
      out += s + ".\n";
    }
  }
  out.resize(bytes);
  return out;
}

}  // namespace mqnt::synthetic
