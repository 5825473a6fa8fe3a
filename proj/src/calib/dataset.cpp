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

#include "mqnt/calib/dataset.hpp"

#include <numeric>

#include "mqnt/errors.hpp"

namespace mqnt {

std::string_view to_string(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::validation: return "validation";
    case Split::test: return "test";
  }
  return "?";
}

Split parse_split(std::string_view s) {
  if (s == "train") return Split::train;
  if (s == "validation") return Split::validation;
  if (s == "test") return Split::test;
  throw FormatError("unknown split '" + std::string(s) + "'");
}

DatasetHandle::DatasetHandle(std::string dataset_id, Split split, std::optional<std::string> subject_tag,
                             std::shared_ptr<const std::vector<TokenId>> tokens, std::vector<Span> spans,
                             std::vector<RecordMeta> meta)
    : dataset_id_(std::move(dataset_id)),
      split_(split),
      subject_tag_(std::move(subject_tag)),
      tokens_(std::move(tokens)),
      spans_(std::move(spans)),
      meta_(std::move(meta)) {
  if (!tokens_) throw FormatError("dataset handle without token buffer");
  if (!meta_.empty() && meta_.size() != spans_.size()) throw FormatError("record metadata count mismatch");
  for (std::size_t i = 0; i < spans_.size(); ++i) {
    const auto& s = spans_[i];
    if (s.offset > tokens_->size() || s.length > tokens_->size() - s.offset) {
      throw FormatError("record " + std::to_string(i) + " lies outside the token stream");
    }
  }
  source_index_.resize(spans_.size());
  std::iota(source_index_.begin(), source_index_.end(), std::size_t{0});
}

DatasetHandle DatasetHandle::from_records(std::string dataset_id, Split split, std::optional<std::string> subject_tag,
                                          const std::vector<TokenSeq>& records, std::vector<RecordMeta> meta) {
  auto buf = std::make_shared<std::vector<TokenId>>();
  std::vector<Span> spans;
  for (const auto& r : records) {
    spans.push_back({buf->size(), r.size()});
    buf->insert(buf->end(), r.begin(), r.end());
  }
  return DatasetHandle(std::move(dataset_id), split, std::move(subject_tag), std::move(buf), std::move(spans),
                       std::move(meta));
}

std::string DatasetHandle::label() const {
  return subject_tag_ ? dataset_id_ + "/" + *subject_tag_ : dataset_id_;
}

std::span<const TokenId> DatasetHandle::record(std::size_t i) const {
  const auto& s = spans_.at(i);
  return {tokens_->data() + s.offset, static_cast<std::size_t>(s.length)};
}

const RecordMeta& DatasetHandle::meta(std::size_t i) const {
  static const RecordMeta kEmpty;
  return meta_.empty() ? kEmpty : meta_.at(i);
}

const std::vector<std::string>& DatasetHandle::choices_for(std::size_t i) const {
  const auto& m = meta(i);
  return m.choices.empty() ? choices : m.choices;
}

DatasetHandle DatasetHandle::subset(std::span<const std::size_t> positions) const {
  DatasetHandle out = *this;
  out.spans_.clear();
  out.meta_.clear();
  out.source_index_.clear();
  for (std::size_t p : positions) {
    out.spans_.push_back(spans_.at(p));
    if (!meta_.empty()) out.meta_.push_back(meta_[p]);
    out.source_index_.push_back(source_index_[p]);
  }
  return out;
}

TokenSeq DatasetHandle::concatenated(std::optional<TokenId> separator) const {
  TokenSeq out;
  for (std::size_t i = 0; i < size(); ++i) {
    if (i > 0 && separator) out.push_back(*separator);
    const auto r = record(i);
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

std::optional<std::size_t> DatasetHandle::first_out_of_vocab(std::size_t vocab) const {
  for (std::size_t i = 0; i < size(); ++i) {
    const auto r = record(i);
    for (std::size_t t = 0; t < r.size(); ++t) {
      if (r[t] >= vocab) return spans_[i].offset + t;
    }
  }
  return std::nullopt;
}

std::size_t CalibrationSet::total_tokens() const {
  std::size_t n = 0;
  for (const auto& s : sequences) n += s.size();
  return n;
}

}  // namespace mqnt
