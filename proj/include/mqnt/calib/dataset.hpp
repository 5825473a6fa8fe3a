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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mqnt/tokens.hpp"

namespace mqnt {

enum class Split { train, validation, test };
std::string_view to_string(Split s);
Split parse_split(std::string_view s);

// Named template slot values for one record, e.g. {"Text", "..."}.
using Fields = std::vector<std::pair<std::string, std::string>>;

struct RecordMeta {
  Fields fields;
  std::vector<std::string> choices;  // per-record answer options; empty = dataset-level choices
  std::optional<std::size_t> gold;   // index into the effective choices
};

// One split of a dataset. Record tokens live in a shared immutable buffer
// and are addressed by (offset, length), so subsets (carving, exemplar
// pools) share storage with their parent.
class DatasetHandle {
 public:
  struct Span {
    std::uint64_t offset = 0;
    std::uint64_t length = 0;
  };

  DatasetHandle() = default;
  DatasetHandle(std::string dataset_id, Split split, std::optional<std::string> subject_tag,
                std::shared_ptr<const std::vector<TokenId>> tokens, std::vector<Span> spans,
                std::vector<RecordMeta> meta = {});

  // Builds a handle from materialized records (tests, generators).
  static DatasetHandle from_records(std::string dataset_id, Split split, std::optional<std::string> subject_tag,
                                    const std::vector<TokenSeq>& records, std::vector<RecordMeta> meta = {});

  const std::string& dataset_id() const { return dataset_id_; }
  Split split() const { return split_; }
  const std::optional<std::string>& subject_tag() const { return subject_tag_; }
  // "<dataset_id>" or "<dataset_id>/<subject_tag>".
  std::string label() const;

  std::string task;                   // prompt template task, e.g. "SA"
  std::vector<std::string> choices;   // dataset-level answer options

  std::size_t size() const { return spans_.size(); }
  bool empty() const { return spans_.empty(); }
  std::span<const TokenId> record(std::size_t i) const;
  const RecordMeta& meta(std::size_t i) const;
  bool has_meta() const { return !meta_.empty(); }
  const std::vector<Span>& spans() const { return spans_; }
  const std::shared_ptr<const std::vector<TokenId>>& buffer() const { return tokens_; }
  // Index of record i in the original file.
  std::size_t source_index(std::size_t i) const { return source_index_[i]; }

  // Options for record i (per-record if present, else dataset-level).
  const std::vector<std::string>& choices_for(std::size_t i) const;

  // New handle with the given records (by position in this handle), in order.
  DatasetHandle subset(std::span<const std::size_t> positions) const;

  // All record tokens joined with `separator` between records.
  TokenSeq concatenated(std::optional<TokenId> separator = TokenId{'\n'}) const;

  // First position whose token id is >= vocab, if any.
  std::optional<std::size_t> first_out_of_vocab(std::size_t vocab) const;

 private:
  std::string dataset_id_;
  Split split_ = Split::test;
  std::optional<std::string> subject_tag_;
  std::shared_ptr<const std::vector<TokenId>> tokens_ = std::make_shared<std::vector<TokenId>>();
  std::vector<Span> spans_;
  std::vector<RecordMeta> meta_;
  std::vector<std::size_t> source_index_;
};

struct CalibrationProvenance {
  std::string dataset_id;
  std::optional<std::string> subject_tag;
  std::string policy;  // "from_train", "carve_from_test", "c4_segments"
  std::uint64_t seed = 0;
  // Source record indices (or segment start offsets for c4_segments).
  std::vector<std::uint64_t> selected;
  bool operator==(const CalibrationProvenance&) const = default;
};

struct CalibrationSet {
  std::vector<TokenSeq> sequences;
  CalibrationProvenance provenance;

  std::size_t total_tokens() const;
  bool operator==(const CalibrationSet&) const = default;
};

}  // namespace mqnt
