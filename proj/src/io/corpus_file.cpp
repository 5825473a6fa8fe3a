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

#include "mqnt/io/corpus_file.hpp"

#include <memory>
#include <string>

#include <json.hpp>

#include "mqnt/errors.hpp"
#include "mqnt/io/byte_io.hpp"

namespace mqnt {

namespace {

using Json = nlohmann::ordered_json;

constexpr char kMagic[] = "MQTK0001";
constexpr std::uint32_t kHasIndex = 1;
constexpr std::uint32_t kHasMeta = 2;

void write_header(ByteWriter& out, std::uint32_t vocab, std::uint32_t flags, std::span<const TokenId> tokens) {
  out.text(std::string_view(kMagic, 8));
  out.u32(vocab);
  out.u32(flags);
  out.u64(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] >= vocab) {
      throw VocabError("token id " + std::to_string(tokens[i]) + " at position " + std::to_string(i) +
                       " exceeds vocab size " + std::to_string(vocab));
    }
    out.u32(tokens[i]);
  }
}

Json metadata_json(const DatasetHandle& h) {
  Json j;
  j["dataset_id"] = h.dataset_id();
  j["split"] = to_string(h.split());
  j["subject_tag"] = h.subject_tag() ? Json(*h.subject_tag()) : Json(nullptr);
  j["task"] = h.task;
  j["choices"] = h.choices;
  if (h.has_meta()) {
    Json records = Json::array();
    for (std::size_t i = 0; i < h.size(); ++i) {
      const RecordMeta& m = h.meta(i);
      Json r;
      r["fields"] = Json::array();
      for (const auto& [k, v] : m.fields) r["fields"].push_back({k, v});
      r["choices"] = m.choices;
      r["gold"] = m.gold ? Json(*m.gold) : Json(nullptr);
      records.push_back(std::move(r));
    }
    j["records"] = std::move(records);
  }
  return j;
}

struct Parsed {
  std::uint32_t vocab = 0;
  std::shared_ptr<std::vector<TokenId>> tokens;
  std::optional<std::vector<DatasetHandle::Span>> index;
  std::optional<Json> meta;
};

Parsed parse(std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes);
  if (in.text(8) != std::string_view(kMagic, 8)) throw FormatError("bad magic at offset 0");
  Parsed p;
  p.vocab = in.u32();
  const std::uint32_t flags = in.u32();
  if (flags & ~(kHasIndex | kHasMeta)) throw FormatError("unknown flag bits at offset 12");
  const std::uint64_t n = in.u64();
  if (n > in.remaining() / 4) throw FormatError("token count " + std::to_string(n) + " at offset 16 exceeds file");
  p.tokens = std::make_shared<std::vector<TokenId>>(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const TokenId t = in.u32();
    if (t >= p.vocab) {
      throw FormatError("token id " + std::to_string(t) + " at position " + std::to_string(i) + " (offset " +
                        std::to_string(24 + 4 * i) + ") exceeds vocab size " + std::to_string(p.vocab));
    }
    (*p.tokens)[i] = t;
  }
  if (flags & kHasIndex) {
    const std::size_t at = in.position();
    const std::uint64_t r = in.u64();
    if (r > in.remaining() / 16) throw FormatError("record count at offset " + std::to_string(at) + " exceeds file");
    std::vector<DatasetHandle::Span> spans(r);
    for (std::uint64_t i = 0; i < r; ++i) {
      spans[i].offset = in.u64();
      spans[i].length = in.u64();
      if (spans[i].offset > n || spans[i].length > n - spans[i].offset) {
        throw FormatError("record " + std::to_string(i) + " (index offset " + std::to_string(at + 8 + 16 * i) +
                          ") lies outside the token stream");
      }
    }
    p.index = std::move(spans);
  }
  if (flags & kHasMeta) {
    const std::size_t at = in.position();
    const std::uint64_t m = in.u64();
    if (m > in.remaining()) throw FormatError("metadata length at offset " + std::to_string(at) + " exceeds file");
    try {
      p.meta = Json::parse(in.text(m));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("metadata at offset " + std::to_string(at + 8) + " is not valid JSON: " + e.what());
    }
  }
  if (in.remaining() != 0) throw FormatError("trailing bytes at offset " + std::to_string(in.position()));
  return p;
}

}  // namespace

std::vector<std::uint8_t> serialize_corpus(std::span<const TokenId> tokens, std::uint32_t vocab_size) {
  ByteWriter out;
  write_header(out, vocab_size, 0, tokens);
  return out.take();
}

std::vector<std::uint8_t> serialize_dataset(const DatasetHandle& h, std::uint32_t vocab_size) {
  // Records are written compactly in handle order, whatever the source buffer holds.
  TokenSeq tokens;
  std::vector<DatasetHandle::Span> spans;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto r = h.record(i);
    spans.push_back({tokens.size(), r.size()});
    tokens.insert(tokens.end(), r.begin(), r.end());
  }
  ByteWriter out;
  write_header(out, vocab_size, kHasIndex | kHasMeta, tokens);
  out.u64(spans.size());
  for (const auto& s : spans) {
    out.u64(s.offset);
    out.u64(s.length);
  }
  const std::string meta = metadata_json(h).dump();
  out.u64(meta.size());
  out.text(meta);
  return out.take();
}

TokenSeq deserialize_corpus(std::span<const std::uint8_t> bytes) { return std::move(*parse(bytes).tokens); }

DatasetHandle deserialize_dataset(std::span<const std::uint8_t> bytes, const std::string& fallback_id) {
  Parsed p = parse(bytes);
  if (!p.index) throw FormatError("corpus file has no record index; it cannot be used as a dataset");
  if (!p.meta) return DatasetHandle(fallback_id, Split::test, std::nullopt, p.tokens, std::move(*p.index));
  try {
    const Json& j = *p.meta;
    std::vector<RecordMeta> meta;
    if (j.contains("records")) {
      for (const Json& r : j.at("records")) {
        RecordMeta m;
        for (const Json& f : r.at("fields")) m.fields.emplace_back(f.at(0).get<std::string>(), f.at(1).get<std::string>());
        m.choices = r.at("choices").get<std::vector<std::string>>();
        if (!r.at("gold").is_null()) m.gold = r.at("gold").get<std::size_t>();
        meta.push_back(std::move(m));
      }
    }
    std::optional<std::string> tag;
    if (!j.at("subject_tag").is_null()) tag = j.at("subject_tag").get<std::string>();
    DatasetHandle h(j.at("dataset_id").get<std::string>(), parse_split(j.at("split").get<std::string>()), tag,
                    p.tokens, std::move(*p.index), std::move(meta));
    h.task = j.value("task", std::string{});
    h.choices = j.value("choices", std::vector<std::string>{});
    return h;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed dataset metadata: ") + e.what());
  }
}

void save_corpus(std::span<const TokenId> tokens, const std::filesystem::path& path, std::uint32_t vocab_size) {
  write_file_atomic(path, serialize_corpus(tokens, vocab_size));
}

void save_dataset(const DatasetHandle& h, const std::filesystem::path& path, std::uint32_t vocab_size) {
  write_file_atomic(path, serialize_dataset(h, vocab_size));
}

TokenSeq load_corpus(const std::filesystem::path& path) { return deserialize_corpus(read_file(path)); }

DatasetHandle load_dataset(const std::filesystem::path& path) {
  return deserialize_dataset(read_file(path), path.stem().string());
}

}  // namespace mqnt
