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

#include "mqnt/calib/calibration.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "mqnt/errors.hpp"
#include "mqnt/numerics/rng.hpp"

namespace mqnt {

std::string_view to_string(CalibrationMode m) {
  return m == CalibrationMode::from_train ? "from_train" : "carve_from_test";
}

CalibrationMode parse_calibration_mode(std::string_view s) {
  if (s == "from_train") return CalibrationMode::from_train;
  if (s == "carve_from_test") return CalibrationMode::carve_from_test;
  throw FormatError("unknown calibration mode '" + std::string(s) + "'");
}

std::vector<std::size_t> partial_shuffle(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k > n) throw SizeError("cannot draw " + std::to_string(k) + " of " + std::to_string(n));
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  SplitMix64 rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.uniform_below(n - i));
    std::swap(p[i], p[j]);
  }
  p.resize(k);
  return p;
}

namespace {

TokenSeq take(std::span<const TokenId> r, std::size_t max_tokens) {
  const std::size_t len = max_tokens == 0 ? r.size() : std::min(r.size(), max_tokens);
  return TokenSeq(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(len));
}

}  // namespace

CalibrationResult build_calibration_set(const DatasetHandle& src, const CalibrationPolicy& policy) {
  CalibrationResult out;
  auto& prov = out.calibration.provenance;
  prov.dataset_id = src.dataset_id();
  prov.subject_tag = src.subject_tag();
  prov.policy = std::string(to_string(policy.mode));
  prov.seed = policy.seed;
  if (policy.n == 0) {
    out.remaining = src;
    out.exemplars = src.subset({});
    return out;
  }

  if (policy.mode == CalibrationMode::from_train) {
    if (src.split() == Split::test) throw SizeError("from_train needs a train or validation split, got test");
    if (src.size() < policy.n) {
      throw SizeError(src.label() + ": from_train needs " + std::to_string(policy.n) + " records, split has " +
                      std::to_string(src.size()) + " (short by " + std::to_string(policy.n - src.size()) + ")");
    }
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < src.size(); ++i) {
      if (i < policy.n) {
        out.calibration.sequences.push_back(take(src.record(i), policy.max_tokens));
        prov.selected.push_back(src.source_index(i));
      } else {
        rest.push_back(i);
      }
    }
    out.remaining = src.subset(rest);
    out.exemplars = out.remaining;
    return out;
  }

  if (policy.reserve < policy.n) throw SizeError("reserve must be >= n");
  if (src.size() < policy.reserve) {
    throw SizeError(src.label() + ": carve_from_test needs " + std::to_string(policy.reserve) +
                    " records, split has " + std::to_string(src.size()) + " (short by " +
                    std::to_string(policy.reserve - src.size()) + ")");
  }
  const auto drawn = partial_shuffle(src.size(), policy.reserve, policy.seed);
  for (std::size_t i = 0; i < policy.n; ++i) {
    out.calibration.sequences.push_back(take(src.record(drawn[i]), policy.max_tokens));
    prov.selected.push_back(src.source_index(drawn[i]));
  }
  std::vector<bool> carved(src.size(), false);
  for (std::size_t p : drawn) carved[p] = true;
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < src.size(); ++i)
    if (!carved[i]) rest.push_back(i);
  out.remaining = src.subset(rest);
  out.exemplars = src.subset(std::span<const std::size_t>(drawn).subspan(policy.n));
  return out;
}

CalibrationSet build_c4_style_segments(std::span<const TokenId> corpus, std::size_t n, std::size_t seg_len,
                                       std::uint64_t seed, std::string_view dataset_id) {
  if (seg_len == 0) throw SizeError("segment length must be positive");
  if (corpus.size() < seg_len) {
    throw SizeError("corpus of " + std::to_string(corpus.size()) + " tokens is shorter than segment length " +
                    std::to_string(seg_len));
  }
  CalibrationSet out;
  out.provenance.dataset_id = std::string(dataset_id);
  out.provenance.policy = "c4_segments";
  out.provenance.seed = seed;
  SplitMix64 rng(seed);
  const std::uint64_t starts = corpus.size() - seg_len + 1;
  for (std::size_t i = 0; i < n; ++i) {
    const auto off = rng.uniform_below(starts);
    out.provenance.selected.push_back(off);
    const auto seg = corpus.subspan(static_cast<std::size_t>(off), seg_len);
    out.sequences.emplace_back(seg.begin(), seg.end());
  }
  return out;
}

}  // namespace mqnt
