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

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "mqnt/calib/calibration.hpp"
#include "mqnt/calib/scenario.hpp"
#include "mqnt/calib/synthetic.hpp"
#include "mqnt/errors.hpp"
#include "mqnt/io/corpus_file.hpp"
#include "test_util.hpp"

namespace mqnt {
namespace {

const std::vector<std::size_t> kCarveOracle = {
#include "oracles/carve_1000_300_seed42.inc"
};

// Record i holds the single token i % 256 followed by its index bytes, so
// every record is distinct and its origin is recoverable.
DatasetHandle numbered(std::size_t n, Split split = Split::test, std::string id = "synth",
                       std::optional<std::string> subject = std::nullopt) {
  std::vector<TokenSeq> records;
  for (std::size_t i = 0; i < n; ++i) {
    records.push_back({static_cast<TokenId>(i & 0xff), static_cast<TokenId>((i >> 8) & 0xff), 7});
  }
  return DatasetHandle::from_records(std::move(id), split, std::move(subject), records);
}

std::size_t index_of(std::span<const TokenId> r) { return r[0] | (r[1] << 8); }

TEST(PartialShuffle, MatchesIndependentOracle) {
  ASSERT_EQ(kCarveOracle.size(), 300u);
  EXPECT_EQ(partial_shuffle(1000, 300, 42), kCarveOracle);
}

TEST(CarveFromTest, CalibrationIsFirstBlockOfOracleDraw) {
  const DatasetHandle src = numbered(1000);
  CalibrationPolicy p;
  p.n = 128;
  p.reserve = 300;
  p.seed = 42;
  const CalibrationResult r = build_calibration_set(src, p);
  ASSERT_EQ(r.calibration.sequences.size(), 128u);
  for (std::size_t i = 0; i < 128; ++i) {
    EXPECT_EQ(index_of(r.calibration.sequences[i]), kCarveOracle[i]);
    EXPECT_EQ(r.calibration.provenance.selected[i], kCarveOracle[i]);
  }
  EXPECT_EQ(r.remaining.size(), 700u);
  ASSERT_EQ(r.exemplars.size(), 172u);
  for (std::size_t i = 0; i < 172; ++i) EXPECT_EQ(index_of(r.exemplars.record(i)), kCarveOracle[128 + i]);
  EXPECT_EQ(r.calibration.provenance.policy, "carve_from_test");
  EXPECT_EQ(r.calibration.provenance.seed, 42u);
}

TEST(CarveFromTest, DisjointOverRandomPolicies) {
  SplitMix64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t size = 1 + rng.uniform_below(400);
    CalibrationPolicy p;
    p.reserve = rng.uniform_below(size + 1);
    p.n = rng.uniform_below(p.reserve + 1);
    p.seed = rng.next();
    const DatasetHandle src = numbered(size);
    const CalibrationResult r = build_calibration_set(src, p);
    std::set<std::size_t> test;
    for (std::size_t i = 0; i < r.remaining.size(); ++i) test.insert(r.remaining.source_index(i));
    for (auto s : r.calibration.provenance.selected) EXPECT_FALSE(test.count(s));
    for (std::size_t i = 0; i < r.exemplars.size(); ++i) EXPECT_FALSE(test.count(r.exemplars.source_index(i)));
    if (p.n > 0) {
      EXPECT_EQ(r.remaining.size() + p.reserve, size);
    }
  }
}

TEST(CarveFromTest, Reproducible) {
  const DatasetHandle src = numbered(500);
  CalibrationPolicy p;
  p.seed = 9;
  EXPECT_EQ(build_calibration_set(src, p).calibration, build_calibration_set(src, p).calibration);
}

TEST(CarveFromTest, ShortSplitNamesDeficit) {
  CalibrationPolicy p;
  try {
    build_calibration_set(numbered(250), p);
    FAIL();
  } catch (const SizeError& e) {
    EXPECT_NE(std::string(e.what()).find("short by 50"), std::string::npos) << e.what();
  }
}

TEST(FromTrain, FirstNRecords) {
  const DatasetHandle src = numbered(500, Split::train);
  CalibrationPolicy p;
  p.mode = CalibrationMode::from_train;
  p.n = 128;
  const CalibrationResult r = build_calibration_set(src, p);
  ASSERT_EQ(r.calibration.sequences.size(), 128u);
  for (std::size_t i = 0; i < 128; ++i) EXPECT_EQ(index_of(r.calibration.sequences[i]), i);
  EXPECT_EQ(r.remaining.size(), 372u);
  EXPECT_EQ(r.remaining.source_index(0), 128u);
}

TEST(FromTrain, Errors) {
  CalibrationPolicy p;
  p.mode = CalibrationMode::from_train;
  EXPECT_THROW(build_calibration_set(numbered(500, Split::test), p), SizeError);
  EXPECT_THROW(build_calibration_set(numbered(100, Split::validation), p), SizeError);
}

TEST(CalibrationPolicy, ZeroNKeepsSource) {
  CalibrationPolicy p;
  p.n = 0;
  const DatasetHandle src = numbered(50);
  const CalibrationResult r = build_calibration_set(src, p);
  EXPECT_TRUE(r.calibration.sequences.empty());
  EXPECT_EQ(r.remaining.size(), 50u);
}

TEST(CalibrationPolicy, MaxTokensTruncates) {
  CalibrationPolicy p;
  p.n = 4;
  p.reserve = 10;
  p.max_tokens = 2;
  for (const auto& s : build_calibration_set(numbered(20), p).calibration.sequences) EXPECT_EQ(s.size(), 2u);
}

TEST(C4Segments, OffsetsFollowPinnedGenerator) {
  const TokenSeq corpus = load_corpus(testing::data_dir() / "corpus" / "train.mqtk");
  const CalibrationSet c = build_c4_style_segments(corpus, 128, 512, 42);
  ASSERT_EQ(c.sequences.size(), 128u);
  SplitMix64 rng(42);
  for (std::size_t i = 0; i < 128; ++i) {
    const auto off = rng.uniform_below(corpus.size() - 512 + 1);
    EXPECT_EQ(c.provenance.selected[i], off);
    ASSERT_EQ(c.sequences[i].size(), 512u);
    EXPECT_TRUE(std::equal(c.sequences[i].begin(), c.sequences[i].end(), corpus.begin() + off));
  }
  EXPECT_EQ(c, build_c4_style_segments(corpus, 128, 512, 42));
}

TEST(C4Segments, EdgeCases) {
  const TokenSeq corpus{1, 2, 3, 4};
  for (const auto& s : build_c4_style_segments(corpus, 5, 4, 1).sequences) EXPECT_EQ(s, corpus);
  EXPECT_THROW(build_c4_style_segments(corpus, 1, 5, 1), SizeError);
}

TEST(DatasetHandle, SubsetConcatenateLabel) {
  const DatasetHandle h = numbered(5, Split::test, "exam", "stem");
  EXPECT_EQ(h.label(), "exam/stem");
  const std::vector<std::size_t> pick{4, 1};
  const DatasetHandle s = h.subset(pick);
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s.source_index(0), 4u);
  EXPECT_EQ(index_of(s.record(1)), 1u);
  EXPECT_EQ(s.concatenated(), (TokenSeq{4, 0, 7, '\n', 1, 0, 7}));
  EXPECT_EQ(h.first_out_of_vocab(8), std::nullopt);
  EXPECT_EQ(h.first_out_of_vocab(4), std::optional<std::size_t>{2});
}

TEST(Scenarios, CrossDatasetGrid) {
  std::vector<DatasetHandle> ds;
  for (const char* id : {"a", "b", "c", "d"}) ds.push_back(numbered(3, Split::test, id));
  const std::vector<Shift> kinds{Shift::cross_dataset};
  const auto cells = enumerate_scenarios(ds, kinds);
  ASSERT_EQ(cells.size(), 16u);
  EXPECT_EQ(std::count_if(cells.begin(), cells.end(), [](const ScenarioSpec& s) { return s.iid(); }), 4);
  for (const auto& c : cells) EXPECT_NO_THROW(c.validate());
  // Test-major order.
  EXPECT_EQ(cells[0].test_source.dataset_id(), "a");
  EXPECT_EQ(cells[4].test_source.dataset_id(), "b");
  const std::vector<std::size_t> shots{0, 3};
  EXPECT_EQ(enumerate_scenarios(ds, kinds, shots).size(), 32u);
  EXPECT_EQ(enumerate_scenarios(std::span(ds).first(1), kinds).size(), 1u);
}

TEST(Scenarios, CrossSubjectGrid) {
  std::vector<DatasetHandle> ds;
  for (const char* tag : {"humanities", "social_science", "stem"}) ds.push_back(numbered(3, Split::test, "exam", tag));
  const std::vector<Shift> kinds{Shift::cross_subject};
  const auto cells = enumerate_scenarios(ds, kinds);
  ASSERT_EQ(cells.size(), 9u);
  EXPECT_EQ(std::count_if(cells.begin(), cells.end(), [](const ScenarioSpec& s) { return s.iid(); }), 3);
  const std::vector<Shift> both{Shift::cross_subject, Shift::cross_dataset};
  EXPECT_EQ(enumerate_scenarios(ds, both).size(), 9u);
}

TEST(Scenarios, ValidateRejectsInconsistentShift) {
  ScenarioSpec s{numbered(3, Split::test, "a"), numbered(3, Split::test, "b"), Shift::iid};
  EXPECT_THROW(s.validate(), ScenarioError);
  s.shift = Shift::cross_subject;
  EXPECT_THROW(s.validate(), ScenarioError);
}

TEST(Synthetic, DeterministicAndDistinct) {
  const auto& styles = synthetic::sentiment_styles();
  ASSERT_GE(styles.size(), 4u);
  const DatasetHandle a = synthetic::sentiment_dataset(styles[0], 50, 1);
  const DatasetHandle b = synthetic::sentiment_dataset(styles[0], 50, 1);
  ASSERT_EQ(a.size(), 50u);
  for (std::size_t i = 0; i < 50; ++i) {
    EXPECT_TRUE(std::ranges::equal(a.record(i), b.record(i)));
    ASSERT_TRUE(a.meta(i).gold.has_value());
    EXPECT_LT(*a.meta(i).gold, synthetic::sentiment_labels().size());
  }
  EXPECT_EQ(a.task, "SA");
  EXPECT_EQ(synthetic::web_corpus(1000, 3), synthetic::web_corpus(1000, 3));
  EXPECT_EQ(synthetic::web_corpus(1000, 3).size(), 1000u);
}

TEST(Synthetic, StylesHaveDifferentByteStatistics) {
  const auto& styles = synthetic::sentiment_styles();
  std::vector<std::vector<double>> hist;
  for (const auto& s : styles) {
    const TokenSeq all = synthetic::sentiment_dataset(s, 200, 5).concatenated();
    std::vector<double> h(256, 0.0);
    for (TokenId t : all) h[t] += 1.0 / static_cast<double>(all.size());
    hist.push_back(h);
  }
  for (std::size_t i = 0; i < hist.size(); ++i) {
    for (std::size_t j = i + 1; j < hist.size(); ++j) {
      double tv = 0;
      for (std::size_t k = 0; k < 256; ++k) tv += std::abs(hist[i][k] - hist[j][k]) / 2;
      EXPECT_GT(tv, 0.1) << styles[i].dataset_id << " vs " << styles[j].dataset_id;
    }
  }
}

TEST(Synthetic, ExamSubjects) {
  for (const auto& subject : synthetic::exam_subjects()) {
    const DatasetHandle h = synthetic::exam_dataset(subject, 20, 4);
    EXPECT_EQ(h.dataset_id(), "exam");
    EXPECT_EQ(h.subject_tag(), subject);
    EXPECT_EQ(h.choices, (std::vector<std::string>{"A", "B", "C", "D"}));
  }
}

}  // namespace
}  // namespace mqnt
