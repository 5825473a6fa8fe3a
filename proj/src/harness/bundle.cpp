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

#include "mqnt/harness/bundle.hpp"

#include "mqnt/calib/synthetic.hpp"
#include "mqnt/eval/template.hpp"
#include "mqnt/io/byte_io.hpp"
#include "mqnt/io/corpus_file.hpp"

namespace mqnt {

void write_data_bundle(const std::filesystem::path& dir, const BundleSpec& spec) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "datasets");
  fs::create_directories(dir / "corpus");
  fs::create_directories(dir / "templates");
  std::uint64_t seed = spec.seed;
  for (const auto& style : synthetic::sentiment_styles()) {
    save_dataset(synthetic::sentiment_dataset(style, spec.sentiment_records, seed++),
                 dir / "datasets" / (style.dataset_id + ".mqtk"));
  }
  for (const auto& subject : synthetic::exam_subjects()) {
    save_dataset(synthetic::exam_dataset(subject, spec.exam_records, seed++),
                 dir / "datasets" / ("exam_" + subject + ".mqtk"));
  }
  save_corpus(bytes_to_tokens(synthetic::web_corpus(spec.train_bytes, seed++)), dir / "corpus" / "train.mqtk");
  save_corpus(bytes_to_tokens(synthetic::web_corpus(spec.eval_bytes, seed++)), dir / "corpus" / "eval.mqtk");
  for (auto t : {Task::EQA, Task::SA, Task::NLI, Task::TD, Task::CDS, Task::generic_mc}) {
    write_file_atomic(dir / "templates" / (std::string(to_string(t)) + ".json"), template_to_json(builtin_template(t)));
  }
}

ModelConfig tiny_model_config() {
  ModelConfig c;
  c.vocab_size = 256;
  c.context_len = 128;
  c.d_model = 64;
  c.n_layers = 2;
  c.n_heads = 4;
  c.d_ff = 256;
  return c;
}

FitOptions tiny_fit_options(std::uint64_t seed) {
  FitOptions o;
  o.seed = seed;
  o.seq_len = 64;
  return o;
}

Model fit_tiny_model(std::span<const TokenId> corpus, std::uint64_t seed, FitReport* report) {
  Model m = Model::initialize(tiny_model_config(), seed);
  FitReport r = fit_next_token(m, corpus, tiny_fit_options(seed));
  if (report) *report = std::move(r);
  return m;
}

}  // namespace mqnt
