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

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mqnt/calib/dataset.hpp"
#include "mqnt/tokens.hpp"

namespace mqnt {

enum class Task { EQA, SA, NLI, TD, CDS, generic_mc };
std::string_view to_string(Task t);
Task parse_task(std::string_view s);

enum class PromptLayout {
  boss,   // "### Instruction ###" / "### Format ###" / "### Input ###" blocks
  ceval,  // instruction line, then filled question blocks
};

// A prompt template. `format` and `input` use {{Name}} placeholders.
// `input` placeholders are bound to record fields through `input_slots`
// (e.g. {"input", "Text"}); `format` placeholders name record fields
// directly, plus `answer_slot` for the exemplar's answer.
struct PromptTemplate {
  Task task = Task::generic_mc;
  PromptLayout layout = PromptLayout::boss;
  std::string instruction;
  std::string format;
  std::string input;
  std::vector<std::pair<std::string, std::string>> input_slots;
  std::string answer_slot;
  std::string choice_prefix;  // prepended to each choice string when scoring

  bool operator==(const PromptTemplate&) const = default;
};

// Built-in templates, byte-identical to the shipped data/templates files.
const PromptTemplate& builtin_template(Task task);

// Parses one template file (JSON). Throws TemplateError.
PromptTemplate template_from_json(std::string_view text);
std::string template_to_json(const PromptTemplate& t);

// A filled exemplar: record fields plus the gold answer string.
struct Exemplar {
  Fields fields;
  std::string answer;
};

// Instruction block, format block, the first `shots` exemplars filled into
// the format (each followed by a newline), then the input block ending at
// the answer cue. Throws ShotError when shots > exemplars.size() and
// TemplateError on a missing slot.
std::string render_prompt_text(const PromptTemplate& t, std::size_t shots, std::span<const Exemplar> exemplars,
                               const Fields& item);
TokenSeq render_prompt(const PromptTemplate& t, std::size_t shots, std::span<const Exemplar> exemplars,
                       const Fields& item);

// Exemplars from a handle's records (fields + gold choice text).
std::vector<Exemplar> exemplars_from(const DatasetHandle& h);

// Default shot count per task: EQA 1, SA 3, NLI 3, TD 2, others 5.
std::size_t default_shots(Task task);

}  // namespace mqnt
