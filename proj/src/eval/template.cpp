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

#include "mqnt/eval/template.hpp"

#include <json.hpp>

#include "mqnt/errors.hpp"

namespace mqnt {

std::string_view to_string(Task t) {
  switch (t) {
    case Task::EQA: return "EQA";
    case Task::SA: return "SA";
    case Task::NLI: return "NLI";
    case Task::TD: return "TD";
    case Task::CDS: return "CDS";
    case Task::generic_mc: return "generic_mc";
  }
  return "?";
}

Task parse_task(std::string_view s) {
  for (auto t : {Task::EQA, Task::SA, Task::NLI, Task::TD, Task::CDS, Task::generic_mc}) {
    if (to_string(t) == s) return t;
  }
  throw TemplateError("unknown task '" + std::string(s) + "'");
}

namespace {

std::string_view to_string(PromptLayout l) { return l == PromptLayout::boss ? "boss" : "ceval"; }

PromptLayout parse_layout(std::string_view s) {
  if (s == "boss") return PromptLayout::boss;
  if (s == "ceval") return PromptLayout::ceval;
  throw TemplateError("unknown layout '" + std::string(s) + "'");
}

PromptTemplate make_builtin(Task task) {
  PromptTemplate t;
  t.task = task;
  switch (task) {
    case Task::EQA:
      t.instruction =
          "Solve the extractive question answering task. Refering to the passage below and extract answer for the "
          "question. The answer should be the shortest phrase as it can be.";
      t.format = "Passage: {{Passage}} // Question: {{Question}} // Answer: {{Answer}}.";
      t.input = "Passage: {{input_1}} // Question: {{input_2}} // Answer:";
      t.input_slots = {{"input_1", "Passage"}, {"input_2", "Question"}};
      t.answer_slot = "Answer";
      t.choice_prefix = " ";
      break;
    case Task::SA:
      t.instruction = "Solve the sentiment analysis task. Options for sentiment: negative, positive, neutral.";
      t.format = "Text: {{Text}} // Prediction: {{Prediction}}";
      t.input = "Text: {{input}} // Prediction:";
      t.input_slots = {{"input", "Text"}};
      t.answer_slot = "Prediction";
      t.choice_prefix = " ";
      break;
    case Task::NLI:
      t.instruction =
          "Solve the NLI task. Options for entailment relationship: entailment, neutral, contradiction.";
      t.format = "Premise: {{Premise}} // Hypothesis: {{Hypothesis}} // Prediction: {{Prediction}}";
      t.input = "Premise: {{input_1}} // Hypothesis: {{input_2}} // Prediction:";
      t.input_slots = {{"input_1", "Premise"}, {"input_2", "Hypothesis"}};
      t.answer_slot = "Prediction";
      t.choice_prefix = " ";
      break;
    case Task::TD:
      t.instruction = "Solve the toxic detection task. Options for toxicity: benign, toxic.";
      t.format = "Text: {{Text}} // Prediction: {{Prediction}}";
      t.input = "Text: {{input}} // Prediction:";
      t.input_slots = {{"input", "Text"}};
      t.answer_slot = "Prediction";
      t.choice_prefix = " ";
      break;
    case Task::CDS:
      t.layout = PromptLayout::ceval;
      t.instruction = "以下是中国考试的单项选择题，请选出其中的正确答案。";
      t.format = "{{Question}}\nA. {{A}}\nB. {{B}}\nC. {{C}}\nD. {{D}}\n答案：{{Answer}}";
      t.input = "{{Question}}\nA. {{A}}\nB. {{B}}\nC. {{C}}\nD. {{D}}\n答案：";
      t.input_slots = {{"Question", "Question"}, {"A", "A"}, {"B", "B"}, {"C", "C"}, {"D", "D"}};
      t.answer_slot = "Answer";
      break;
    case Task::generic_mc:
      t.instruction = "Answer the multiple choice question.";
      t.format = "Question: {{Question}} // Answer: {{Answer}}";
      t.input = "Question: {{input}} // Answer:";
      t.input_slots = {{"input", "Question"}};
      t.answer_slot = "Answer";
      t.choice_prefix = " ";
      break;
  }
  return t;
}

const std::string* find_field(const Fields& fields, std::string_view name) {
  for (const auto& [k, v] : fields) {
    if (k == name) return &v;
  }
  return nullptr;
}

// Replaces every {{name}} in `pattern` with lookup(name).
template <class Lookup>
void fill_slots(std::string& out, std::string_view pattern, Lookup lookup) {
  std::size_t pos = 0;
  while (pos < pattern.size()) {
    const std::size_t open = pattern.find("{{", pos);
    if (open == std::string_view::npos) {
      out.append(pattern.substr(pos));
      return;
    }
    const std::size_t close = pattern.find("}}", open + 2);
    if (close == std::string_view::npos) throw TemplateError("unterminated placeholder in '" + std::string(pattern) + "'");
    out.append(pattern.substr(pos, open - pos));
    const std::string_view name = pattern.substr(open + 2, close - open - 2);
    const std::string* value = lookup(name);
    if (!value) throw TemplateError("no value for slot '" + std::string(name) + "'");
    out.append(*value);
    pos = close + 2;
  }
}

}  // namespace

const PromptTemplate& builtin_template(Task task) {
  static const std::vector<PromptTemplate> all = [] {
    std::vector<PromptTemplate> v;
    for (auto t : {Task::EQA, Task::SA, Task::NLI, Task::TD, Task::CDS, Task::generic_mc}) v.push_back(make_builtin(t));
    return v;
  }();
  return all[static_cast<std::size_t>(task)];
}

PromptTemplate template_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    PromptTemplate t;
    t.task = parse_task(j.at("task").get<std::string>());
    t.layout = parse_layout(j.at("layout").get<std::string>());
    t.instruction = j.at("instruction").get<std::string>();
    t.format = j.at("format").get<std::string>();
    t.input = j.at("input").get<std::string>();
    for (const auto& pair : j.at("input_slots")) {
      t.input_slots.emplace_back(pair.at(0).get<std::string>(), pair.at(1).get<std::string>());
    }
    t.answer_slot = j.at("answer_slot").get<std::string>();
    t.choice_prefix = j.value("choice_prefix", std::string{});
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw TemplateError(std::string("template file: ") + e.what());
  }
}

std::string template_to_json(const PromptTemplate& t) {
  nlohmann::ordered_json j;
  j["task"] = to_string(t.task);
  j["layout"] = to_string(t.layout);
  j["instruction"] = t.instruction;
  j["format"] = t.format;
  j["input"] = t.input;
  j["input_slots"] = nlohmann::ordered_json::array();
  for (const auto& [slot, field] : t.input_slots) j["input_slots"].push_back({slot, field});
  j["answer_slot"] = t.answer_slot;
  j["choice_prefix"] = t.choice_prefix;
  return j.dump(2, ' ', false) + "\n";
}

std::string render_prompt_text(const PromptTemplate& t, std::size_t shots, std::span<const Exemplar> exemplars,
                               const Fields& item) {
  if (shots > exemplars.size()) {
    throw ShotError("requested " + std::to_string(shots) + " shots, " + std::to_string(exemplars.size()) +
                    " exemplars available");
  }
  std::string out;
  if (t.layout == PromptLayout::boss) {
    out += "### Instruction ###\n" + t.instruction + "\n### Format ###\n" + t.format + "\n";
  } else {
    out += t.instruction + "\n";
  }
  for (std::size_t i = 0; i < shots; ++i) {
    const Exemplar& ex = exemplars[i];
    fill_slots(out, t.format, [&](std::string_view name) -> const std::string* {
      if (name == t.answer_slot) return &ex.answer;
      return find_field(ex.fields, name);
    });
    out += '\n';
  }
  if (t.layout == PromptLayout::boss) out += "### Input ###\n";
  fill_slots(out, t.input, [&](std::string_view name) -> const std::string* {
    for (const auto& [slot, field] : t.input_slots) {
      if (slot == name) return find_field(item, field);
    }
    return nullptr;
  });
  return out;
}

TokenSeq render_prompt(const PromptTemplate& t, std::size_t shots, std::span<const Exemplar> exemplars,
                       const Fields& item) {
  return bytes_to_tokens(render_prompt_text(t, shots, exemplars, item));
}

std::vector<Exemplar> exemplars_from(const DatasetHandle& h) {
  std::vector<Exemplar> out;
  if (h.empty()) return out;
  if (!h.has_meta()) throw TemplateError("dataset '" + h.label() + "' has no record fields for exemplars");
  out.reserve(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    const RecordMeta& m = h.meta(i);
    const auto& choices = h.choices_for(i);
    if (!m.gold || *m.gold >= choices.size()) {
      throw TemplateError("record " + std::to_string(i) + " of '" + h.label() + "' has no valid gold answer");
    }
    out.push_back({m.fields, choices[*m.gold]});
  }
  return out;
}

std::size_t default_shots(Task task) {
  switch (task) {
    case Task::EQA: return 1;
    case Task::SA: return 3;
    case Task::NLI: return 3;
    case Task::TD: return 2;
    default: return 5;
  }
}

}  // namespace mqnt
