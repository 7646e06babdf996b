// Copyright 2026 The Modelwright Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "modelwright/llm/prompts.h"

#include <set>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "modelwright/common/status.h"

namespace modelwright::llm {
namespace {

bool IsIdentStart(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool IsIdentChar(char c) { return IsIdentStart(c) || (c >= '0' && c <= '9'); }

// Length of the `{Identifier}` placeholder at text[i], or 0.
std::size_t PlaceholderAt(std::string_view text, std::size_t i) {
  if (text[i] != '{' || i + 1 >= text.size() || !IsIdentStart(text[i + 1])) {
    return 0;
  }
  std::size_t j = i + 1;
  while (j < text.size() && IsIdentChar(text[j])) ++j;
  if (j >= text.size() || text[j] != '}') return 0;
  return j - i + 1;
}

}  // namespace

std::vector<std::string> Placeholders(const PromptTemplate& prompt) {
  std::vector<std::string> names;
  std::set<std::string> seen;
  const std::string_view text = prompt.text;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const std::size_t length = PlaceholderAt(text, i);
    if (length == 0) continue;
    std::string name(text.substr(i + 1, length - 2));
    if (seen.insert(name).second) names.push_back(std::move(name));
    i += length - 1;
  }
  return names;
}

absl::StatusOr<std::string> Render(
    const PromptTemplate& prompt,
    const std::map<std::string, std::string>& bindings) {
  std::vector<std::string> missing;
  for (const std::string& name : Placeholders(prompt)) {
    if (bindings.count(name) == 0) missing.push_back(name);
  }
  if (!missing.empty()) {
    return MakeError(ErrorKind::kUnboundPlaceholder,
                     absl::StrCat("template '", prompt.name,
                                  "' has unbound placeholder(s): ",
                                  absl::StrJoin(missing, ", ")));
  }
  std::string out;
  const std::string_view text = prompt.text;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const std::size_t length = PlaceholderAt(text, i);
    if (length == 0) {
      out += text[i];
      continue;
    }
    out += bindings.at(std::string(text.substr(i + 1, length - 2)));
    i += length - 1;
  }
  return out;
}

const PromptTemplate& SystemInstruction() {
  static const auto* const kTemplate = new PromptTemplate{
      "system_instruction",
      "You are an operation research expert and your task is to model the "
      "optimization problem given its description in natural language."};
  return *kTemplate;
}

const PromptTemplate& OneShotFormulation() {
  static const auto* const kTemplate = new PromptTemplate{
      "one_shot_formulation",
      "You are an expert in mathematical programming. Please refer to Case 1 "
      "and provide a JSON expression for Problem 1 with explanations. Case1: "
      "{Question_and_Answer_of_Case1}, Problem1: {Question}."};
  return *kTemplate;
}

const PromptTemplate& FormulationFeedback() {
  static const auto* const kTemplate = new PromptTemplate{
      "formulation_feedback",
      "Your previous JSON expression for Problem 1 could not be used.\n"
      "Problem1: {Question}\n"
      "Previous answer: {Previous_Output}\n"
      "Problems found:\n{Diagnostics}\n"
      "Reply with a corrected JSON expression for Problem 1 in the same "
      "format as Case 1."};
  return *kTemplate;
}

const PromptTemplate& RelevanceCheck() {
  static const auto* const kTemplate = new PromptTemplate{
      "relevance_check",
      "Does the following message ask for an optimization or decision model "
      "(for example production planning, allocation, scheduling, blending or "
      "transportation)? Answer with JSON only: {\"relevant\": true} or "
      "{\"relevant\": false}.\nMessage: {Description}"};
  return *kTemplate;
}

const PromptTemplate& CompletenessCheck() {
  static const auto* const kTemplate = new PromptTemplate{
      "completeness_check",
      "Check whether the optimization problem below states its decision "
      "variables, its objective, its constraints and the parameter values "
      "needed to build a model. Answer with JSON only: {\"complete\": "
      "true|false, \"missing\": [any of \"objective\", \"variables\", "
      "\"constraints\", \"parameters\"], \"follow_up_question\": \"one "
      "question asking the user for everything missing, empty if "
      "complete\"}.\nProblem: {Description}"};
  return *kTemplate;
}

const PromptTemplate& InterpretationParaphrase() {
  static const auto* const kTemplate = new PromptTemplate{
      "interpretation_paraphrase",
      "Rewrite this solver report as a short answer for the person who asked "
      "the question. Keep every number and name exactly as written.\n"
      "Report:\n{Report}"};
  return *kTemplate;
}

const PromptTemplate& BootstrapGeneration() {
  static const auto* const kTemplate = new PromptTemplate{
      "bootstrap_generation",
      "Here is an optimization problem with its JSON formulation.\n"
      "Problem: {Seed_Description}\n"
      "Formulation: {Seed_Formulation}\n"
      "Write a new problem of the same kind but with a different setting and "
      "different numbers (variation {Variant}), together with its "
      "formulation in the same JSON format. Answer with JSON only: "
      "{\"description\": \"...\", \"formulation\": {...}}."};
  return *kTemplate;
}

const std::string& DefaultCase() {
  static const auto* const kCase = new std::string(
      "A workshop makes chairs and tables. A chair needs 5 units of wood and "
      "10 hours of labor and earns 45 dollars; a table needs 20 units of wood "
      "and 15 hours of labor and earns 80 dollars. There are 400 units of "
      "wood and 450 hours of labor. How many of each should be made to "
      "maximize profit? Answer: Let chairs and tables be the integer numbers "
      "produced. {\"variables\": [{\"name\": \"chairs\", \"domain\": "
      "\"integer\"}, {\"name\": \"tables\", \"domain\": \"integer\"}], "
      "\"objective\": {\"sense\": \"maximize\", \"terms\": {\"chairs\": 45, "
      "\"tables\": 80}}, \"constraints\": [{\"name\": \"wood\", \"terms\": "
      "{\"chairs\": 5, \"tables\": 20}, \"sense\": \"<=\", \"rhs\": 400}, "
      "{\"name\": \"labor\", \"terms\": {\"chairs\": 10, \"tables\": 15}, "
      "\"sense\": \"<=\", \"rhs\": 450}]}");
  return *kCase;
}

std::optional<nlohmann::json> ExtractFirstJsonObject(std::string_view text) {
  for (std::size_t start = text.find('{'); start != std::string_view::npos;
       start = text.find('{', start + 1)) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = start; i < text.size(); ++i) {
      const char c = text[i];
      if (in_string) {
        if (escaped) {
          escaped = false;
        } else if (c == '\\') {
          escaped = true;
        } else if (c == '"') {
          in_string = false;
        }
        continue;
      }
      if (c == '"') {
        in_string = true;
      } else if (c == '{') {
        ++depth;
      } else if (c == '}' && --depth == 0) {
        nlohmann::json doc = nlohmann::json::parse(
            text.substr(start, i - start + 1), nullptr, false);
        if (!doc.is_discarded() && doc.is_object()) return doc;
        break;
      }
    }
  }
  return std::nullopt;
}

}  // namespace modelwright::llm
