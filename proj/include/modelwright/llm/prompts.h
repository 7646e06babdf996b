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

#ifndef MODELWRIGHT_LLM_PROMPTS_H_
#define MODELWRIGHT_LLM_PROMPTS_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"

namespace modelwright::llm {

// Text with `{Identifier}` placeholders. Braces not enclosing an identifier
// (JSON samples, say) are literal.
struct PromptTemplate {
  std::string name;
  std::string text;
};

std::vector<std::string> Placeholders(const PromptTemplate& prompt);

// Single-pass substitution; bound values are not rescanned. Fails with
// UnboundPlaceholder naming every missing binding.
absl::StatusOr<std::string> Render(
    const PromptTemplate& prompt,
    const std::map<std::string, std::string>& bindings);

const PromptTemplate& SystemInstruction();
// {Question_and_Answer_of_Case1}, {Question}
const PromptTemplate& OneShotFormulation();
// {Question}, {Previous_Output}, {Diagnostics}
const PromptTemplate& FormulationFeedback();
// {Description}
const PromptTemplate& RelevanceCheck();
// {Description}
const PromptTemplate& CompletenessCheck();
// {Report}
const PromptTemplate& InterpretationParaphrase();
// {Seed_Description}, {Seed_Formulation}, {Variant}
const PromptTemplate& BootstrapGeneration();

// Worked case used as Case 1: question text followed by its JSON answer.
const std::string& DefaultCase();

// First balanced {...} in `text` that parses as a JSON object.
std::optional<nlohmann::json> ExtractFirstJsonObject(std::string_view text);

}  // namespace modelwright::llm

#endif  // MODELWRIGHT_LLM_PROMPTS_H_
