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

#ifndef MODELWRIGHT_PIPELINE_STAGES_H_
#define MODELWRIGHT_PIPELINE_STAGES_H_

#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"
#include "modelwright/ir/problem.h"
#include "modelwright/lang/source.h"
#include "modelwright/llm/backend.h"
#include "modelwright/llm/prompts.h"
#include "modelwright/solver/solver.h"

namespace modelwright::pipeline {

// Element classes a description can lack, in reporting order.
inline constexpr const char* kCompletenessElements[] = {
    "objective", "variables", "constraints", "parameters"};

struct CompletenessReport {
  bool complete = false;
  std::vector<std::string> missing;
  // Nonempty iff !complete.
  std::string follow_up_question;
  // Set when the keyword heuristic stood in for the backend.
  bool used_fallback = false;

  bool operator==(const CompletenessReport&) const = default;
};

// User-message text of each backend request; scripted fixtures key on these.
std::string RelevanceRequest(const std::string& description);
std::string CompletenessRequest(const std::string& description);
// `prompt` may use {Question} and {Question_and_Answer_of_Case1}.
std::string FormulationRequest(
    const std::string& description,
    const llm::PromptTemplate& prompt = llm::OneShotFormulation());
std::string FeedbackRequest(const std::string& description,
                            const std::string& previous_reply,
                            const std::string& diagnostics);
std::string ParaphraseRequest(const std::string& report);

nlohmann::json ToJson(const CompletenessReport& report);
CompletenessReport CompletenessFromJson(const nlohmann::json& doc);

// Errors: Precondition (empty text), BackendUnavailable, Timeout,
// MalformedModelOutput.
absl::StatusOr<bool> CheckRelevance(const std::string& description,
                                    llm::Backend& backend,
                                    llm::Transcript* transcript = nullptr);

// Deterministic stand-in: objective verbs, limit phrases ("at most",
// "at least", ...), quantity questions and digits.
CompletenessReport KeywordCompleteness(const std::string& description);

// Falls back to KeywordCompleteness when the backend is unreachable, times
// out or answers without the expected JSON. Errors: Precondition.
absl::StatusOr<CompletenessReport> CheckCompleteness(
    const std::string& description, llm::Backend& backend,
    llm::Transcript* transcript = nullptr);

// Solution properties the user asked for, from the formulation JSON
// ("requirements": {"integer": true | [names], "nonnegative": ...,
// "variables": [names]}) and from wording in the description.
struct Requirements {
  bool all_integer = false;
  std::vector<std::string> integer;
  bool all_nonnegative = false;
  std::vector<std::string> nonnegative;
  std::vector<std::string> required_variables;

  bool empty() const;
  bool operator==(const Requirements&) const = default;
};

nlohmann::json ToJson(const Requirements& requirements);
Requirements RequirementsFromJson(const nlohmann::json& doc);
Requirements RequirementsFromDescription(const std::string& description);
Requirements MergeRequirements(Requirements a, const Requirements& b);

struct Formulation {
  ProblemIR problem;
  Requirements requirements;
  std::string reply;
};

// One request to the backend. Errors: MalformedModelOutput, InvalidIR and
// backend errors.
absl::StatusOr<Formulation> Formulate(
    const std::string& description, llm::Backend& backend,
    llm::Transcript* transcript = nullptr,
    const llm::PromptTemplate& prompt = llm::OneShotFormulation());

struct Attempt {
  std::string reply;
  // Empty when the attempt produced a usable formulation.
  std::string error_kind;
  std::string diagnostics;
};

nlohmann::json ToJson(const Attempt& attempt);

struct FormulationOutcome {
  std::optional<Formulation> formulation;
  std::vector<Attempt> attempts;
  // OK iff formulation is set.
  absl::Status status;
};

// Formulate, then re-prompt with the prior reply and its diagnostics up to
// `max_retries` times. An attempt counts as failed when its JSON does not
// parse or validate, or when the printed code fails GrammarCheck. Backend
// errors end the loop at once.
FormulationOutcome FormulateWithRetry(
    const std::string& description, llm::Backend& backend, int max_retries,
    llm::Transcript* transcript = nullptr,
    const llm::PromptTemplate& prompt = llm::OneShotFormulation());

struct CodeCheck {
  lang::SourceFile code;
  std::vector<lang::Diagnostic> diagnostics;
};

// Prints `problem` and grammar-checks the result. Errors: InvalidIR.
absl::StatusOr<CodeCheck> GenerateAndCheckCode(const ProblemIR& problem);

enum class SensefulKind { kNonIntegerValue, kNegativeValue, kMissingVariable };

const char* SensefulKindName(SensefulKind kind);

struct SensefulViolation {
  SensefulKind kind;
  std::string variable;
  std::optional<double> value;
  // Addressed to the user.
  std::string question;

  bool operator==(const SensefulViolation&) const = default;
};

nlohmann::json ToJson(const SensefulViolation& violation);
std::optional<SensefulViolation> SensefulFromJson(const nlohmann::json& doc);

// Empty unless `result` is Optimal and misses a requirement.
std::vector<SensefulViolation> SensefulCheck(
    const ProblemIR& problem, const solver::SolveResult& result,
    const Requirements& requirements, double tolerance = 1e-6);

enum class InterpretMode { kTemplate, kModel };

// Rounds to 9 decimals and prints the shortest form ("20", "2.5", "-0.125").
std::string FormatNumber(double value);

std::string TemplateInterpretation(const ProblemIR& problem,
                                   const solver::SolveResult& result);

// Model mode sends only the template text for paraphrasing. It keeps the
// template, with a notice, when the backend fails and whenever
// `uses_file_data` is set.
std::string Interpret(const ProblemIR& problem,
                      const solver::SolveResult& result, InterpretMode mode,
                      llm::Backend* backend = nullptr,
                      llm::Transcript* transcript = nullptr,
                      bool uses_file_data = false);

}  // namespace modelwright::pipeline

#endif  // MODELWRIGHT_PIPELINE_STAGES_H_
