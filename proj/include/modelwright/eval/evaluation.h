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

#ifndef MODELWRIGHT_EVAL_EVALUATION_H_
#define MODELWRIGHT_EVAL_EVALUATION_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"
#include "modelwright/ir/canonical.h"
#include "modelwright/ir/problem.h"
#include "modelwright/llm/backend.h"
#include "modelwright/llm/prompts.h"

namespace modelwright::eval {

enum class LanguageTag { kEn, kZh, kOther };

const char* LanguageTagName(LanguageTag tag);
LanguageTag ParseLanguageTag(const std::string& text);

struct EvalSample {
  std::string id;
  std::string description;
  ProblemIR gold;
  LanguageTag language = LanguageTag::kEn;
};

// {"id", "description", "language", "gold": ProblemIR JSON}
nlohmann::json ToJson(const EvalSample& sample);
// Errors: InvalidIR when the gold formulation does not validate.
absl::StatusOr<EvalSample> SampleFromJson(const nlohmann::json& doc);

// JSON Lines; blank lines are skipped. Errors: MissingFile, InvalidIR
// (message names the line), Precondition (duplicate ids).
absl::StatusOr<std::vector<EvalSample>> ParseDataset(const std::string& text);
absl::StatusOr<std::vector<EvalSample>> LoadDataset(const std::string& path);

enum class ElementClass { kNone, kVariables, kObjective, kConstraints };

const char* ElementClassName(ElementClass element);

struct MatchResult {
  bool match = false;
  // First difference in the order variables, objective, constraints.
  ElementClass element = ElementClass::kNone;
  std::string detail;
};

// Structural equality of canonical forms. Errors: InvalidIR.
absl::StatusOr<MatchResult> ExactMatch(
    const ProblemIR& predicted, const ProblemIR& gold,
    EquivalenceMode mode = EquivalenceMode::kStrict);

struct Verdict {
  std::string id;
  LanguageTag language = LanguageTag::kEn;
  bool correct = false;
  ElementClass mismatch = ElementClass::kNone;
  std::string detail;
  // Error kind when no formulation was produced.
  std::string reason;
  int attempts = 0;
};

struct EvalReport {
  std::string dataset;
  std::string backend;
  std::string prompt;
  std::string mode;
  // Ordered by sample id.
  std::vector<Verdict> verdicts;
  std::size_t correct = 0;
  double accuracy = 0;
};

struct EvalOptions {
  EquivalenceMode mode = EquivalenceMode::kStrict;
  // Also accept predictions equal to the gold under a renaming of
  // variables.
  bool alpha_rename = false;
  int max_retries = 2;
  int threads = 4;
};

double Accuracy(std::size_t correct, std::size_t total);

// Formulates every sample (with retries) and scores it; failed formulations
// are incorrect with their error kind as reason. Errors: Precondition
// (empty dataset).
absl::StatusOr<EvalReport> Evaluate(
    const std::string& dataset_name, const std::vector<EvalSample>& samples,
    llm::Backend& backend,
    const llm::PromptTemplate& prompt = llm::OneShotFormulation(),
    const EvalOptions& options = {});

nlohmann::json ToJson(const EvalReport& report);

// Aligned text table: one row per language tag present plus an overall row.
std::string FormatTable(const EvalReport& report);

struct Candidate {
  std::string id;
  std::string seed_id;
  std::string prompt;
  int variant = 0;
  std::string description;
  // Proposed formulation as returned (null when the reply had none).
  nlohmann::json proposed;
  bool valid = false;
  std::vector<std::string> issues;
  std::string raw_reply;
};

nlohmann::json ToJson(const Candidate& candidate);

// Asks the backend for `n` new problems, cycling through the seeds. Invalid
// proposals are kept and flagged. Errors: Precondition (no seeds, n < 1),
// backend errors.
absl::StatusOr<std::vector<Candidate>> BootstrapGenerate(
    const std::vector<EvalSample>& seeds, int n, llm::Backend& backend,
    const llm::PromptTemplate& prompt = llm::BootstrapGeneration());

// User text of the bootstrap request for `seed` and 1-based `variant`.
std::string BootstrapRequest(const EvalSample& seed, int variant,
                             const llm::PromptTemplate& prompt =
                                 llm::BootstrapGeneration());

// Appends one JSON line per candidate. Errors: StorageFailure.
absl::Status WriteQueue(const std::string& path,
                        const std::vector<Candidate>& candidates);

// Scripted replies answering each sample's formulation request with its gold
// formulation. Samples in `drop_last_constraint` answer with their last
// constraint removed.
std::map<std::string, std::string> BuildFixtures(
    const std::vector<EvalSample>& samples,
    const std::vector<std::string>& drop_last_constraint = {},
    const llm::PromptTemplate& prompt = llm::OneShotFormulation());

}  // namespace modelwright::eval

#endif  // MODELWRIGHT_EVAL_EVALUATION_H_
