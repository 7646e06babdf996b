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

#ifndef MODELWRIGHT_LANG_MINIAPL_H_
#define MODELWRIGHT_LANG_MINIAPL_H_

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "modelwright/ir/problem.h"
#include "modelwright/lang/source.h"

namespace modelwright::lang {

// Metadata key holding the objective label ("obj" when absent).
inline constexpr char kObjectiveNameKey[] = "objective_name";

using ParseResult = std::variant<ProblemIR, std::vector<Diagnostic>>;

// Parses MiniAPL. Never throws; any input yields either an IR passing
// Validate() or at least one error diagnostic.
ParseResult Parse(const SourceFile& source);
ParseResult Parse(std::string_view text);

// Deterministic printer. Fails with InvalidIR when Validate() reports
// violations or a parameter index cannot be spelled in MiniAPL.
absl::StatusOr<SourceFile> Print(const ProblemIR& problem);

// Parse plus semantic validation. Empty means the program is accepted.
std::vector<Diagnostic> GrammarCheck(const SourceFile& source);

// Closest keyword within edit distance 1 among `candidates`.
std::optional<std::string> SuggestKeyword(
    std::string_view word, const std::vector<std::string>& candidates);

std::size_t EditDistance(std::string_view a, std::string_view b);

}  // namespace modelwright::lang

#endif  // MODELWRIGHT_LANG_MINIAPL_H_
