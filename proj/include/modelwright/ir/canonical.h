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

#ifndef MODELWRIGHT_IR_CANONICAL_H_
#define MODELWRIGHT_IR_CANONICAL_H_

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "modelwright/ir/problem.h"

namespace modelwright {

// kStrict keeps coefficients verbatim. kScaled divides each inequality by the
// magnitude of its first (lexicographic) coefficient and makes that
// coefficient +1 in each equality.
enum class EquivalenceMode { kStrict, kScaled };

const char* EquivalenceModeName(EquivalenceMode mode);
std::optional<EquivalenceMode> ParseEquivalenceMode(const std::string& text);

enum class CanonicalSense { kLe, kLt, kEq };

const char* CanonicalSenseSymbol(CanonicalSense sense);

using CanonicalTerms = std::vector<std::pair<std::string, Rational>>;

struct CanonicalVariable {
  std::string name;
  VariableDomain domain;
  std::optional<Rational> lower;
  std::optional<Rational> upper;

  bool operator==(const CanonicalVariable&) const = default;
  bool operator<(const CanonicalVariable& other) const;
  std::string ToString() const;
};

struct CanonicalObjective {
  ObjectiveSense sense;
  CanonicalTerms terms;
  Rational constant;

  bool operator==(const CanonicalObjective&) const = default;
  std::string ToString() const;
};

struct CanonicalConstraint {
  CanonicalTerms terms;
  CanonicalSense sense;
  Rational rhs;

  bool operator==(const CanonicalConstraint&) const = default;
  bool operator<(const CanonicalConstraint& other) const;
  std::string ToString() const;
};

// Normalized formulation; two formulations are equivalent under a mode iff
// their canonical forms compare equal.
struct CanonicalForm {
  // Sorted by name.
  std::vector<CanonicalVariable> variables;
  CanonicalObjective objective;
  // Sorted; duplicates are kept, so this is a multiset.
  std::vector<CanonicalConstraint> constraints;

  bool operator==(const CanonicalForm&) const = default;
  std::string ToString() const;
};

// Requires a valid, fully numeric problem (InvalidIR otherwise). Never drops
// or merges constraints, redundant or not.
absl::StatusOr<CanonicalForm> Canonicalize(
    const ProblemIR& problem, EquivalenceMode mode = EquivalenceMode::kStrict);

// Rebuilds a ProblemIR whose canonical form is `form`.
ProblemIR ToProblem(const CanonicalForm& form);

// Renames variables everywhere in `problem`. Names missing from `renaming`
// are kept.
ProblemIR RenameVariables(const ProblemIR& problem,
                          const std::map<std::string, std::string>& renaming);

// Searches for a bijection from `candidate` variable names onto `reference`
// names under which both canonicalize identically. Variables are grouped by
// a rename-invariant signature and only same-signature pairs are tried.
std::optional<std::map<std::string, std::string>> FindAlphaRenaming(
    const ProblemIR& candidate, const ProblemIR& reference,
    EquivalenceMode mode = EquivalenceMode::kStrict);

}  // namespace modelwright

#endif  // MODELWRIGHT_IR_CANONICAL_H_
