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

#ifndef MODELWRIGHT_IR_VALIDATE_H_
#define MODELWRIGHT_IR_VALIDATE_H_

#include <string>
#include <vector>

#include "modelwright/ir/problem.h"

namespace modelwright {

enum class ViolationCode {
  kNoVariables,
  kInvalidName,
  kDuplicateVariable,
  kUndeclaredVariable,
  kInvertedBounds,
  kBinaryBounds,
  kMissingBinding,
  kDuplicateBinding,
  kParameterNameClash,
  kInvalidBinding,
};

const char* ViolationCodeName(ViolationCode code);

struct Violation {
  ViolationCode code;
  // The offending variable, constraint, or parameter name.
  std::string element;
  std::string message;

  bool operator==(const Violation&) const = default;
};

// Empty iff every ProblemIR invariant holds. Violations are data; this never
// fails.
std::vector<Violation> Validate(const ProblemIR& problem);

// One line per violation, for feedback prompts and error messages.
std::string DescribeViolations(const std::vector<Violation>& violations);

}  // namespace modelwright

#endif  // MODELWRIGHT_IR_VALIDATE_H_
