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

#ifndef MODELWRIGHT_IR_PARAMETERS_H_
#define MODELWRIGHT_IR_PARAMETERS_H_

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "modelwright/ir/problem.h"

namespace modelwright {

using ParamTable = std::map<std::string, std::vector<Rational>>;
using ParamValue = std::variant<Rational, std::vector<Rational>, ParamTable>;
using ParamValues = std::map<std::string, ParamValue>;

// Replaces every parameter reference with its value and returns a fully
// numeric problem with no bindings left. Values come from `values` first,
// then from inline bindings in `problem`. Usage rules:
//   scalar  -> referenced without an index;
//   vector  -> referenced as p[i], and indices 1..n must all be used;
//   table   -> referenced as p[row,column].
// Errors: MissingParameter, DimensionMismatch.
absl::StatusOr<ProblemIR> SubstituteParameters(const ProblemIR& problem,
                                               const ParamValues& values);

}  // namespace modelwright

#endif  // MODELWRIGHT_IR_PARAMETERS_H_
