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

#ifndef MODELWRIGHT_IR_JSON_IO_H_
#define MODELWRIGHT_IR_JSON_IO_H_

#include <string>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "modelwright/ir/problem.h"

namespace modelwright {

// ProblemIR <-> JSON. The document shape (also requested from the model):
//
//   {
//     "variables":   [{"name": "x", "domain": "integer", "lower": 0,
//                      "upper": null}],
//     "objective":   {"sense": "maximize", "terms": {"x": 3}, "constant": 0},
//     "constraints": [{"name": "c1", "terms": {"x": 1}, "sense": "<=",
//                      "rhs": "C"}],
//     "bindings":    [{"parameter": "C",
//                      "source": {"kind": "file", "path": "cap.csv",
//                                 "column": "cap", "row": 1}}],
//     "metadata":    {"note": "..."}
//   }
//
// Senses are "<=", ">=", "=", "<", ">". A coefficient is a JSON number, a
// string ("1/3", "C", "2*cost[1]") or {"constant": k, "params": {"C": 2}}.
// A missing "lower" means 0, a null one -infinity; a missing or null "upper"
// means +infinity. Reading is lenient about model-written variants: terms
// may be an object keyed by name, an array of {"variable", "coefficient"}
// objects, or a positional array; unnamed variables become x1, x2, ...
nlohmann::json ToJson(const ProblemIR& problem);
nlohmann::json ScalarToJson(const Scalar& value);
nlohmann::json RationalToJson(const Rational& value);

absl::StatusOr<ProblemIR> ProblemFromJson(const nlohmann::json& doc);
absl::StatusOr<Scalar> ScalarFromJson(const nlohmann::json& value);
absl::StatusOr<Rational> RationalFromJson(const nlohmann::json& value);

absl::StatusOr<ProblemIR> ParseProblemJson(const std::string& text);

}  // namespace modelwright

#endif  // MODELWRIGHT_IR_JSON_IO_H_
