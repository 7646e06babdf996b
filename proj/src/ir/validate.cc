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

#include "modelwright/ir/validate.h"

#include <set>
#include <variant>

#include "absl/strings/str_cat.h"

namespace modelwright {

const char* ViolationCodeName(ViolationCode code) {
  switch (code) {
    case ViolationCode::kNoVariables: return "NoVariables";
    case ViolationCode::kInvalidName: return "InvalidName";
    case ViolationCode::kDuplicateVariable: return "DuplicateVariable";
    case ViolationCode::kUndeclaredVariable: return "UndeclaredVariable";
    case ViolationCode::kInvertedBounds: return "InvertedBounds";
    case ViolationCode::kBinaryBounds: return "BinaryBounds";
    case ViolationCode::kMissingBinding: return "MissingBinding";
    case ViolationCode::kDuplicateBinding: return "DuplicateBinding";
    case ViolationCode::kParameterNameClash: return "ParameterNameClash";
    case ViolationCode::kInvalidBinding: return "InvalidBinding";
  }
  return "Unknown";
}

namespace {

class Validator {
 public:
  explicit Validator(const ProblemIR& p) : p_(p) {}

  std::vector<Violation> Run() {
    CheckVariables();
    CheckExpr(p_.objective.expr, "objective");
    for (std::size_t i = 0; i < p_.constraints.size(); ++i) {
      const Constraint& c = p_.constraints[i];
      const std::string label =
          c.name.value_or(absl::StrCat("constraint #", i + 1));
      if (c.name.has_value() && !IsIdentifier(*c.name)) {
        Add(ViolationCode::kInvalidName, *c.name,
            absl::StrCat("constraint name '", *c.name,
                         "' is not an identifier"));
      }
      CheckExpr(c.lhs, label);
    }
    CheckBindings();
    return std::move(out_);
  }

 private:
  void Add(ViolationCode code, const std::string& element,
           std::string message) {
    out_.push_back(Violation{code, element, std::move(message)});
  }

  void CheckVariables() {
    if (p_.variables.empty()) {
      Add(ViolationCode::kNoVariables, "", "the problem declares no variables");
    }
    for (const VariableDecl& v : p_.variables) {
      if (!IsIdentifier(v.name)) {
        Add(ViolationCode::kInvalidName, v.name,
            absl::StrCat("variable name '", v.name, "' is not an identifier"));
      }
      if (!declared_.insert(v.name).second) {
        Add(ViolationCode::kDuplicateVariable, v.name,
            absl::StrCat("variable '", v.name, "' is declared more than once"));
      }
      if (v.lower.has_value() && v.upper.has_value() && *v.lower > *v.upper) {
        Add(ViolationCode::kInvertedBounds, v.name,
            absl::StrCat("variable '", v.name, "' has lower bound ",
                         FormatRational(*v.lower), " above upper bound ",
                         FormatRational(*v.upper)));
      }
      if (v.domain == VariableDomain::kBinary &&
          (v.lower != Rational(0) || v.upper != Rational(1))) {
        Add(ViolationCode::kBinaryBounds, v.name,
            absl::StrCat("binary variable '", v.name,
                         "' must have bounds [0, 1]"));
      }
    }
  }

  void CheckExpr(const LinearExpr& e, const std::string& where) {
    for (const auto& [name, coeff] : e.terms()) {
      if (declared_.count(name) == 0 && reported_.insert(name).second) {
        Add(ViolationCode::kUndeclaredVariable, name,
            absl::StrCat("undeclared variable ", name, " in ", where));
      }
    }
  }

  void CheckBindings() {
    std::set<std::string> bound;
    for (const DataBinding& b : p_.bindings) {
      if (!IsIdentifier(b.parameter)) {
        Add(ViolationCode::kInvalidName, b.parameter,
            absl::StrCat("parameter name '", b.parameter,
                         "' is not an identifier"));
      }
      if (!bound.insert(b.parameter).second) {
        Add(ViolationCode::kDuplicateBinding, b.parameter,
            absl::StrCat("parameter '", b.parameter,
                         "' has more than one binding"));
      }
      if (declared_.count(b.parameter) > 0) {
        Add(ViolationCode::kParameterNameClash, b.parameter,
            absl::StrCat("parameter '", b.parameter,
                         "' has the same name as a variable"));
      }
      if (const auto* table = std::get_if<InlineTable>(&b.source)) {
        std::size_t rows = 0;
        bool first = true;
        for (const auto& [col, values] : table->columns) {
          if (!first && values.size() != rows) {
            Add(ViolationCode::kInvalidBinding, b.parameter,
                absl::StrCat("table '", b.parameter,
                             "' has columns of different lengths"));
            break;
          }
          rows = values.size();
          first = false;
        }
      }
      if (const auto* file = std::get_if<FileReference>(&b.source)) {
        if (file->path.empty()) {
          Add(ViolationCode::kInvalidBinding, b.parameter,
              absl::StrCat("file binding for '", b.parameter,
                           "' has an empty path"));
        }
        if (file->row.has_value() && *file->row < 1) {
          Add(ViolationCode::kInvalidBinding, b.parameter,
              absl::StrCat("file binding for '", b.parameter,
                           "' has a row below 1"));
        }
      }
    }
    for (const std::string& name : p_.ReferencedParameters()) {
      if (bound.count(name) == 0) {
        Add(ViolationCode::kMissingBinding, name,
            absl::StrCat("parameter '", name, "' has no binding"));
      }
    }
  }

  const ProblemIR& p_;
  std::set<std::string> declared_;
  std::set<std::string> reported_;
  std::vector<Violation> out_;
};

}  // namespace

std::vector<Violation> Validate(const ProblemIR& problem) {
  return Validator(problem).Run();
}

std::string DescribeViolations(const std::vector<Violation>& violations) {
  std::string out;
  for (const Violation& v : violations) {
    absl::StrAppend(&out, ViolationCodeName(v.code), ": ", v.message, "\n");
  }
  return out;
}

}  // namespace modelwright
