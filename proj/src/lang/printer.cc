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

#include <set>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "modelwright/common/status.h"
#include "modelwright/ir/validate.h"
#include "modelwright/lang/miniapl.h"

namespace modelwright::lang {
namespace {

bool IsColumnIdentifier(const std::string& text) { return IsIdentifier(text); }

bool IsDigits(const std::string& text) {
  if (text.empty()) return false;
  for (char c : text) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

absl::StatusOr<std::string> PrintParamRef(const ParamRef& ref) {
  if (!ref.row.has_value() && !ref.column.has_value()) return ref.name;
  std::string out = absl::StrCat(ref.name, "[");
  if (ref.row.has_value()) {
    if (*ref.row < 1) {
      return MakeError(ErrorKind::kInvalidIR,
                       absl::StrCat("parameter index ", ref.ToString(),
                                    " has a row below 1"));
    }
    absl::StrAppend(&out, *ref.row);
    if (ref.column.has_value()) absl::StrAppend(&out, ",");
  }
  if (ref.column.has_value()) {
    const std::string& col = *ref.column;
    if (IsColumnIdentifier(col) || (ref.row.has_value() && IsDigits(col))) {
      absl::StrAppend(&out, col);
    } else if (col.find('"') == std::string::npos &&
               col.find('\n') == std::string::npos) {
      absl::StrAppend(&out, "\"", col, "\"");
    } else {
      return MakeError(ErrorKind::kInvalidIR,
                       absl::StrCat("column name of parameter ", ref.name,
                                    " cannot be written in MiniAPL"));
    }
  }
  absl::StrAppend(&out, "]");
  return out;
}

// Appends "+ 3*x", "- x", "2*C*x" style pieces to `out`.
class ExprWriter {
 public:
  absl::Status Add(const Rational& factor, const std::string& tail) {
    if (factor == 0) return absl::OkStatus();
    const bool negative = factor < 0;
    const Rational magnitude = negative ? Rational(-factor) : factor;
    if (out_.empty()) {
      if (negative) out_ = "-";
    } else {
      absl::StrAppend(&out_, negative ? " - " : " + ");
    }
    if (tail.empty()) {
      absl::StrAppend(&out_, FormatRational(magnitude));
    } else if (magnitude == 1) {
      absl::StrAppend(&out_, tail);
    } else {
      absl::StrAppend(&out_, FormatRational(magnitude), "*", tail);
    }
    return absl::OkStatus();
  }

  absl::Status AddScalar(const Scalar& value, const std::string& variable) {
    MW_RETURN_IF_ERROR(Add(value.constant(), variable));
    for (const auto& [ref, factor] : value.params()) {
      MW_ASSIGN_OR_RETURN(std::string name, PrintParamRef(ref));
      MW_RETURN_IF_ERROR(Add(
          factor, variable.empty() ? name : absl::StrCat(name, "*", variable)));
    }
    return absl::OkStatus();
  }

  std::string Finish() const { return out_.empty() ? "0" : out_; }

 private:
  std::string out_;
};

absl::StatusOr<std::string> PrintExpr(const LinearExpr& expr) {
  ExprWriter writer;
  for (const auto& [variable, coefficient] : expr.terms()) {
    MW_RETURN_IF_ERROR(writer.AddScalar(coefficient, variable));
  }
  MW_RETURN_IF_ERROR(writer.AddScalar(expr.constant(), ""));
  return writer.Finish();
}

std::string BoundText(const Rational& value) {
  return value < 0 ? absl::StrCat("-", FormatRational(-value))
                   : FormatRational(value);
}

std::string BindingComment(const DataBinding& binding) {
  if (const auto* file = std::get_if<FileReference>(&binding.source)) {
    std::string out = absl::StrCat("  # data file ", file->path);
    if (file->column.has_value()) absl::StrAppend(&out, ", column ", *file->column);
    if (file->row.has_value()) absl::StrAppend(&out, ", row ", *file->row);
    return out;
  }
  if (const auto* vec = std::get_if<InlineVector>(&binding.source)) {
    return absl::StrCat("  # inline vector of ", vec->values.size());
  }
  if (const auto* table = std::get_if<InlineTable>(&binding.source)) {
    return absl::StrCat("  # inline table with ", table->columns.size(),
                        " columns");
  }
  return "";
}

}  // namespace

absl::StatusOr<SourceFile> Print(const ProblemIR& problem) {
  std::vector<Violation> violations = Validate(problem);
  if (!violations.empty()) {
    return MakeError(ErrorKind::kInvalidIR, DescribeViolations(violations));
  }
  std::string out;
  for (const DataBinding& binding : problem.bindings) {
    if (const auto* scalar = std::get_if<InlineScalar>(&binding.source)) {
      absl::StrAppend(&out, "param ", binding.parameter, " = ",
                      BoundText(scalar->value), ";\n");
    } else {
      absl::StrAppend(&out, "param ", binding.parameter, ";",
                      BindingComment(binding), "\n");
    }
  }
  for (const VariableDecl& v : problem.variables) {
    if (v.domain == VariableDomain::kBinary) {
      absl::StrAppend(&out, "var ", v.name, " binary;\n");
      continue;
    }
    absl::StrAppend(&out, "var ", v.name);
    if (v.domain == VariableDomain::kInteger) absl::StrAppend(&out, " integer");
    absl::StrAppend(&out, " >= ",
                    v.lower.has_value() ? BoundText(*v.lower) : "-Infinity");
    if (v.upper.has_value()) absl::StrAppend(&out, " <= ", BoundText(*v.upper));
    absl::StrAppend(&out, ";\n");
  }

  std::string label = "obj";
  auto it = problem.metadata.find(kObjectiveNameKey);
  if (it != problem.metadata.end() && IsIdentifier(it->second)) {
    label = it->second;
  }
  MW_ASSIGN_OR_RETURN(std::string objective, PrintExpr(problem.objective.expr));
  absl::StrAppend(&out,
                  problem.objective.sense == ObjectiveSense::kMaximize
                      ? "maximize "
                      : "minimize ",
                  label, ": ", objective, ";\n");

  std::set<std::string> used;
  for (const Constraint& c : problem.constraints) {
    if (c.name.has_value()) used.insert(*c.name);
  }
  int next = 1;
  for (const Constraint& c : problem.constraints) {
    std::string name;
    if (c.name.has_value() && IsIdentifier(*c.name)) {
      name = *c.name;
    } else {
      do {
        name = absl::StrCat("c", next++);
      } while (used.count(name) > 0);
      used.insert(name);
    }
    MW_ASSIGN_OR_RETURN(std::string lhs, PrintExpr(c.lhs));
    ExprWriter rhs;
    MW_RETURN_IF_ERROR(rhs.AddScalar(c.rhs, ""));
    absl::StrAppend(&out, "s.t. ", name, ": ", lhs, " ", SenseSymbol(c.sense),
                    " ", rhs.Finish(), ";\n");
  }
  return SourceFile{std::move(out), SourceOrigin::kGenerated};
}

}  // namespace modelwright::lang
