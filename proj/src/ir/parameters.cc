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

#include "modelwright/ir/parameters.h"

#include <set>

#include "absl/strings/str_cat.h"
#include "modelwright/common/status.h"

namespace modelwright {
namespace {

std::optional<ParamValue> InlineValue(const DataBinding& binding) {
  if (const auto* s = std::get_if<InlineScalar>(&binding.source)) {
    return ParamValue(s->value);
  }
  if (const auto* v = std::get_if<InlineVector>(&binding.source)) {
    return ParamValue(v->values);
  }
  if (const auto* t = std::get_if<InlineTable>(&binding.source)) {
    return ParamValue(t->columns);
  }
  return std::nullopt;
}

class Substituter {
 public:
  Substituter(const ProblemIR& p, const ParamValues& values) : p_(p) {
    for (const DataBinding& b : p.bindings) {
      if (auto v = InlineValue(b)) values_.emplace(b.parameter, std::move(*v));
    }
    for (const auto& [name, value] : values) values_[name] = value;
  }

  absl::StatusOr<ProblemIR> Run() {
    for (const std::string& name : p_.ReferencedParameters()) {
      if (values_.count(name) == 0) {
        return MakeError(ErrorKind::kMissingParameter,
                         absl::StrCat("no value for parameter ", name));
      }
    }
    ProblemIR out = p_;
    MW_ASSIGN_OR_RETURN(out.objective.expr, Expr(p_.objective.expr));
    for (Constraint& c : out.constraints) {
      MW_ASSIGN_OR_RETURN(c.lhs, Expr(c.lhs));
      MW_ASSIGN_OR_RETURN(Rational rhs, Evaluate(c.rhs));
      c.rhs = Scalar(rhs);
    }
    MW_RETURN_IF_ERROR(CheckVectorCoverage());
    out.bindings.clear();
    return out;
  }

 private:
  absl::StatusOr<Rational> Lookup(const ParamRef& ref) {
    const ParamValue& value = values_.at(ref.name);
    const std::string where = ref.ToString();
    if (const auto* scalar = std::get_if<Rational>(&value)) {
      if (ref.row.has_value() || ref.column.has_value()) {
        return MakeError(ErrorKind::kDimensionMismatch,
                         absl::StrCat(where, " indexes scalar parameter ",
                                      ref.name));
      }
      return *scalar;
    }
    if (const auto* vec = std::get_if<std::vector<Rational>>(&value)) {
      if (!ref.row.has_value() || ref.column.has_value()) {
        return MakeError(ErrorKind::kDimensionMismatch,
                         absl::StrCat(where, " must use a single index into "
                                             "vector parameter ",
                                      ref.name, " of length ", vec->size()));
      }
      if (*ref.row < 1 || static_cast<std::size_t>(*ref.row) > vec->size()) {
        return MakeError(ErrorKind::kDimensionMismatch,
                         absl::StrCat(where, " is outside vector ", ref.name,
                                      " of length ", vec->size()));
      }
      used_rows_[ref.name].insert(*ref.row);
      return (*vec)[*ref.row - 1];
    }
    const auto& table = std::get<ParamTable>(value);
    if (!ref.row.has_value() || !ref.column.has_value()) {
      return MakeError(ErrorKind::kDimensionMismatch,
                       absl::StrCat(where, " must address table ", ref.name,
                                    " as [row,column]"));
    }
    auto col = table.find(*ref.column);
    if (col == table.end()) {
      return MakeError(ErrorKind::kDimensionMismatch,
                       absl::StrCat(where, ": table ", ref.name,
                                    " has no column ", *ref.column));
    }
    if (*ref.row < 1 || static_cast<std::size_t>(*ref.row) > col->second.size()) {
      return MakeError(ErrorKind::kDimensionMismatch,
                       absl::StrCat(where, " is outside table ", ref.name,
                                    " with ", col->second.size(), " rows"));
    }
    return col->second[*ref.row - 1];
  }

  absl::StatusOr<Rational> Evaluate(const Scalar& s) {
    Rational total = s.constant();
    for (const auto& [ref, factor] : s.params()) {
      MW_ASSIGN_OR_RETURN(Rational v, Lookup(ref));
      total += factor * v;
    }
    return total;
  }

  absl::StatusOr<LinearExpr> Expr(const LinearExpr& e) {
    LinearExpr out;
    for (const auto& [var, coeff] : e.terms()) {
      MW_ASSIGN_OR_RETURN(Rational v, Evaluate(coeff));
      out.AddTerm(var, v);
    }
    MW_ASSIGN_OR_RETURN(Rational k, Evaluate(e.constant()));
    out.AddConstant(k);
    return out;
  }

  absl::Status CheckVectorCoverage() {
    for (const auto& [name, rows] : used_rows_) {
      const auto& vec = std::get<std::vector<Rational>>(values_.at(name));
      if (rows.size() != vec.size()) {
        return MakeError(
            ErrorKind::kDimensionMismatch,
            absl::StrCat("vector parameter ", name, " has length ", vec.size(),
                         " but the model uses ", rows.size(), " of its entries"));
      }
    }
    return absl::OkStatus();
  }

  const ProblemIR& p_;
  ParamValues values_;
  std::map<std::string, std::set<int>> used_rows_;
};

}  // namespace

absl::StatusOr<ProblemIR> SubstituteParameters(const ProblemIR& problem,
                                               const ParamValues& values) {
  return Substituter(problem, values).Run();
}

}  // namespace modelwright
