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

#include "modelwright/ir/problem.h"

#include <algorithm>
#include <set>

#include "absl/strings/str_cat.h"

namespace modelwright {

const char* DomainName(VariableDomain domain) {
  switch (domain) {
    case VariableDomain::kContinuous: return "continuous";
    case VariableDomain::kInteger: return "integer";
    case VariableDomain::kBinary: return "binary";
  }
  return "continuous";
}

std::optional<VariableDomain> ParseDomain(const std::string& text) {
  if (text == "continuous" || text == "real" || text == "float") {
    return VariableDomain::kContinuous;
  }
  if (text == "integer" || text == "int") return VariableDomain::kInteger;
  if (text == "binary" || text == "bool") return VariableDomain::kBinary;
  return std::nullopt;
}

const char* SenseSymbol(Sense sense) {
  switch (sense) {
    case Sense::kLe: return "<=";
    case Sense::kGe: return ">=";
    case Sense::kEq: return "=";
    case Sense::kLt: return "<";
    case Sense::kGt: return ">";
  }
  return "<=";
}

std::optional<Sense> ParseSense(const std::string& text) {
  if (text == "<=" || text == "\xe2\x89\xa4") return Sense::kLe;
  if (text == ">=" || text == "\xe2\x89\xa5") return Sense::kGe;
  if (text == "=" || text == "==") return Sense::kEq;
  if (text == "<") return Sense::kLt;
  if (text == ">") return Sense::kGt;
  return std::nullopt;
}

const char* ObjectiveSenseName(ObjectiveSense sense) {
  return sense == ObjectiveSense::kMaximize ? "maximize" : "minimize";
}

bool IsStrict(Sense sense) { return sense == Sense::kLt || sense == Sense::kGt; }

bool IsIdentifier(const std::string& name) {
  if (name.empty()) return false;
  auto alpha = [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
  };
  if (!alpha(name[0])) return false;
  return std::all_of(name.begin(), name.end(), [&](char c) {
    return alpha(c) || (c >= '0' && c <= '9');
  });
}

VariableDecl BinaryVariable(std::string name) {
  return VariableDecl{std::move(name), VariableDomain::kBinary, Rational(0),
                      Rational(1)};
}

std::string ParamRef::ToString() const {
  std::string out = name;
  if (row.has_value()) {
    absl::StrAppend(&out, "[", *row);
    if (column.has_value()) absl::StrAppend(&out, ",", *column);
    out += "]";
  } else if (column.has_value()) {
    absl::StrAppend(&out, "[", *column, "]");
  }
  return out;
}

std::optional<ParamRef> ParseParamRef(const std::string& text) {
  ParamRef ref;
  const std::size_t open = text.find('[');
  ref.name = text.substr(0, open);
  if (!IsIdentifier(ref.name)) return std::nullopt;
  if (open == std::string::npos) return ref;
  if (text.back() != ']') return std::nullopt;
  std::string inner = text.substr(open + 1, text.size() - open - 2);
  std::string row_text = inner;
  const std::size_t comma = inner.find(',');
  if (comma != std::string::npos) {
    row_text = inner.substr(0, comma);
    ref.column = inner.substr(comma + 1);
    if (ref.column->empty()) return std::nullopt;
  }
  if (row_text.empty() || row_text.size() > 9 ||
      !std::all_of(row_text.begin(), row_text.end(),
                   [](char c) { return c >= '0' && c <= '9'; })) {
    // `t[price]` addresses a column without a row.
    if (comma == std::string::npos && IsIdentifier(row_text)) {
      ref.column = row_text;
      return ref;
    }
    return std::nullopt;
  }
  ref.row = std::stoi(row_text);
  if (*ref.row < 1) return std::nullopt;
  return ref;
}

Scalar Scalar::Param(ParamRef ref, Rational factor) {
  Scalar s;
  if (factor != 0) s.params_.emplace(std::move(ref), std::move(factor));
  return s;
}

Scalar& Scalar::operator+=(const Scalar& other) {
  constant_ += other.constant_;
  for (const auto& [ref, factor] : other.params_) {
    auto [it, inserted] = params_.emplace(ref, factor);
    if (!inserted) {
      it->second += factor;
      if (it->second == 0) params_.erase(it);
    }
  }
  return *this;
}

Scalar& Scalar::operator*=(const Rational& factor) {
  if (factor == 0) {
    constant_ = 0;
    params_.clear();
    return *this;
  }
  constant_ *= factor;
  for (auto& [ref, f] : params_) f *= factor;
  return *this;
}

Scalar Scalar::operator-() const {
  Scalar s = *this;
  s *= Rational(-1);
  return s;
}

std::string Scalar::ToString() const {
  std::string out;
  for (const auto& [ref, factor] : params_) {
    if (!out.empty()) out += factor < 0 ? " - " : " + ";
    else if (factor < 0) out += "-";
    const Rational magnitude = factor < 0 ? Rational(-factor) : factor;
    if (magnitude != 1) absl::StrAppend(&out, FormatRational(magnitude), "*");
    out += ref.ToString();
  }
  if (out.empty()) return FormatRational(constant_);
  if (constant_ != 0) {
    out += constant_ < 0 ? " - " : " + ";
    out += FormatRational(constant_ < 0 ? Rational(-constant_) : constant_);
  }
  return out;
}

LinearExpr& LinearExpr::AddTerm(const std::string& variable,
                                const Scalar& coefficient) {
  if (coefficient.IsZero()) return *this;
  auto [it, inserted] = terms_.emplace(variable, coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (it->second.IsZero()) terms_.erase(it);
  }
  return *this;
}

LinearExpr& LinearExpr::AddConstant(const Scalar& value) {
  constant_ += value;
  return *this;
}

LinearExpr& LinearExpr::operator+=(const LinearExpr& other) {
  for (const auto& [name, coeff] : other.terms_) AddTerm(name, coeff);
  constant_ += other.constant_;
  return *this;
}

LinearExpr& LinearExpr::operator*=(const Rational& factor) {
  if (factor == 0) {
    terms_.clear();
    constant_ = Scalar();
    return *this;
  }
  for (auto& [name, coeff] : terms_) coeff *= factor;
  constant_ *= factor;
  return *this;
}

LinearExpr LinearExpr::operator-() const {
  LinearExpr e = *this;
  e *= Rational(-1);
  return e;
}

bool LinearExpr::IsNumeric() const {
  if (!constant_.IsNumeric()) return false;
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const auto& t) { return t.second.IsNumeric(); });
}

std::string LinearExpr::ToString() const {
  std::string out;
  auto sign = [&out](bool negative) {
    if (out.empty()) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
  };
  for (const auto& [name, coeff] : terms_) {
    if (!coeff.IsNumeric()) {
      sign(false);
      absl::StrAppend(&out, "(", coeff.ToString(), ")*", name);
      continue;
    }
    const Rational value = coeff.constant();
    sign(value < 0);
    const Rational magnitude = value < 0 ? -value : value;
    if (magnitude == 1) {
      out += name;
    } else {
      absl::StrAppend(&out, FormatRational(magnitude), "*", name);
    }
  }
  if (!constant_.IsZero() || out.empty()) {
    if (constant_.IsNumeric() && !out.empty()) {
      const Rational value = constant_.constant();
      sign(value < 0);
      out += FormatRational(value < 0 ? -value : value);
    } else {
      sign(false);
      out += constant_.ToString();
    }
  }
  return out;
}

bool DataBinding::IsResolved() const {
  return !std::holds_alternative<UnresolvedSource>(source);
}

const VariableDecl* ProblemIR::FindVariable(const std::string& name) const {
  for (const VariableDecl& v : variables) {
    if (v.name == name) return &v;
  }
  return nullptr;
}

const DataBinding* ProblemIR::FindBinding(const std::string& parameter) const {
  for (const DataBinding& b : bindings) {
    if (b.parameter == parameter) return &b;
  }
  return nullptr;
}

std::vector<std::string> ProblemIR::ReferencedParameters() const {
  std::set<std::string> names;
  auto collect_scalar = [&](const Scalar& s) {
    for (const auto& [ref, factor] : s.params()) names.insert(ref.name);
  };
  auto collect_expr = [&](const LinearExpr& e) {
    for (const auto& [var, coeff] : e.terms()) collect_scalar(coeff);
    collect_scalar(e.constant());
  };
  collect_expr(objective.expr);
  for (const Constraint& c : constraints) {
    collect_expr(c.lhs);
    collect_scalar(c.rhs);
  }
  return {names.begin(), names.end()};
}

bool ProblemIR::IsNumeric() const {
  if (!objective.expr.IsNumeric()) return false;
  return std::all_of(constraints.begin(), constraints.end(),
                     [](const Constraint& c) {
                       return c.lhs.IsNumeric() && c.rhs.IsNumeric();
                     });
}

}  // namespace modelwright
