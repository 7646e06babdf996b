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

#ifndef MODELWRIGHT_IR_PROBLEM_H_
#define MODELWRIGHT_IR_PROBLEM_H_

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "modelwright/ir/rational.h"

namespace modelwright {

enum class VariableDomain { kContinuous, kInteger, kBinary };

enum class Sense { kLe, kGe, kEq, kLt, kGt };

enum class ObjectiveSense { kMinimize, kMaximize };

const char* DomainName(VariableDomain domain);
std::optional<VariableDomain> ParseDomain(const std::string& text);
// "<=", ">=", "=", "<", ">".
const char* SenseSymbol(Sense sense);
std::optional<Sense> ParseSense(const std::string& text);
const char* ObjectiveSenseName(ObjectiveSense sense);
bool IsStrict(Sense sense);

// Matches [A-Za-z_][A-Za-z0-9_]*.
bool IsIdentifier(const std::string& name);

struct VariableDecl {
  std::string name;
  VariableDomain domain = VariableDomain::kContinuous;
  // nullopt lower means -infinity, nullopt upper means +infinity.
  std::optional<Rational> lower = Rational(0);
  std::optional<Rational> upper;

  bool operator==(const VariableDecl&) const = default;
};

VariableDecl BinaryVariable(std::string name);

// Reference to a bound parameter: `C`, `cost[2]`, `demand[3,week1]`.
// Rows are 1-based.
struct ParamRef {
  std::string name;
  std::optional<int> row;
  std::optional<std::string> column;

  std::string ToString() const;
  auto operator<=>(const ParamRef&) const = default;
};

std::optional<ParamRef> ParseParamRef(const std::string& text);

// A coefficient or constant: a rational plus an optional linear combination
// of parameter references. Numeric once all parameters are substituted.
class Scalar {
 public:
  Scalar() = default;
  Scalar(Rational value) : constant_(std::move(value)) {}  // NOLINT
  Scalar(int value) : constant_(value) {}                   // NOLINT
  static Scalar Param(ParamRef ref, Rational factor = 1);

  const Rational& constant() const { return constant_; }
  const std::map<ParamRef, Rational>& params() const { return params_; }

  bool IsNumeric() const { return params_.empty(); }
  bool IsZero() const { return params_.empty() && constant_ == 0; }

  Scalar& operator+=(const Scalar& other);
  Scalar& operator*=(const Rational& factor);
  Scalar operator-() const;
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a += -b; }
  friend Scalar operator*(Scalar a, const Rational& f) { return a *= f; }
  bool operator==(const Scalar&) const = default;

  // "3", "C", "2*C + 1/3".
  std::string ToString() const;

 private:
  Rational constant_ = 0;
  std::map<ParamRef, Rational> params_;
};

// Sum of coefficient * variable terms plus a constant. Terms are kept in
// lexicographic variable order and zero coefficients are never stored.
class LinearExpr {
 public:
  LinearExpr() = default;

  // Adds into any existing coefficient; drops the term if it cancels.
  LinearExpr& AddTerm(const std::string& variable, const Scalar& coefficient);
  LinearExpr& AddConstant(const Scalar& value);
  LinearExpr& operator+=(const LinearExpr& other);
  LinearExpr& operator*=(const Rational& factor);
  LinearExpr operator-() const;

  const std::map<std::string, Scalar>& terms() const { return terms_; }
  const Scalar& constant() const { return constant_; }
  bool IsNumeric() const;
  bool operator==(const LinearExpr&) const = default;

  std::string ToString() const;

 private:
  std::map<std::string, Scalar> terms_;
  Scalar constant_;
};

struct Constraint {
  std::optional<std::string> name;
  LinearExpr lhs;
  Sense sense = Sense::kLe;
  // Pure constant; variable terms belong in lhs.
  Scalar rhs;

  bool operator==(const Constraint&) const = default;
};

struct Objective {
  ObjectiveSense sense = ObjectiveSense::kMinimize;
  LinearExpr expr;

  bool operator==(const Objective&) const = default;
};

// Where a parameter's data comes from.
struct UnresolvedSource {
  bool operator==(const UnresolvedSource&) const = default;
};
struct InlineScalar {
  Rational value;
  bool operator==(const InlineScalar&) const = default;
};
struct InlineVector {
  std::vector<Rational> values;
  bool operator==(const InlineVector&) const = default;
};
// Named columns of equal length.
struct InlineTable {
  std::map<std::string, std::vector<Rational>> columns;
  bool operator==(const InlineTable&) const = default;
};
// A CSV or JSON file. Column alone selects a vector, column plus row a single
// cell; neither selects the whole table. Rows are 1-based and exclude the
// header. Values stay in the file until data binding runs.
struct FileReference {
  std::string path;
  std::optional<std::string> column;
  std::optional<int> row;
  bool operator==(const FileReference&) const = default;
};

using BindingSource = std::variant<UnresolvedSource, InlineScalar, InlineVector,
                                   InlineTable, FileReference>;

struct DataBinding {
  std::string parameter;
  BindingSource source;

  bool IsResolved() const;
  bool operator==(const DataBinding&) const = default;
};

struct ProblemIR {
  std::vector<VariableDecl> variables;
  Objective objective;
  std::vector<Constraint> constraints;
  std::vector<DataBinding> bindings;
  std::map<std::string, std::string> metadata;

  const VariableDecl* FindVariable(const std::string& name) const;
  const DataBinding* FindBinding(const std::string& parameter) const;
  // Names of every parameter referenced by the objective or constraints.
  std::vector<std::string> ReferencedParameters() const;
  bool IsNumeric() const;

  bool operator==(const ProblemIR&) const = default;
};

}  // namespace modelwright

#endif  // MODELWRIGHT_IR_PROBLEM_H_
