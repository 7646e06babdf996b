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

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "absl/strings/str_cat.h"
#include "modelwright/ir/validate.h"
#include "modelwright/lang/lexer.h"
#include "modelwright/lang/miniapl.h"

namespace modelwright::lang {
namespace {

constexpr std::size_t kMaxDiagnostics = 50;

const std::vector<std::string>& StatementKeywords() {
  static const auto* const kWords = new std::vector<std::string>{
      "var", "param", "maximize", "minimize", "s.t."};
  return *kWords;
}

const std::vector<std::string>& DomainKeywords() {
  static const auto* const kWords =
      new std::vector<std::string>{"integer", "binary"};
  return *kWords;
}

struct Factor {
  std::string name;
  std::optional<ParamRef> indexed;
  Span span;
};

struct Term {
  Rational coefficient = 1;
  std::vector<Factor> factors;
};

struct RawExpr {
  std::vector<Term> terms;
};

struct RawObjective {
  ObjectiveSense sense;
  std::string name;
  RawExpr expr;
};

struct RawConstraint {
  std::string name;
  RawExpr lhs;
  Sense sense;
  RawExpr rhs;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ParseResult Run() {
    tokens_ = Tokenize(text_, &diagnostics_);
    ParseProgram();
    ProblemIR problem = Resolve();
    if (diagnostics_.empty()) CheckSemantics(problem);
    if (!diagnostics_.empty()) {
      if (diagnostics_.size() > kMaxDiagnostics) {
        diagnostics_.resize(kMaxDiagnostics);
      }
      return std::move(diagnostics_);
    }
    return problem;
  }

 private:
  // ---- token access

  const Token& Cur() const { return tokens_[pos_]; }
  bool At(TokenKind kind) const { return Cur().kind == kind; }
  bool AtWord(const char* word) const {
    return At(TokenKind::kIdent) && Cur().text == word;
  }
  const Token& Take() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }
  Span EndOfPrevious() const {
    if (pos_ == 0) return Span{1, 1, 0};
    const Span& s = tokens_[pos_ - 1].span;
    return Span{s.line, s.column + s.length, 0};
  }
  Span EndOfInput() const { return tokens_.back().span; }

  void Error(Span span, std::string message,
             std::optional<std::string> suggestion = std::nullopt) {
    diagnostics_.push_back(Diagnostic{Severity::kError, std::move(message),
                                      span, std::move(suggestion)});
  }

  bool Expect(TokenKind kind, const std::string& context) {
    if (At(kind)) {
      Take();
      return true;
    }
    if (kind == TokenKind::kSemicolon) {
      Error(EndOfPrevious(), absl::StrCat("expected ';' ", context));
    } else {
      Error(Cur().span, absl::StrCat("expected ", TokenKindName(kind), " ",
                                     context, ", found ", Describe(Cur())));
    }
    return false;
  }

  static std::string Describe(const Token& t) {
    if (t.kind == TokenKind::kEnd) return "end of input";
    return absl::StrCat("'", t.text, "'");
  }

  bool StartsStatement(std::size_t i) const {
    const Token& t = tokens_[i];
    if (t.kind == TokenKind::kSuchThat) return true;
    if (t.kind != TokenKind::kIdent) return false;
    if (t.text != "var" && t.text != "param" && t.text != "maximize" &&
        t.text != "minimize") {
      return false;
    }
    return i == 0 || tokens_[i - 1].span.line < t.span.line;
  }

  // Skips past the next ';', or up to a keyword opening a new line.
  void Recover() {
    if (StartsStatement(pos_)) return;
    const std::size_t start = pos_;
    while (!At(TokenKind::kEnd)) {
      if (At(TokenKind::kSemicolon)) {
        Take();
        return;
      }
      if (pos_ > start && StartsStatement(pos_)) return;
      Take();
    }
  }

  // ---- statements

  void ParseProgram() {
    while (!At(TokenKind::kEnd) && diagnostics_.size() < kMaxDiagnostics) {
      bool ok = false;
      if (At(TokenKind::kSuchThat)) {
        ok = ParseConstraint();
      } else if (AtWord("var")) {
        ok = ParseVar();
      } else if (AtWord("param")) {
        ok = ParseParam();
      } else if (AtWord("maximize") || AtWord("minimize")) {
        ok = ParseObjective();
      } else if (At(TokenKind::kIdent)) {
        std::optional<std::string> hint =
            SuggestKeyword(Cur().text, StatementKeywords());
        Error(Cur().span,
              hint.has_value()
                  ? absl::StrCat("unknown keyword '", Cur().text,
                                 "'; did you mean '", *hint, "'?")
                  : absl::StrCat("unknown keyword '", Cur().text,
                                 "'; expected var, param, maximize, "
                                 "minimize or s.t."),
              hint);
      } else if (At(TokenKind::kSemicolon)) {
        Take();
        ok = true;
      } else {
        Error(Cur().span, absl::StrCat("expected a statement, found ",
                                       Describe(Cur())));
      }
      if (!ok) Recover();
    }
  }

  std::optional<Rational> ParseNumberToken() {
    const Token& t = Take();
    std::optional<Rational> value = ParseRational(t.text);
    if (!value.has_value()) {
      Error(t.span, absl::StrCat("invalid number '", t.text, "'"));
    }
    return value;
  }

  // Signed NUMBER or Infinity. Returns false on error; nullopt `value`
  // means infinite with sign `*positive`.
  bool ParseBoundValue(std::optional<Rational>* value, bool* positive) {
    *positive = true;
    if (At(TokenKind::kMinus)) {
      Take();
      *positive = false;
    } else if (At(TokenKind::kPlus)) {
      Take();
    }
    if (AtWord("Infinity")) {
      Take();
      *value = std::nullopt;
      return true;
    }
    if (!At(TokenKind::kNumber)) {
      Error(Cur().span, absl::StrCat("expected a bound value, found ",
                                     Describe(Cur())));
      return false;
    }
    std::optional<Rational> number = ParseNumberToken();
    if (!number.has_value()) return false;
    *value = *positive ? *number : Rational(-*number);
    return true;
  }

  bool ParseVar() {
    Take();
    if (!At(TokenKind::kIdent)) {
      Error(Cur().span, absl::StrCat("expected a variable name after 'var', "
                                     "found ", Describe(Cur())));
      return false;
    }
    const Token& name = Take();
    variable_spans_[name.text].push_back(name.span);
    VariableDecl decl;
    decl.name = name.text;
    if (At(TokenKind::kIdent) && !StartsStatement(pos_)) {
      const Token& attr = Take();
      if (attr.text == "integer") {
        decl.domain = VariableDomain::kInteger;
      } else if (attr.text == "binary") {
        decl.domain = VariableDomain::kBinary;
        decl.upper = Rational(1);
      } else {
        std::optional<std::string> hint =
            SuggestKeyword(attr.text, DomainKeywords());
        Error(attr.span,
              hint.has_value()
                  ? absl::StrCat("unknown variable type '", attr.text,
                                 "'; did you mean '", *hint, "'?")
                  : absl::StrCat("unknown variable type '", attr.text,
                                 "'; expected integer or binary"),
              hint);
        return false;
      }
    }
    bool saw_lower = false;
    bool saw_upper = false;
    while (At(TokenKind::kGe) || At(TokenKind::kLe)) {
      const Token& op = Take();
      const bool is_lower = op.kind == TokenKind::kGe;
      std::optional<Rational> value;
      bool positive = true;
      const Span value_span = Cur().span;
      if (!ParseBoundValue(&value, &positive)) return false;
      if (is_lower) {
        if (saw_lower) {
          Error(op.span, absl::StrCat("variable '", decl.name,
                                      "' has more than one lower bound"));
          return false;
        }
        if (!value.has_value() && positive) {
          Error(value_span, "a lower bound cannot be +Infinity");
          return false;
        }
        saw_lower = true;
        decl.lower = value;
      } else {
        if (saw_upper) {
          Error(op.span, absl::StrCat("variable '", decl.name,
                                      "' has more than one upper bound"));
          return false;
        }
        if (!value.has_value() && !positive) {
          Error(value_span, "an upper bound cannot be -Infinity");
          return false;
        }
        saw_upper = true;
        decl.upper = value;
      }
    }
    if (!Expect(TokenKind::kSemicolon, "after the variable declaration")) {
      return false;
    }
    variables_.push_back(std::move(decl));
    return true;
  }

  bool ParseParam() {
    Take();
    if (!At(TokenKind::kIdent)) {
      Error(Cur().span, absl::StrCat("expected a parameter name after "
                                     "'param', found ", Describe(Cur())));
      return false;
    }
    const Token& name = Take();
    param_spans_[name.text].push_back(name.span);
    DataBinding binding{name.text, UnresolvedSource{}};
    if (At(TokenKind::kEq)) {
      Take();
      bool negative = false;
      if (At(TokenKind::kMinus)) {
        Take();
        negative = true;
      } else if (At(TokenKind::kPlus)) {
        Take();
      }
      if (!At(TokenKind::kNumber)) {
        Error(Cur().span, absl::StrCat("expected a number after '=', found ",
                                       Describe(Cur())));
        return false;
      }
      std::optional<Rational> value = ParseNumberToken();
      if (!value.has_value()) return false;
      binding.source = InlineScalar{negative ? Rational(-*value) : *value};
    }
    if (!Expect(TokenKind::kSemicolon, "after the parameter declaration")) {
      return false;
    }
    bindings_.push_back(std::move(binding));
    return true;
  }

  bool ParseObjective() {
    const Token& keyword = Take();
    RawObjective objective;
    objective.sense = keyword.text == "maximize" ? ObjectiveSense::kMaximize
                                                 : ObjectiveSense::kMinimize;
    if (!At(TokenKind::kIdent)) {
      Error(Cur().span, absl::StrCat("expected an objective name after '",
                                     keyword.text, "', found ",
                                     Describe(Cur())));
      return false;
    }
    objective.name = Take().text;
    if (!Expect(TokenKind::kColon, "after the objective name")) return false;
    if (!ParseExpr(&objective.expr)) return false;
    if (!Expect(TokenKind::kSemicolon, "after the objective")) return false;
    if (objective_.has_value()) {
      Error(keyword.span, "a model has exactly one objective; found a second");
      return true;
    }
    objective_ = std::move(objective);
    return true;
  }

  bool ParseConstraint() {
    Take();
    RawConstraint c;
    if (!At(TokenKind::kIdent)) {
      Error(Cur().span, absl::StrCat("expected a constraint name after "
                                     "'s.t.', found ", Describe(Cur())));
      return false;
    }
    c.name = Take().text;
    if (!Expect(TokenKind::kColon, "after the constraint name")) return false;
    if (!ParseExpr(&c.lhs)) return false;
    switch (Cur().kind) {
      case TokenKind::kLe: c.sense = Sense::kLe; break;
      case TokenKind::kGe: c.sense = Sense::kGe; break;
      case TokenKind::kEq: c.sense = Sense::kEq; break;
      case TokenKind::kLt: c.sense = Sense::kLt; break;
      case TokenKind::kGt: c.sense = Sense::kGt; break;
      default:
        Error(Cur().span, absl::StrCat("expected a relation (<=, >=, =, <, "
                                       ">) in constraint '", c.name,
                                       "', found ", Describe(Cur())));
        return false;
    }
    Take();
    if (!ParseExpr(&c.rhs)) return false;
    if (!Expect(TokenKind::kSemicolon, "after the constraint")) return false;
    constraints_.push_back(std::move(c));
    return true;
  }

  // ---- expressions

  bool ParseExpr(RawExpr* out) {
    Rational sign = 1;
    if (At(TokenKind::kMinus)) {
      Take();
      sign = -1;
    } else if (At(TokenKind::kPlus)) {
      Take();
    }
    if (!ParseTerm(sign, out)) return false;
    while (At(TokenKind::kPlus) || At(TokenKind::kMinus)) {
      sign = Take().kind == TokenKind::kMinus ? -1 : 1;
      if (!ParseTerm(sign, out)) return false;
    }
    return true;
  }

  bool ParseTerm(const Rational& sign, RawExpr* out) {
    Term term;
    term.coefficient = sign;
    if (At(TokenKind::kNumber)) {
      std::optional<Rational> value = ParseNumberToken();
      if (!value.has_value()) return false;
      term.coefficient *= *value;
      if (!At(TokenKind::kStar)) {
        out->terms.push_back(std::move(term));
        return true;
      }
      Take();
    }
    if (!ParseFactor(&term)) return false;
    while (At(TokenKind::kStar)) {
      const Token& star = Take();
      if (term.factors.size() >= 2) {
        Error(star.span, "a term has at most one parameter and one variable");
        return false;
      }
      if (!ParseFactor(&term)) return false;
    }
    out->terms.push_back(std::move(term));
    return true;
  }

  bool ParseFactor(Term* term) {
    if (!At(TokenKind::kIdent)) {
      Error(Cur().span, absl::StrCat("expected a number or identifier, found ",
                                     Describe(Cur())));
      return false;
    }
    const Token& ident = Take();
    Factor factor{ident.text, std::nullopt, ident.span};
    if (At(TokenKind::kLBracket)) {
      Take();
      ParamRef ref{ident.text, std::nullopt, std::nullopt};
      if (At(TokenKind::kNumber)) {
        const Token& row = Take();
        std::optional<Rational> value = ParseRational(row.text);
        if (!value.has_value() || !IsInteger(*value) || *value < 1 ||
            *value > 1000000000) {
          Error(row.span, absl::StrCat("row index '", row.text,
                                       "' must be a positive integer"));
          return false;
        }
        ref.row = static_cast<int>(numerator(*value));
        if (At(TokenKind::kComma)) {
          Take();
          if (!At(TokenKind::kIdent) && !At(TokenKind::kString) &&
              !At(TokenKind::kNumber)) {
            Error(Cur().span, absl::StrCat("expected a column name, found ",
                                           Describe(Cur())));
            return false;
          }
          ref.column = Take().text;
        }
      } else if (At(TokenKind::kIdent) || At(TokenKind::kString)) {
        ref.column = Take().text;
      } else {
        Error(Cur().span, absl::StrCat("expected a row or column index, "
                                       "found ", Describe(Cur())));
        return false;
      }
      if (!Expect(TokenKind::kRBracket, "to close the index")) return false;
      factor.indexed = std::move(ref);
    }
    term->factors.push_back(std::move(factor));
    return true;
  }

  // ---- resolution

  bool IsVariable(const std::string& name) const {
    return variable_spans_.count(name) > 0;
  }
  bool IsParam(const std::string& name) const {
    return param_spans_.count(name) > 0;
  }

  bool ResolveExpr(const RawExpr& raw, LinearExpr* out) {
    bool ok = true;
    for (const Term& term : raw.terms) {
      const Factor* variable = nullptr;
      const Factor* param = nullptr;
      for (const Factor& f : term.factors) {
        bool as_variable = false;
        if (f.indexed.has_value()) {
          if (!IsParam(f.name)) {
            Error(f.span, IsVariable(f.name)
                              ? absl::StrCat("variable ", f.name,
                                             " cannot be indexed")
                              : absl::StrCat("undeclared parameter ", f.name));
            ok = false;
            continue;
          }
        } else if (IsVariable(f.name)) {
          as_variable = true;
        } else if (!IsParam(f.name)) {
          Error(f.span, absl::StrCat("undeclared variable ", f.name));
          ok = false;
          continue;
        }
        if (as_variable) {
          if (variable != nullptr) {
            Error(f.span, absl::StrCat("nonlinear term: ", variable->name,
                                       " multiplied by ", f.name));
            ok = false;
          }
          variable = &f;
        } else {
          if (param != nullptr) {
            Error(f.span, absl::StrCat("product of parameters ", param->name,
                                       " and ", f.name, " is not supported"));
            ok = false;
          }
          param = &f;
        }
      }
      if (!ok) continue;
      Scalar value(term.coefficient);
      if (param != nullptr) {
        value = Scalar::Param(param->indexed.has_value()
                                  ? *param->indexed
                                  : ParamRef{param->name, std::nullopt,
                                             std::nullopt},
                              term.coefficient);
      }
      if (variable != nullptr) {
        out->AddTerm(variable->name, value);
      } else {
        out->AddConstant(value);
      }
    }
    return ok;
  }

  ProblemIR Resolve() {
    ProblemIR p;
    p.variables = variables_;
    p.bindings = bindings_;
    if (!objective_.has_value()) {
      if (diagnostics_.empty()) {
        Error(EndOfInput(), "missing objective: add a 'maximize' or "
                            "'minimize' statement");
      }
    } else {
      p.objective.sense = objective_->sense;
      ResolveExpr(objective_->expr, &p.objective.expr);
      if (objective_->name != "obj") {
        p.metadata[kObjectiveNameKey] = objective_->name;
      }
    }
    for (const RawConstraint& raw : constraints_) {
      LinearExpr lhs;
      LinearExpr rhs;
      const bool ok_lhs = ResolveExpr(raw.lhs, &lhs);
      const bool ok_rhs = ResolveExpr(raw.rhs, &rhs);
      if (!ok_lhs || !ok_rhs) continue;
      Constraint c;
      c.name = raw.name;
      c.sense = raw.sense;
      for (const auto& [name, coefficient] : rhs.terms()) {
        lhs.AddTerm(name, -coefficient);
      }
      c.lhs = std::move(lhs);
      c.rhs = rhs.constant();
      p.constraints.push_back(std::move(c));
    }
    return p;
  }

  Span DeclSpan(const std::map<std::string, std::vector<Span>>& spans,
                const std::string& name, std::size_t index) const {
    auto it = spans.find(name);
    if (it == spans.end() || it->second.empty()) return EndOfInput();
    return it->second[std::min(index, it->second.size() - 1)];
  }

  void CheckSemantics(const ProblemIR& p) {
    for (const Violation& v : Validate(p)) {
      Span span = EndOfInput();
      switch (v.code) {
        case ViolationCode::kDuplicateVariable:
          span = DeclSpan(variable_spans_, v.element, 1);
          break;
        case ViolationCode::kInvertedBounds:
        case ViolationCode::kBinaryBounds:
        case ViolationCode::kInvalidName:
          span = DeclSpan(variable_spans_, v.element, 0);
          break;
        case ViolationCode::kDuplicateBinding:
          span = DeclSpan(param_spans_, v.element, 1);
          break;
        case ViolationCode::kParameterNameClash:
        case ViolationCode::kInvalidBinding:
        case ViolationCode::kMissingBinding:
          span = DeclSpan(param_spans_, v.element, 0);
          break;
        default:
          break;
      }
      Error(span, v.message);
    }
  }

  std::string_view text_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::vector<Diagnostic> diagnostics_;

  std::vector<VariableDecl> variables_;
  std::vector<DataBinding> bindings_;
  std::optional<RawObjective> objective_;
  std::vector<RawConstraint> constraints_;
  std::map<std::string, std::vector<Span>> variable_spans_;
  std::map<std::string, std::vector<Span>> param_spans_;
};

}  // namespace

ParseResult Parse(std::string_view text) { return Parser(text).Run(); }

ParseResult Parse(const SourceFile& source) { return Parse(source.text); }

std::vector<Diagnostic> GrammarCheck(const SourceFile& source) {
  ParseResult result = Parse(source);
  if (auto* diagnostics = std::get_if<std::vector<Diagnostic>>(&result)) {
    return std::move(*diagnostics);
  }
  return {};
}

std::size_t EditDistance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diagonal = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1,
                         diagonal + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diagonal = up;
    }
  }
  return row[b.size()];
}

std::optional<std::string> SuggestKeyword(
    std::string_view word, const std::vector<std::string>& candidates) {
  for (const std::string& candidate : candidates) {
    if (candidate != word && EditDistance(word, candidate) <= 1) {
      return candidate;
    }
  }
  return std::nullopt;
}

}  // namespace modelwright::lang
