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

#include <random>
#include <string>
#include <variant>
#include <vector>

#include <gtest/gtest.h>

#include "modelwright/common/status.h"
#include "modelwright/ir/canonical.h"
#include "modelwright/ir/validate.h"
#include "modelwright/lang/lexer.h"
#include "modelwright/lang/miniapl.h"
#include "support/random_ir.h"

namespace modelwright::lang {
namespace {

ProblemIR ParseOk(std::string_view text) {
  ParseResult result = Parse(text);
  if (auto* diagnostics = std::get_if<std::vector<Diagnostic>>(&result)) {
    ADD_FAILURE() << "unexpected diagnostics for:\n"
                  << text << "\n"
                  << FormatDiagnostics(*diagnostics);
    return ProblemIR{};
  }
  return std::get<ProblemIR>(result);
}

std::vector<Diagnostic> ParseFails(std::string_view text) {
  ParseResult result = Parse(text);
  if (!std::holds_alternative<std::vector<Diagnostic>>(result)) {
    ADD_FAILURE() << "expected diagnostics for:\n" << text;
    return {};
  }
  return std::get<std::vector<Diagnostic>>(result);
}

TEST(LexerTest, TokenKindsAndSpans) {
  std::vector<Diagnostic> diagnostics;
  std::vector<Token> tokens =
      Tokenize("s.t. c1: 1/3*x >= -2; # note\n  y", &diagnostics);
  EXPECT_TRUE(diagnostics.empty());
  ASSERT_EQ(tokens.size(), 12u);
  EXPECT_EQ(tokens[0].kind, TokenKind::kSuchThat);
  EXPECT_EQ(tokens[3].kind, TokenKind::kNumber);
  EXPECT_EQ(tokens[3].text, "1/3");
  EXPECT_EQ(tokens[6].kind, TokenKind::kGe);
  EXPECT_EQ(tokens[10].text, "y");
  EXPECT_EQ(tokens[10].span, (Span{2, 3, 1}));
  EXPECT_EQ(tokens[11].kind, TokenKind::kEnd);
}

TEST(LexerTest, StrayCharactersAreReportedAndSkipped) {
  std::vector<Diagnostic> diagnostics;
  std::vector<Token> tokens = Tokenize("x @ y \xe2\x89\xa4 3", &diagnostics);
  ASSERT_EQ(diagnostics.size(), 2u);
  EXPECT_EQ(diagnostics[0].span, (Span{1, 3, 1}));
  EXPECT_EQ(diagnostics[1].suggestion, "<=");
  EXPECT_EQ(tokens.size(), 4u);
}

TEST(ParseTest, SimpleProgram) {
  ProblemIR p = ParseOk("var x >= 0; maximize obj: 3*x; s.t. c1: x <= 5;");
  ASSERT_EQ(p.variables.size(), 1u);
  EXPECT_EQ(p.variables[0].name, "x");
  EXPECT_EQ(p.variables[0].domain, VariableDomain::kContinuous);
  EXPECT_EQ(p.variables[0].lower, Rational(0));
  EXPECT_FALSE(p.variables[0].upper.has_value());
  EXPECT_EQ(p.objective.sense, ObjectiveSense::kMaximize);
  EXPECT_EQ(p.objective.expr.terms().at("x"), Scalar(3));
  ASSERT_EQ(p.constraints.size(), 1u);
  EXPECT_EQ(p.constraints[0].name, "c1");
  EXPECT_EQ(p.constraints[0].sense, Sense::kLe);
  EXPECT_EQ(p.constraints[0].rhs, Scalar(5));
  EXPECT_TRUE(Validate(p).empty());
}

TEST(ParseTest, MissingSemicolonIsReportedOnLineTwo) {
  const std::string text = "var x integer;\nmaximize obj: x";
  std::vector<Diagnostic> d = ParseFails(text);
  ASSERT_FALSE(d.empty());
  EXPECT_EQ(d[0].severity, Severity::kError);
  EXPECT_EQ(d[0].span.line, 2);
  EXPECT_NE(d[0].message.find("';'"), std::string::npos);
  EXPECT_TRUE(SpanWithin(d[0].span, text));
}

TEST(ParseTest, UndeclaredVariable) {
  const std::string text = "var y; minimize obj: y;\ns.t. c1: x <= 5;";
  std::vector<Diagnostic> d = ParseFails(text);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].message, "undeclared variable x");
  EXPECT_EQ(d[0].span, (Span{2, 10, 1}));
}

TEST(ParseTest, MisspelledKeywordGetsSuggestion) {
  std::vector<Diagnostic> d =
      ParseFails("var x;\nmaximise obj: x;\ns.t. c1: x <= 5;");
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].suggestion, "maximize");
  EXPECT_EQ(d[0].span, (Span{2, 1, 8}));

  d = ParseFails("var n integr;\nminimize obj: n;");
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].suggestion, "integer");

  d = ParseFails("variable x;\nminimize obj: x;");
  ASSERT_FALSE(d.empty());
  EXPECT_FALSE(d[0].suggestion.has_value());
}

TEST(ParseTest, EditDistance) {
  EXPECT_EQ(EditDistance("maximise", "maximize"), 1u);
  EXPECT_EQ(EditDistance("", "var"), 3u);
  EXPECT_EQ(EditDistance("prams", "param"), 2u);
  EXPECT_EQ(SuggestKeyword("vars", {"var", "param"}), "var");
  EXPECT_EQ(SuggestKeyword("prams", {"var", "param"}), std::nullopt);
}

TEST(ParseTest, RecoversAndReportsSeveralErrors) {
  const std::string text =
      "var x;\nvar y >= ;\nmaximize obj: x + ;\ns.t. c1: x <= 1;\nfoo;";
  std::vector<Diagnostic> d = ParseFails(text);
  ASSERT_EQ(d.size(), 3u);
  EXPECT_EQ(d[0].span.line, 2);
  EXPECT_EQ(d[1].span.line, 3);
  EXPECT_EQ(d[2].span.line, 5);
}

TEST(ParseTest, MissingSemicolonDoesNotSwallowNextStatement) {
  std::vector<Diagnostic> d =
      ParseFails("var x\nmaximize obj: x;\ns.t. c1: x <= 1;");
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].span, (Span{1, 6, 0}));
}

TEST(ParseTest, SemanticErrors) {
  std::vector<Diagnostic> d =
      ParseFails("var x;\nvar x;\nminimize obj: x;");
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].span, (Span{2, 5, 1}));

  d = ParseFails("var x >= 5 <= 1;\nminimize obj: x;");
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].span.line, 1);

  d = ParseFails("var x;\nminimize obj: x*x;");
  ASSERT_EQ(d.size(), 1u);
  EXPECT_NE(d[0].message.find("nonlinear"), std::string::npos);

  d = ParseFails("var x;");
  ASSERT_EQ(d.size(), 1u);
  EXPECT_NE(d[0].message.find("objective"), std::string::npos);

  d = ParseFails("var x; minimize a: x; maximize b: x;");
  ASSERT_EQ(d.size(), 1u);

  d = ParseFails("var x; param x; minimize obj: x;");
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].span, (Span{1, 14, 1}));
}

TEST(ParseTest, ConstraintSidesAndConstants) {
  ProblemIR p = ParseOk(
      "var A; var B;\nminimize obj: A - B + 4;\ns.t. more: A > B + 2;");
  const Constraint& c = p.constraints[0];
  EXPECT_EQ(c.sense, Sense::kGt);
  EXPECT_EQ(c.lhs.terms().at("A"), Scalar(1));
  EXPECT_EQ(c.lhs.terms().at("B"), Scalar(-1));
  EXPECT_EQ(c.rhs, Scalar(2));
  EXPECT_EQ(p.objective.expr.constant(), Scalar(4));
  CanonicalForm form = *Canonicalize(p);
  EXPECT_EQ(form.constraints[0].ToString(), "[A:-1, B:1] < -2");
}

TEST(ParseTest, BoundsAndDomains) {
  ProblemIR p = ParseOk(
      "var f >= -Infinity;\nvar n integer >= -3 <= 7/2;\nvar b binary;\n"
      "var u <= Infinity;\nminimize obj: f + n + b + u;\n");
  EXPECT_FALSE(p.variables[0].lower.has_value());
  EXPECT_EQ(p.variables[1].domain, VariableDomain::kInteger);
  EXPECT_EQ(p.variables[1].lower, Rational(-3));
  EXPECT_EQ(p.variables[1].upper, Rational(7, 2));
  EXPECT_EQ(p.variables[2].domain, VariableDomain::kBinary);
  EXPECT_EQ(p.variables[2].upper, Rational(1));
  EXPECT_EQ(p.variables[3].lower, Rational(0));
  EXPECT_FALSE(p.variables[3].upper.has_value());
}

TEST(ParseTest, ParametersAndIndices) {
  ProblemIR p = ParseOk(
      "param C;\nparam k = -0.5;\nparam c;\nparam t;\nvar x; var y;\n"
      "maximize profit: c[1]*x + 2*c[2]*y;\n"
      "s.t. cap: x + y <= C;\n"
      "s.t. mix: k*x + t[2,\"week 1\"]*y - t[3,cost] >= 0;\n");
  EXPECT_EQ(p.metadata.at(kObjectiveNameKey), "profit");
  ASSERT_EQ(p.bindings.size(), 4u);
  EXPECT_TRUE(std::holds_alternative<UnresolvedSource>(p.bindings[0].source));
  EXPECT_EQ(std::get<InlineScalar>(p.bindings[1].source).value,
            Rational(-1, 2));
  EXPECT_EQ(p.objective.expr.terms().at("y"),
            Scalar::Param(ParamRef{"c", 2, std::nullopt}, 2));
  EXPECT_EQ(p.constraints[0].rhs, Scalar::Param(ParamRef{"C", {}, {}}));
  EXPECT_EQ(p.constraints[1].lhs.terms().at("y"),
            Scalar::Param(ParamRef{"t", 2, "week 1"}));
  EXPECT_EQ(p.constraints[1].lhs.constant(),
            Scalar::Param(ParamRef{"t", 3, "cost"}, -1));

  std::vector<Diagnostic> d = ParseFails("var x; minimize obj: d[1]*x;");
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].message, "undeclared parameter d");
  d = ParseFails("param c; var x; minimize obj: c[0]*x;");
  ASSERT_EQ(d.size(), 1u);
}

TEST(ParseTest, KeywordsAreContextual) {
  ProblemIR p = ParseOk(
      "var var; var integer integer; var Infinity >= -Infinity;\n"
      "maximize maximize: var + integer + Infinity;\n"
      "s.t. s: var <= 1;\ns.t. param: integer + Infinity <= 2;");
  EXPECT_EQ(p.variables.size(), 3u);
  EXPECT_EQ(p.variables[1].domain, VariableDomain::kInteger);
}

TEST(PrintTest, RedundantConstraintsAreKept) {
  ProblemIR p;
  p.variables.push_back(VariableDecl{"x"});
  p.objective.expr.AddTerm("x", 1);
  for (int rhs : {20, 10}) {
    Constraint c;
    c.lhs.AddTerm("x", 1);
    c.sense = Sense::kGe;
    c.rhs = rhs;
    p.constraints.push_back(c);
  }
  SourceFile src = *Print(p);
  EXPECT_EQ(src.text,
            "var x >= 0;\n"
            "minimize obj: x;\n"
            "s.t. c1: x >= 20;\n"
            "s.t. c2: x >= 10;\n");
  EXPECT_EQ(ParseOk(src.text).constraints.size(), 2u);
}

TEST(PrintTest, ParametersAndSigns) {
  ProblemIR p = ParseOk(
      "param C = 40;\nparam c;\nvar x >= -2 <= 1/3; var b binary;\n"
      "minimize obj: -x + 1/3*b - 2.5;\n"
      "s.t. c1: -2*c[1]*x + C*b <= -C + 1;\n");
  p.bindings[1].source = FileReference{"costs.csv", "unit", std::nullopt};
  SourceFile src = *Print(p);
  EXPECT_EQ(src.text,
            "param C = 40;\n"
            "param c;  # data file costs.csv, column unit\n"
            "var x >= -2 <= 1/3;\n"
            "var b binary;\n"
            "minimize obj: 1/3*b - x - 2.5;\n"
            "s.t. c1: C*b - 2*c[1]*x <= 1 - C;\n");
  ProblemIR back = ParseOk(src.text);
  EXPECT_EQ(back.objective, p.objective);
  EXPECT_EQ(back.constraints, p.constraints);
}

TEST(PrintTest, RejectsInvalidIR) {
  ProblemIR p;
  absl::StatusOr<SourceFile> src = Print(p);
  ASSERT_FALSE(src.ok());
  EXPECT_EQ(KindOf(src.status()), ErrorKind::kInvalidIR);
}

TEST(PrintTest, UnnamedConstraintsAvoidTakenNames) {
  ProblemIR p;
  p.variables.push_back(VariableDecl{"x"});
  Constraint named;
  named.name = "c1";
  named.lhs.AddTerm("x", 1);
  named.rhs = 1;
  Constraint unnamed = named;
  unnamed.name.reset();
  p.constraints = {unnamed, named};
  SourceFile src = *Print(p);
  EXPECT_NE(src.text.find("s.t. c2: x <= 1;\ns.t. c1: x <= 1;"),
            std::string::npos);
}

// parse(print(p)) canonicalizes identically to p; print is deterministic.
TEST(RoundTripProperty, ThousandRandomProblems) {
  testing::RandomIrGenerator gen(20260501);
  for (int i = 0; i < 1000; ++i) {
    ProblemIR p = gen.Next();
    absl::StatusOr<SourceFile> src = Print(p);
    ASSERT_TRUE(src.ok()) << src.status();
    ASSERT_EQ(Print(p)->text, src->text);
    ParseResult back = Parse(*src);
    ASSERT_TRUE(std::holds_alternative<ProblemIR>(back))
        << src->text << FormatDiagnostics(
                            std::get<std::vector<Diagnostic>>(back));
    const ProblemIR& q = std::get<ProblemIR>(back);
    EXPECT_TRUE(GrammarCheck(*src).empty());
    ASSERT_EQ(*Canonicalize(q), *Canonicalize(p)) << src->text;
    EXPECT_EQ(Print(q)->text, src->text);
  }
}

void ExpectDiagnosticsWellFormed(const std::string& text) {
  ParseResult result = Parse(text);
  if (auto* d = std::get_if<std::vector<Diagnostic>>(&result)) {
    ASSERT_FALSE(d->empty());
    for (const Diagnostic& diagnostic : *d) {
      ASSERT_TRUE(SpanWithin(diagnostic.span, text))
          << diagnostic.span.line << ":" << diagnostic.span.column << "+"
          << diagnostic.span.length << " in\n"
          << text;
    }
  } else {
    ASSERT_TRUE(Validate(std::get<ProblemIR>(result)).empty());
  }
}

// Arbitrary bytes never crash the parser and every span indexes the input.
TEST(FuzzProperty, RandomBytes) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> byte(0, 255);
  std::uniform_int_distribution<int> length(0, 200);
  for (int i = 0; i < 3000; ++i) {
    std::string text(length(rng), '\0');
    for (char& c : text) c = static_cast<char>(byte(rng));
    ExpectDiagnosticsWellFormed(text);
  }
}

// Mutations of valid programs exercise the deeper parser paths.
TEST(FuzzProperty, MutatedPrograms) {
  testing::RandomIrGenerator gen(99);
  std::mt19937 rng(11);
  const std::string alphabet = "+-*/:;[],.<>=#\n \"0123456789xs.tvar";
  int rejected = 0;
  for (int i = 0; i < 2000; ++i) {
    std::string text = Print(gen.Next())->text;
    const int edits = std::uniform_int_distribution<int>(1, 4)(rng);
    for (int e = 0; e < edits && !text.empty(); ++e) {
      std::size_t at =
          std::uniform_int_distribution<std::size_t>(0, text.size() - 1)(rng);
      switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
        case 0:
          text.erase(at, 1);
          break;
        case 1:
          text.insert(text.begin() + at,
                      alphabet[rng() % alphabet.size()]);
          break;
        default:
          text[at] = alphabet[rng() % alphabet.size()];
      }
    }
    ExpectDiagnosticsWellFormed(text);
    if (std::holds_alternative<std::vector<Diagnostic>>(Parse(text))) {
      ++rejected;
    }
  }
  EXPECT_GT(rejected, 500);
}

TEST(GrammarCheckTest, AcceptsValidAndRejectsInvalid) {
  EXPECT_TRUE(GrammarCheck(SourceFile{"var x; minimize obj: x;"}).empty());
  EXPECT_FALSE(GrammarCheck(SourceFile{"var x; minimize obj x;"}).empty());
}

}  // namespace
}  // namespace modelwright::lang
