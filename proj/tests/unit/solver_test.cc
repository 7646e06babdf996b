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

#include <cmath>
#include <random>
#include <string>
#include <variant>

#include <gtest/gtest.h>

#include "modelwright/common/status.h"
#include "modelwright/lang/miniapl.h"
#include "modelwright/solver/solver.h"
#include "support/grid_oracle.h"

namespace modelwright::solver {
namespace {

ProblemIR Model(const std::string& text) {
  lang::ParseResult result = lang::Parse(text);
  if (auto* d = std::get_if<std::vector<lang::Diagnostic>>(&result)) {
    ADD_FAILURE() << lang::FormatDiagnostics(*d);
    return {};
  }
  return std::get<ProblemIR>(result);
}

SolveResult SolveOk(const ProblemIR& p, const SolverOptions& options = {}) {
  absl::StatusOr<SolveResult> r = Solve(p, options);
  EXPECT_TRUE(r.ok()) << r.status();
  return r.ok() ? *r : SolveResult{};
}

// Half-plane a.x <= b in two dimensions.
struct HalfPlane {
  double a0, a1, b;
};

// Maximizes c.x over the polygon by trying every pairwise intersection.
std::optional<double> VertexEnumerationMax(const std::vector<HalfPlane>& hs,
                                           double c0, double c1) {
  std::optional<double> best;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    for (std::size_t j = i + 1; j < hs.size(); ++j) {
      const double det = hs[i].a0 * hs[j].a1 - hs[i].a1 * hs[j].a0;
      if (std::abs(det) < 1e-12) continue;
      const double x = (hs[i].b * hs[j].a1 - hs[i].a1 * hs[j].b) / det;
      const double y = (hs[i].a0 * hs[j].b - hs[i].b * hs[j].a0) / det;
      bool feasible = true;
      for (const HalfPlane& h : hs) {
        if (h.a0 * x + h.a1 * y > h.b + 1e-9) feasible = false;
      }
      if (!feasible) continue;
      const double value = c0 * x + c1 * y;
      if (!best.has_value() || value > *best) best = value;
    }
  }
  return best;
}

TEST(SolveTest, RedundantLowerBounds) {
  SolveResult r = SolveOk(Model(
      "var x; minimize obj: x; s.t. a: x >= 20; s.t. b: x >= 10;"));
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_NEAR(r.assignment.at("x"), 20, 1e-9);
  EXPECT_NEAR(*r.objective_value, 20, 1e-9);
}

TEST(SolveTest, TwoDimensionalLpMatchesVertexEnumeration) {
  SolveResult r = SolveOk(Model(
      "var x; var y; maximize obj: 3*x + 2*y;\n"
      "s.t. c1: x + y <= 4; s.t. c2: x <= 2;"));
  std::optional<double> oracle = VertexEnumerationMax(
      {{1, 1, 4}, {1, 0, 2}, {-1, 0, 0}, {0, -1, 0}}, 3, 2);
  ASSERT_TRUE(oracle.has_value());
  EXPECT_DOUBLE_EQ(*oracle, 10);
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_NEAR(*r.objective_value, *oracle, 1e-9);
  EXPECT_NEAR(r.assignment.at("x"), 2, 1e-9);
  EXPECT_NEAR(r.assignment.at("y"), 2, 1e-9);
}

TEST(SolveTest, InfeasibleAndUnbounded) {
  EXPECT_EQ(SolveOk(Model("var x; minimize obj: x; s.t. a: x <= 1; "
                          "s.t. b: x >= 2;"))
                .status,
            SolveStatus::kInfeasible);
  SolveResult r = SolveOk(Model("var x >= 0; maximize obj: x;"));
  EXPECT_EQ(r.status, SolveStatus::kUnbounded);
  EXPECT_TRUE(r.assignment.empty());
  EXPECT_FALSE(r.objective_value.has_value());
}

TEST(SolveTest, IntegerProgramMatchesBruteForce) {
  ProblemIR p = Model(
      "var x integer; var y integer; maximize obj: x + y;\n"
      "s.t. c1: 2*x + 3*y <= 12;");
  int best = -1;
  for (int x = 0; x <= 6; ++x) {
    for (int y = 0; y <= 4; ++y) {
      if (2 * x + 3 * y <= 12) best = std::max(best, x + y);
    }
  }
  EXPECT_EQ(best, 6);
  SolveResult r = SolveOk(p);
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_NEAR(*r.objective_value, best, 1e-9);
  EXPECT_EQ(r.assignment.at("x"), 6);
  EXPECT_EQ(r.assignment.at("y"), 0);
}

TEST(SolveTest, FreeAndUpperBoundedColumns) {
  SolveResult r = SolveOk(Model(
      "var f >= -Infinity; var u >= -Infinity <= 3;\n"
      "minimize obj: f - u + 1;\ns.t. c1: f >= -5; s.t. c2: f + u = -1;"));
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_NEAR(r.assignment.at("f"), -4, 1e-9);
  EXPECT_NEAR(r.assignment.at("u"), 3, 1e-9);
  EXPECT_NEAR(*r.objective_value, -6, 1e-9);
}

TEST(SolveTest, IntegerUnboundedRelaxationWithoutIntegerPoint) {
  EXPECT_EQ(SolveOk(Model("var x integer; var y integer; maximize obj: x;\n"
                          "s.t. c1: 2*x - 2*y = 1;"))
                .status,
            SolveStatus::kInfeasible);
  EXPECT_EQ(SolveOk(Model("var x integer; var y integer; maximize obj: x;\n"
                          "s.t. c1: x - y <= 1/2;"))
                .status,
            SolveStatus::kUnbounded);
}

TEST(SolveTest, FractionalBoundsOnIntegers) {
  SolveResult r = SolveOk(Model(
      "var n integer >= 1/2 <= 7/2; maximize obj: n;"));
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_EQ(r.assignment.at("n"), 3);
  EXPECT_EQ(SolveOk(Model("var n integer >= 1/3 <= 2/3; maximize obj: n;"))
                .status,
            SolveStatus::kInfeasible);
}

TEST(SolveTest, BinaryKnapsack) {
  SolveResult r = SolveOk(Model(
      "var a binary; var b binary; var c binary;\n"
      "maximize obj: 5*a + 4*b + 3*c;\ns.t. w: 2*a + 3*b + c <= 4;"));
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_NEAR(*r.objective_value, 8, 1e-9);
  EXPECT_EQ(r.assignment.at("b"), 0);
}

TEST(SolveTest, MixedIntegerPolishesContinuousPart) {
  SolveResult r = SolveOk(Model(
      "var n integer; var y; maximize obj: 2*n + y;\n"
      "s.t. c1: 3*n + 2*y <= 7; s.t. c2: y <= 1.25;"));
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_EQ(r.assignment.at("n"), 2);
  EXPECT_NEAR(r.assignment.at("y"), 0.5, 1e-12);
  EXPECT_NEAR(*r.objective_value, 4.5, 1e-12);
}

TEST(SolveTest, StrictSenses) {
  SolveResult r = SolveOk(Model(
      "var A integer; var B integer; minimize obj: A;\n"
      "s.t. more: A > B; s.t. floor: B >= 3;"));
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_EQ(r.assignment.at("A"), 4);
  ASSERT_EQ(r.relaxations.size(), 1u);

  ProblemIR p = Model("var x; maximize obj: x; s.t. c1: x < 5;");
  r = SolveOk(p);
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_NEAR(r.assignment.at("x"), 5 - 1e-6, 1e-12);
  EXPECT_TRUE(CheckFeasible(p, r.assignment));
  ASSERT_EQ(r.relaxations.size(), 1u);
  EXPECT_NE(r.relaxations[0].find("c1"), std::string::npos);
}

TEST(SolveTest, Limits) {
  ProblemIR p = Model(
      "var x; var y; maximize obj: 3*x + 2*y;\n"
      "s.t. c1: x + y <= 4; s.t. c2: x <= 2;");
  SolverOptions options;
  options.iteration_limit = 1;
  EXPECT_EQ(SolveOk(p, options).status, SolveStatus::kIterationLimit);

  ProblemIR q = Model(
      "var x integer; var y integer; maximize obj: x + y;\n"
      "s.t. c1: 2*x + 2*y <= 7; s.t. c2: 2*x - 2*y <= 1;");
  options = SolverOptions{};
  options.node_limit = 1;
  EXPECT_EQ(SolveOk(q, options).status, SolveStatus::kIterationLimit);
  EXPECT_EQ(SolveOk(q).status, SolveStatus::kOptimal);
}

TEST(SolveTest, Errors) {
  ProblemIR p = Model("param C; var x; maximize obj: x; s.t. c: x <= C;");
  absl::StatusOr<SolveResult> r = Solve(p);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(KindOf(r.status()), ErrorKind::kUnresolvedParameters);
  EXPECT_EQ(KindOf(Solve(ProblemIR{}).status()), ErrorKind::kInvalidIR);
}

TEST(StrictifyTest, Examples) {
  StrictifyResult s = Strictify(Model(
      "var A integer; var B integer; minimize obj: A; s.t. c: A > B;"));
  EXPECT_EQ(s.problem.constraints[0].sense, Sense::kGe);
  EXPECT_EQ(s.problem.constraints[0].rhs, Scalar(1));
  EXPECT_EQ(s.problem.constraints[0].lhs.terms().at("B"), Scalar(-1));
  ASSERT_EQ(s.notes.size(), 1u);

  s = Strictify(Model("var x; minimize obj: x; s.t. c: x < 5;"),
                Rational(1, 1000000));
  EXPECT_EQ(s.problem.constraints[0].sense, Sense::kLe);
  EXPECT_EQ(s.problem.constraints[0].rhs, Scalar(Rational(4999999, 1000000)));
  ASSERT_EQ(s.notes.size(), 1u);
  EXPECT_NE(s.notes[0].find("0.000001"), std::string::npos);

  ProblemIR plain = Model("var x; minimize obj: x; s.t. c: x <= 5;");
  s = Strictify(plain);
  EXPECT_EQ(s.problem, plain);
  EXPECT_TRUE(s.notes.empty());

  s = Strictify(Model(
      "var n integer; minimize obj: n; s.t. c: 2*n + 1/2 < 7/2;"));
  EXPECT_EQ(s.problem.constraints[0].rhs, Scalar(2));
  EXPECT_EQ(s.problem.constraints[0].sense, Sense::kLe);
  EXPECT_TRUE(s.problem.constraints[0].lhs.constant().IsZero());
}

TEST(CheckFeasibleTest, Examples) {
  ProblemIR redundant = Model(
      "var x; minimize obj: x; s.t. a: x >= 20; s.t. b: x >= 10;");
  EXPECT_TRUE(CheckFeasible(redundant, {{"x", 20}}));
  EXPECT_FALSE(CheckFeasible(redundant, {{"x", 19.9}}));
  EXPECT_FALSE(CheckFeasible(Model("var x integer; minimize obj: x;"),
                             {{"x", 2.5}}));
  ProblemIR strict = Model(
      "var A integer; var B integer; minimize obj: A; s.t. c: A > B;");
  EXPECT_FALSE(CheckFeasible(strict, {{"A", 3}, {"B", 3}}));
  EXPECT_TRUE(CheckFeasible(strict, {{"A", 4}, {"B", 3}}));
  EXPECT_FALSE(CheckFeasible(strict, {{"A", 4}}));
}

// Objective and status agree with exhaustive search on random small MILPs.
TEST(SolverProperty, MatchesGridSearch) {
  std::mt19937 rng(424242);
  int optimal = 0;
  for (int trial = 0; trial < 200; ++trial) {
    testing::GridProblem grid = testing::RandomGridProblem(rng);
    ProblemIR p = grid.ToIR();
    std::optional<std::int64_t> oracle = testing::GridOracle(grid).Optimum();
    SolveResult r = SolveOk(p);
    if (!oracle.has_value()) {
      EXPECT_EQ(r.status, SolveStatus::kInfeasible) << trial;
      continue;
    }
    ++optimal;
    ASSERT_EQ(r.status, SolveStatus::kOptimal) << trial;
    EXPECT_NEAR(*r.objective_value, static_cast<double>(*oracle), 1e-6)
        << trial;
    EXPECT_TRUE(CheckFeasible(p, r.assignment)) << trial;
    EXPECT_TRUE(CheckFeasible(Strictify(p).problem, r.assignment)) << trial;
  }
  EXPECT_GT(optimal, 50);
}

ProblemIR RandomBoundedLp(std::mt19937& rng, int n, int m) {
  auto uniform = [&rng](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  ProblemIR p;
  for (int j = 0; j < n; ++j) {
    p.variables.push_back(VariableDecl{"v" + std::to_string(j),
                                       VariableDomain::kContinuous,
                                       Rational(0), Rational(uniform(1, 10))});
    p.objective.expr.AddTerm(p.variables[j].name,
                             Rational(uniform(-9, 9), uniform(1, 4)));
  }
  p.objective.sense = uniform(0, 1) ? ObjectiveSense::kMaximize
                                    : ObjectiveSense::kMinimize;
  for (int i = 0; i < m; ++i) {
    Constraint c;
    for (int j = 0; j < n; ++j) {
      c.lhs.AddTerm(p.variables[j].name, Rational(uniform(-5, 8), uniform(1, 3)));
    }
    c.sense = Sense::kLe;
    c.rhs = Rational(uniform(0, 30));
    p.constraints.push_back(c);
  }
  return p;
}

// The optimum stays attainable with the objective pinned at z*, it sits on
// a vertex (n tight rows), and random 2-D instances match vertex enumeration.
TEST(SolverProperty, LpOptimumIsAVertex) {
  std::mt19937 rng(5150);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 5)(rng);
    ProblemIR p = RandomBoundedLp(rng, n, n + 1);
    SolveResult r = SolveOk(p);
    ASSERT_EQ(r.status, SolveStatus::kOptimal) << trial;
    ASSERT_TRUE(CheckFeasible(p, r.assignment)) << trial;

    ProblemIR pinned = p;
    Constraint pin;
    pin.lhs = p.objective.expr;
    pin.sense = Sense::kEq;
    pin.rhs = *RationalFromDouble(*r.objective_value);
    pinned.constraints.push_back(pin);
    SolverOptions loose;
    loose.feasibility_tolerance = 1e-7;
    EXPECT_EQ(SolveOk(pinned, loose).status, SolveStatus::kOptimal) << trial;

    int tight = 0;
    for (const VariableDecl& v : p.variables) {
      const double x = r.assignment.at(v.name);
      if (std::abs(x - ToDouble(*v.lower)) < 1e-7 ||
          std::abs(x - ToDouble(*v.upper)) < 1e-7) {
        ++tight;
      }
    }
    for (const Constraint& c : p.constraints) {
      double lhs = 0;
      for (const auto& [name, a] : c.lhs.terms()) {
        lhs += ToDouble(a.constant()) * r.assignment.at(name);
      }
      if (std::abs(lhs - ToDouble(c.rhs.constant())) < 1e-7) ++tight;
    }
    EXPECT_GE(tight, n) << trial;

    if (n == 2) {
      std::vector<HalfPlane> hs;
      const double sign =
          p.objective.sense == ObjectiveSense::kMaximize ? 1.0 : -1.0;
      auto coef = [](const LinearExpr& e, const std::string& v) {
        auto it = e.terms().find(v);
        return it == e.terms().end() ? 0.0 : ToDouble(it->second.constant());
      };
      for (const Constraint& c : p.constraints) {
        hs.push_back({coef(c.lhs, "v0"), coef(c.lhs, "v1"),
                      ToDouble(c.rhs.constant())});
      }
      hs.push_back({-1, 0, 0});
      hs.push_back({0, -1, 0});
      hs.push_back({1, 0, ToDouble(*p.variables[0].upper)});
      hs.push_back({0, 1, ToDouble(*p.variables[1].upper)});
      std::optional<double> best =
          VertexEnumerationMax(hs, sign * coef(p.objective.expr, "v0"),
                               sign * coef(p.objective.expr, "v1"));
      ASSERT_TRUE(best.has_value());
      EXPECT_NEAR(sign * *best, *r.objective_value, 1e-7) << trial;
    }
  }
}

TEST(SolverProperty, Deterministic) {
  std::mt19937 rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    ProblemIR p = testing::RandomGridProblem(rng).ToIR();
    SolveResult a = SolveOk(p);
    SolveResult b = SolveOk(p);
    EXPECT_EQ(a.status, b.status);
    EXPECT_EQ(a.objective_value, b.objective_value);
    EXPECT_EQ(a.assignment, b.assignment);
    EXPECT_EQ(a.stats.nodes, b.stats.nodes);
  }
}

TEST(ExportLpTest, WritesStrictifiedModel) {
  ProblemIR p = Model(
      "var x >= -Infinity; var n integer <= 4; var b binary;\n"
      "maximize profit: 3*x - 1/2*n + b + 7;\n"
      "s.t. cap: x + n <= 10; s.t. more: n > b; s.t. pos: x >= -2;");
  absl::StatusOr<std::string> lp = ExportLp(p);
  ASSERT_TRUE(lp.ok()) << lp.status();
  EXPECT_EQ(*lp,
            "\\ Generated by modelwright\n"
            "Maximize\n"
            " obj: 1 b - 0.5 n + 3 x + 7\n"
            "Subject To\n"
            " cap: 1 n + 1 x <= 10\n"
            " more: - 1 b + 1 n >= 1\n"
            " pos: 1 x >= -2\n"
            "Bounds\n"
            " x free\n"
            " 0 <= n <= 4\n"
            "General\n"
            " n\n"
            "Binary\n"
            " b\n"
            "End\n");
}

}  // namespace
}  // namespace modelwright::solver
