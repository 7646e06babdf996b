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

#ifndef MODELWRIGHT_TESTS_SUPPORT_RANDOM_IR_H_
#define MODELWRIGHT_TESTS_SUPPORT_RANDOM_IR_H_

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "modelwright/ir/problem.h"

namespace modelwright::testing {

struct RandomIrOptions {
  int max_variables = 6;
  int max_constraints = 6;
  bool allow_strict = true;
  bool allow_fractions = true;
  bool allow_free_variables = true;
  bool allow_constraint_names = true;
};

// Valid, fully numeric ProblemIRs with varied names, domains, bounds,
// senses, constants and fractional coefficients (including non-terminating
// decimals such as 1/3).
class RandomIrGenerator {
 public:
  explicit RandomIrGenerator(unsigned seed, RandomIrOptions options = {})
      : rng_(seed), options_(options) {}

  ProblemIR Next() {
    ProblemIR p;
    const int n = Uniform(1, options_.max_variables);
    std::vector<std::string> names = PickNames(n);
    for (const std::string& name : names) {
      VariableDecl v;
      v.name = name;
      const int kind = Uniform(0, 9);
      if (kind < 2) {
        v = BinaryVariable(name);
      } else {
        v.domain = kind < 5 ? VariableDomain::kInteger
                            : VariableDomain::kContinuous;
        const int bounds = Uniform(0, 5);
        if (bounds == 1) v.upper = Rational(Uniform(1, 20));
        if (bounds == 2) v.lower = Rational(-Uniform(0, 10));
        if (bounds == 3 && options_.allow_free_variables) v.lower.reset();
        if (bounds == 4) {
          v.lower = Rational(Uniform(-5, 5));
          v.upper = *v.lower + Uniform(0, 10);
        }
        if (bounds == 5 && options_.allow_free_variables) {
          v.lower.reset();
          v.upper = Rational(Uniform(-5, 5));
        }
      }
      p.variables.push_back(std::move(v));
    }
    p.objective.sense =
        Uniform(0, 1) ? ObjectiveSense::kMaximize : ObjectiveSense::kMinimize;
    p.objective.expr = RandomExpr(names, /*allow_empty=*/true);
    if (Uniform(0, 3) == 0) p.objective.expr.AddConstant(Coefficient());
    const int m = Uniform(0, options_.max_constraints);
    for (int i = 0; i < m; ++i) {
      Constraint c;
      if (options_.allow_constraint_names && Uniform(0, 2) == 0) {
        c.name = "row_" + std::to_string(i);
      }
      c.lhs = RandomExpr(names, /*allow_empty=*/false);
      if (Uniform(0, 4) == 0) c.lhs.AddConstant(Coefficient());
      const int sense = Uniform(0, options_.allow_strict ? 4 : 2);
      c.sense = static_cast<Sense>(sense);
      c.rhs = Scalar(Coefficient());
      p.constraints.push_back(std::move(c));
    }
    return p;
  }

  int Uniform(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }

  Rational Coefficient() {
    Rational value = Rational(Uniform(-9, 9));
    if (options_.allow_fractions) {
      const int shape = Uniform(0, 5);
      if (shape == 0) value /= 4;
      if (shape == 1) value /= 3;
      if (shape == 2) value = Rational(Uniform(-999, 999), 100);
    }
    return value;
  }

  std::mt19937& rng() { return rng_; }

 private:
  std::vector<std::string> PickNames(int n) {
    static const char* const kPool[] = {
        "x", "y", "z", "A", "B", "chairs", "tables", "x1", "x2", "x10",
        "_tmp", "Var_9", "integer", "var", "obj", "profit", "a_b", "Z"};
    std::vector<std::string> pool(std::begin(kPool), std::end(kPool));
    std::shuffle(pool.begin(), pool.end(), rng_);
    pool.resize(n);
    return pool;
  }

  LinearExpr RandomExpr(const std::vector<std::string>& names,
                        bool allow_empty) {
    LinearExpr e;
    for (const std::string& name : names) {
      if (Uniform(0, 2) > 0) {
        Rational c = Coefficient();
        if (c == 0) c = 1;
        e.AddTerm(name, c);
      }
    }
    if (!allow_empty && e.terms().empty()) e.AddTerm(names.front(), 1);
    return e;
  }

  std::mt19937 rng_;
  RandomIrOptions options_;
};

}  // namespace modelwright::testing

#endif  // MODELWRIGHT_TESTS_SUPPORT_RANDOM_IR_H_
