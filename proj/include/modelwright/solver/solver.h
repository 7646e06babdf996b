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

#ifndef MODELWRIGHT_SOLVER_SOLVER_H_
#define MODELWRIGHT_SOLVER_SOLVER_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "modelwright/ir/problem.h"

namespace modelwright::solver {

struct SolverOptions {
  // Relative to 1 + |rhs|.
  double feasibility_tolerance = 1e-9;
  double integrality_tolerance = 1e-6;
  Rational strict_epsilon = Rational(1, 1000000);
  std::int64_t iteration_limit = 100000;
  std::int64_t node_limit = 100000;
};

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

const char* SolveStatusName(SolveStatus status);

struct SolveStats {
  std::int64_t simplex_iterations = 0;
  std::int64_t nodes = 0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::kInfeasible;
  // Filled iff status is kOptimal.
  std::map<std::string, double> assignment;
  std::optional<double> objective_value;
  // One note per strict-constraint transformation.
  std::vector<std::string> relaxations;
  SolveStats stats;
};

// Solves a numeric LP/MILP. Strict constraints are strictified first.
// Errors: InvalidIR, UnresolvedParameters. Limits surface as a status.
absl::StatusOr<SolveResult> Solve(const ProblemIR& problem,
                                  const SolverOptions& options = {});

struct StrictifyResult {
  ProblemIR problem;
  std::vector<std::string> notes;
};

// Replaces every < / > constraint by a non-strict one. Over integer
// variables with integer coefficients the integer gap is exact
// (A > B becomes A - B >= 1); otherwise the bound moves by `epsilon`.
StrictifyResult Strictify(const ProblemIR& problem,
                          const Rational& epsilon = Rational(1, 1000000));

// Checks bounds, integrality and every constraint under its original sense;
// strict senses need a margin larger than the tolerance.
bool CheckFeasible(const ProblemIR& problem,
                   const std::map<std::string, double>& assignment,
                   const SolverOptions& options = {});

// CPLEX LP text of the strictified problem.
absl::StatusOr<std::string> ExportLp(const ProblemIR& problem,
                                     const SolverOptions& options = {});

}  // namespace modelwright::solver

#endif  // MODELWRIGHT_SOLVER_SOLVER_H_
