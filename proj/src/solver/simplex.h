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

#ifndef MODELWRIGHT_SOLVER_SIMPLEX_H_
#define MODELWRIGHT_SOLVER_SIMPLEX_H_

#include <cstdint>
#include <vector>

namespace modelwright::solver::internal {

enum class RowSense { kLe, kGe, kEq };

struct LpRow {
  std::vector<double> coefficients;  // dense over model columns
  RowSense sense;
  double rhs;
};

// minimize objective . x + objective_constant over rows and column bounds.
struct LpModel {
  int num_columns = 0;
  std::vector<LpRow> rows;
  std::vector<double> objective;
  double objective_constant = 0;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;
  double objective = 0;
};

// Two-phase primal simplex on a dense tableau with Bland's rule. Infinite
// bounds are +-HUGE_VAL. `iterations` accumulates pivots; exceeding `limit`
// yields kIterationLimit.
LpSolution SolveLp(const LpModel& model, const std::vector<double>& lower,
                   const std::vector<double>& upper, double feasibility_tolerance,
                   std::int64_t* iterations, std::int64_t limit);

}  // namespace modelwright::solver::internal

#endif  // MODELWRIGHT_SOLVER_SIMPLEX_H_
