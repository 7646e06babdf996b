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

#include "simplex.h"

#include <algorithm>
#include <cmath>

namespace modelwright::solver::internal {
namespace {

constexpr double kPivotTolerance = 1e-11;
constexpr double kCostTolerance = 1e-10;
constexpr double kRatioTieTolerance = 1e-12;

// How an original column maps onto nonnegative tableau columns.
struct ColumnMap {
  enum Kind { kShift, kMirror, kFree } kind;
  double offset;  // lower for kShift, upper for kMirror
  int column;
  int negative_column;  // kFree only
};

class Tableau {
 public:
  Tableau(int rows, int columns)
      : rows_(rows), columns_(columns),
        cells_(static_cast<std::size_t>(rows + 1) * (columns + 1), 0.0),
        basis_(rows, -1) {}

  double& at(int row, int column) {
    return cells_[static_cast<std::size_t>(row) * (columns_ + 1) + column];
  }
  double& rhs(int row) { return at(row, columns_); }
  // Reduced-cost row lives after the constraint rows.
  double& cost(int column) { return at(rows_, column); }
  int rows() const { return rows_; }
  int columns() const { return columns_; }
  std::vector<int>& basis() { return basis_; }

  void Pivot(int row, int column) {
    const double pivot = at(row, column);
    for (int j = 0; j <= columns_; ++j) at(row, j) /= pivot;
    at(row, column) = 1.0;
    for (int i = 0; i <= rows_; ++i) {
      if (i == row) continue;
      const double factor = at(i, column);
      if (factor == 0.0) continue;
      for (int j = 0; j <= columns_; ++j) at(i, j) -= factor * at(row, j);
      at(i, column) = 0.0;
    }
    basis_[row] = column;
  }

  // Loads costs and prices out the current basis.
  void SetCosts(const std::vector<double>& costs) {
    for (int j = 0; j <= columns_; ++j) cost(j) = j < columns_ ? costs[j] : 0.0;
    for (int i = 0; i < rows_; ++i) {
      const double cb = costs[basis_[i]];
      if (cb == 0.0) continue;
      for (int j = 0; j <= columns_; ++j) cost(j) -= cb * at(i, j);
    }
  }

 private:
  int rows_;
  int columns_;
  std::vector<double> cells_;
  std::vector<int> basis_;
};

enum class PhaseOutcome { kOptimal, kUnbounded, kLimit };

// Bland's rule: lowest-index improving column, lowest-index basic variable
// among tied ratios.
PhaseOutcome RunPhase(Tableau& t, int enterable_columns,
                      std::int64_t* iterations, std::int64_t limit) {
  while (true) {
    int entering = -1;
    for (int j = 0; j < enterable_columns; ++j) {
      if (t.cost(j) < -kCostTolerance) {
        entering = j;
        break;
      }
    }
    if (entering < 0) return PhaseOutcome::kOptimal;
    int leaving = -1;
    double best_ratio = 0;
    for (int i = 0; i < t.rows(); ++i) {
      const double a = t.at(i, entering);
      if (a <= kPivotTolerance) continue;
      const double ratio = std::max(0.0, t.rhs(i)) / a;
      if (leaving < 0 || ratio < best_ratio - kRatioTieTolerance) {
        leaving = i;
        best_ratio = ratio;
      } else if (ratio <= best_ratio + kRatioTieTolerance &&
                 t.basis()[i] < t.basis()[leaving]) {
        leaving = i;
        best_ratio = std::min(best_ratio, ratio);
      }
    }
    if (leaving < 0) return PhaseOutcome::kUnbounded;
    if (++*iterations > limit) return PhaseOutcome::kLimit;
    t.Pivot(leaving, entering);
  }
}

}  // namespace

LpSolution SolveLp(const LpModel& model, const std::vector<double>& lower,
                   const std::vector<double>& upper,
                   double feasibility_tolerance, std::int64_t* iterations,
                   std::int64_t limit) {
  LpSolution solution;
  const int n = model.num_columns;
  for (int j = 0; j < n; ++j) {
    if (lower[j] > upper[j]) return solution;
  }

  // Map bounded columns onto y >= 0.
  std::vector<ColumnMap> maps(n);
  int structural = 0;
  std::vector<LpRow> rows = model.rows;
  std::vector<std::pair<int, double>> upper_rows;  // (y column, bound)
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(lower[j])) {
      maps[j] = {ColumnMap::kShift, lower[j], structural++, -1};
      if (std::isfinite(upper[j])) {
        upper_rows.emplace_back(maps[j].column, upper[j] - lower[j]);
      }
    } else if (std::isfinite(upper[j])) {
      maps[j] = {ColumnMap::kMirror, upper[j], structural++, -1};
    } else {
      maps[j] = {ColumnMap::kFree, 0.0, structural, structural + 1};
      structural += 2;
    }
  }

  struct Row {
    std::vector<double> a;
    RowSense sense;
    double b;
  };
  std::vector<Row> tableau_rows;
  for (const LpRow& row : rows) {
    Row r{std::vector<double>(structural, 0.0), row.sense, row.rhs};
    for (int j = 0; j < n; ++j) {
      const double a = row.coefficients[j];
      if (a == 0.0) continue;
      switch (maps[j].kind) {
        case ColumnMap::kShift:
          r.a[maps[j].column] += a;
          r.b -= a * maps[j].offset;
          break;
        case ColumnMap::kMirror:
          r.a[maps[j].column] -= a;
          r.b -= a * maps[j].offset;
          break;
        case ColumnMap::kFree:
          r.a[maps[j].column] += a;
          r.a[maps[j].negative_column] -= a;
          break;
      }
    }
    tableau_rows.push_back(std::move(r));
  }
  for (const auto& [column, bound] : upper_rows) {
    Row r{std::vector<double>(structural, 0.0), RowSense::kLe, bound};
    r.a[column] = 1.0;
    tableau_rows.push_back(std::move(r));
  }

  std::vector<double> costs(structural, 0.0);
  for (int j = 0; j < n; ++j) {
    const double c = model.objective[j];
    if (c == 0.0) continue;
    switch (maps[j].kind) {
      case ColumnMap::kShift:
        costs[maps[j].column] += c;
        break;
      case ColumnMap::kMirror:
        costs[maps[j].column] -= c;
        break;
      case ColumnMap::kFree:
        costs[maps[j].column] += c;
        costs[maps[j].negative_column] -= c;
        break;
    }
  }

  // Nonnegative right-hand sides, then slack / surplus / artificial columns.
  int slacks = 0;
  int artificials = 0;
  double max_rhs = 0;
  for (Row& r : tableau_rows) {
    if (r.b < 0) {
      for (double& a : r.a) a = -a;
      r.b = -r.b;
      if (r.sense == RowSense::kLe) {
        r.sense = RowSense::kGe;
      } else if (r.sense == RowSense::kGe) {
        r.sense = RowSense::kLe;
      }
    }
    max_rhs = std::max(max_rhs, r.b);
    if (r.sense != RowSense::kEq) ++slacks;
    if (r.sense != RowSense::kLe) ++artificials;
  }
  const int m = static_cast<int>(tableau_rows.size());
  const int first_artificial = structural + slacks;
  const int total = first_artificial + artificials;
  Tableau t(m, total);
  int next_slack = structural;
  int next_artificial = first_artificial;
  for (int i = 0; i < m; ++i) {
    const Row& r = tableau_rows[i];
    for (int j = 0; j < structural; ++j) t.at(i, j) = r.a[j];
    t.rhs(i) = r.b;
    if (r.sense == RowSense::kLe) {
      t.at(i, next_slack) = 1.0;
      t.basis()[i] = next_slack++;
    } else {
      if (r.sense == RowSense::kGe) t.at(i, next_slack++) = -1.0;
      t.at(i, next_artificial) = 1.0;
      t.basis()[i] = next_artificial++;
    }
  }

  if (artificials > 0) {
    std::vector<double> phase1(total, 0.0);
    for (int j = first_artificial; j < total; ++j) phase1[j] = 1.0;
    t.SetCosts(phase1);
    if (RunPhase(t, total, iterations, limit) == PhaseOutcome::kLimit) {
      solution.status = LpStatus::kIterationLimit;
      return solution;
    }
    if (-t.cost(total) > feasibility_tolerance * (1.0 + max_rhs)) {
      solution.status = LpStatus::kInfeasible;
      return solution;
    }
    // Drive zero-level artificials out of the basis where possible.
    for (int i = 0; i < m; ++i) {
      if (t.basis()[i] < first_artificial) continue;
      for (int j = 0; j < first_artificial; ++j) {
        if (std::abs(t.at(i, j)) > 1e-9) {
          t.Pivot(i, j);
          break;
        }
      }
    }
  }

  std::vector<double> phase2(total, 0.0);
  std::copy(costs.begin(), costs.end(), phase2.begin());
  t.SetCosts(phase2);
  switch (RunPhase(t, first_artificial, iterations, limit)) {
    case PhaseOutcome::kLimit:
      solution.status = LpStatus::kIterationLimit;
      return solution;
    case PhaseOutcome::kUnbounded:
      solution.status = LpStatus::kUnbounded;
      return solution;
    case PhaseOutcome::kOptimal:
      break;
  }

  std::vector<double> y(total, 0.0);
  for (int i = 0; i < m; ++i) y[t.basis()[i]] = std::max(0.0, t.rhs(i));
  solution.x.assign(n, 0.0);
  double objective = model.objective_constant;
  for (int j = 0; j < n; ++j) {
    double value = 0;
    switch (maps[j].kind) {
      case ColumnMap::kShift:
        value = maps[j].offset + y[maps[j].column];
        break;
      case ColumnMap::kMirror:
        value = maps[j].offset - y[maps[j].column];
        break;
      case ColumnMap::kFree:
        value = y[maps[j].column] - y[maps[j].negative_column];
        break;
    }
    solution.x[j] = value;
    objective += model.objective[j] * value;
  }
  solution.objective = objective;
  solution.status = LpStatus::kOptimal;
  return solution;
}

}  // namespace modelwright::solver::internal
