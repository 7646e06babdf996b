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

#include "modelwright/solver/solver.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <queue>
#include <set>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "modelwright/common/status.h"
#include "modelwright/ir/validate.h"
#include "simplex.h"

namespace modelwright::solver {

using internal::LpModel;
using internal::LpRow;
using internal::LpSolution;
using internal::LpStatus;
using internal::RowSense;

const char* SolveStatusName(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "Optimal";
    case SolveStatus::kInfeasible: return "Infeasible";
    case SolveStatus::kUnbounded: return "Unbounded";
    case SolveStatus::kIterationLimit: return "IterationLimit";
  }
  return "Unknown";
}

namespace {

BigInt FloorDiv(const Rational& value) {
  const BigInt n = numerator(value);
  const BigInt d = denominator(value);
  BigInt q = n / d;
  if (n < 0 && q * d != n) q -= 1;
  return q;
}

BigInt CeilDiv(const Rational& value) { return -FloorDiv(-value); }

std::string ConstraintLabel(const Constraint& c, std::size_t index) {
  return c.name.has_value() ? *c.name : absl::StrCat("#", index + 1);
}

bool IsIntegral(VariableDomain domain) {
  return domain != VariableDomain::kContinuous;
}

std::string FormatDouble(double value) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, end);
}

// ---- branch and bound

struct MipProblem {
  LpModel lp;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<bool> integral;
};

struct MipOutcome {
  SolveStatus status = SolveStatus::kInfeasible;
  std::vector<double> x;
  double objective = 0;
};

struct Node {
  double bound;
  std::int64_t order;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> x;
};

struct NodeAfter {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.order > b.order;
  }
};

class BranchAndBound {
 public:
  BranchAndBound(const MipProblem& problem, const SolverOptions& options,
                 SolveStats* stats)
      : p_(problem), options_(options), stats_(stats) {}

  // With `first_feasible` the search stops at the first integral point.
  MipOutcome Run(bool first_feasible) {
    MipOutcome out;
    LpSolution root = Lp(p_.lower, p_.upper);
    ++stats_->nodes;
    if (root.status == LpStatus::kIterationLimit) {
      out.status = SolveStatus::kIterationLimit;
      return out;
    }
    if (root.status == LpStatus::kInfeasible) return out;
    if (root.status == LpStatus::kUnbounded) {
      out.status = SolveStatus::kUnbounded;
      return out;
    }
    std::priority_queue<Node, std::vector<Node>, NodeAfter> open;
    std::int64_t order = 0;
    open.push(Node{root.objective, order++, p_.lower, p_.upper, root.x});
    bool have_incumbent = false;
    while (!open.empty()) {
      Node node = open.top();
      open.pop();
      if (have_incumbent && !Improves(node.bound, out.objective)) continue;
      const int branch = MostFractional(node.x);
      if (branch < 0) {
        std::optional<LpSolution> polished = Polish(node);
        if (polished.has_value() &&
            (!have_incumbent || polished->objective < out.objective)) {
          out.x = polished->x;
          out.objective = polished->objective;
          have_incumbent = true;
          if (first_feasible) break;
        }
        continue;
      }
      const double value = node.x[branch];
      for (int side = 0; side < 2; ++side) {
        Node child{0, order++, node.lower, node.upper, {}};
        if (side == 0) {
          child.upper[branch] = std::floor(value);
        } else {
          child.lower[branch] = std::ceil(value);
        }
        if (++stats_->nodes > options_.node_limit) {
          out.status = SolveStatus::kIterationLimit;
          return out;
        }
        LpSolution lp = Lp(child.lower, child.upper);
        if (lp.status == LpStatus::kIterationLimit) {
          out.status = SolveStatus::kIterationLimit;
          return out;
        }
        if (lp.status != LpStatus::kOptimal) continue;
        if (have_incumbent && !Improves(lp.objective, out.objective)) continue;
        child.bound = lp.objective;
        child.x = std::move(lp.x);
        open.push(std::move(child));
      }
    }
    out.status = have_incumbent ? SolveStatus::kOptimal
                                : SolveStatus::kInfeasible;
    return out;
  }

 private:
  LpSolution Lp(const std::vector<double>& lower,
                const std::vector<double>& upper) {
    return internal::SolveLp(p_.lp, lower, upper,
                             options_.feasibility_tolerance,
                             &stats_->simplex_iterations,
                             options_.iteration_limit);
  }

  static bool Improves(double bound, double incumbent) {
    return bound < incumbent - 1e-9 * (1.0 + std::abs(incumbent));
  }

  int MostFractional(const std::vector<double>& x) const {
    int best = -1;
    double best_distance = options_.integrality_tolerance;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (!p_.integral[j]) continue;
      const double distance = std::abs(x[j] - std::round(x[j]));
      if (distance > best_distance + 1e-12) {
        best = static_cast<int>(j);
        best_distance = distance;
      }
    }
    return best;
  }

  // Fixes the integral columns at their rounded values and re-solves for the
  // continuous ones.
  std::optional<LpSolution> Polish(const Node& node) {
    std::vector<double> lower = node.lower;
    std::vector<double> upper = node.upper;
    bool any = false;
    for (std::size_t j = 0; j < node.x.size(); ++j) {
      if (!p_.integral[j]) continue;
      lower[j] = upper[j] = std::round(node.x[j]);
      any = true;
    }
    LpSolution fallback{LpStatus::kOptimal, node.x, node.bound};
    if (!any) return fallback;
    LpSolution lp = Lp(lower, upper);
    if (lp.status != LpStatus::kOptimal) return fallback;
    for (std::size_t j = 0; j < lp.x.size(); ++j) {
      if (p_.integral[j]) lp.x[j] = lower[j];
    }
    return lp;
  }

  const MipProblem& p_;
  const SolverOptions& options_;
  SolveStats* stats_;
};

MipProblem BuildMip(const ProblemIR& p) {
  MipProblem mip;
  const int n = static_cast<int>(p.variables.size());
  std::map<std::string, int> index;
  for (int j = 0; j < n; ++j) index[p.variables[j].name] = j;
  mip.lp.num_columns = n;
  const double sign =
      p.objective.sense == ObjectiveSense::kMaximize ? -1.0 : 1.0;
  mip.lp.objective.assign(n, 0.0);
  for (const auto& [name, coefficient] : p.objective.expr.terms()) {
    mip.lp.objective[index.at(name)] = sign * ToDouble(coefficient.constant());
  }
  mip.lp.objective_constant =
      sign * ToDouble(p.objective.expr.constant().constant());
  for (const Constraint& c : p.constraints) {
    LpRow row{std::vector<double>(n, 0.0), RowSense::kLe,
              ToDouble(c.rhs.constant() - c.lhs.constant().constant())};
    for (const auto& [name, coefficient] : c.lhs.terms()) {
      row.coefficients[index.at(name)] = ToDouble(coefficient.constant());
    }
    row.sense = c.sense == Sense::kEq   ? RowSense::kEq
                : c.sense == Sense::kGe ? RowSense::kGe
                                        : RowSense::kLe;
    mip.lp.rows.push_back(std::move(row));
  }
  for (const VariableDecl& v : p.variables) {
    const bool integral = IsIntegral(v.domain);
    mip.integral.push_back(integral);
    double lower = -HUGE_VAL;
    double upper = HUGE_VAL;
    if (v.lower.has_value()) {
      lower = integral ? static_cast<double>(CeilDiv(*v.lower))
                       : ToDouble(*v.lower);
    }
    if (v.upper.has_value()) {
      upper = integral ? static_cast<double>(FloorDiv(*v.upper))
                       : ToDouble(*v.upper);
    }
    mip.lower.push_back(lower);
    mip.upper.push_back(upper);
  }
  return mip;
}

// True when some all-integer equality row has no integer solution: the gcd
// of its scaled coefficients does not divide its scaled right-hand side.
bool HasIndivisibleEquality(const ProblemIR& p) {
  for (const Constraint& c : p.constraints) {
    if (c.sense != Sense::kEq) continue;
    const Rational rhs = c.rhs.constant() - c.lhs.constant().constant();
    BigInt scale = denominator(rhs);
    bool integral = true;
    for (const auto& [name, coefficient] : c.lhs.terms()) {
      const VariableDecl* v = p.FindVariable(name);
      if (v == nullptr || !IsIntegral(v->domain)) {
        integral = false;
        break;
      }
      scale = boost::multiprecision::lcm(scale,
                                         denominator(coefficient.constant()));
    }
    if (!integral) continue;
    BigInt g = 0;
    for (const auto& [name, coefficient] : c.lhs.terms()) {
      g = boost::multiprecision::gcd(
          g, BigInt(numerator(coefficient.constant() * Rational(scale))));
    }
    const BigInt target = numerator(rhs * Rational(scale));
    if (g == 0 ? target != 0 : target % g != 0) return true;
  }
  return false;
}

absl::Status CheckSolvable(const ProblemIR& problem) {
  std::vector<Violation> violations = Validate(problem);
  if (!violations.empty()) {
    return MakeError(ErrorKind::kInvalidIR, DescribeViolations(violations));
  }
  if (!problem.IsNumeric()) {
    return MakeError(
        ErrorKind::kUnresolvedParameters,
        absl::StrCat("parameters without values: ",
                     absl::StrJoin(problem.ReferencedParameters(), ", ")));
  }
  return absl::OkStatus();
}

}  // namespace

StrictifyResult Strictify(const ProblemIR& problem, const Rational& epsilon) {
  StrictifyResult result{problem, {}};
  for (std::size_t k = 0; k < result.problem.constraints.size(); ++k) {
    Constraint& c = result.problem.constraints[k];
    if (!IsStrict(c.sense)) continue;
    const bool less = c.sense == Sense::kLt;
    bool integral = c.rhs.IsNumeric() && c.lhs.constant().IsNumeric();
    for (const auto& [name, coefficient] : c.lhs.terms()) {
      const VariableDecl* v = problem.FindVariable(name);
      if (v == nullptr || !IsIntegral(v->domain) || !coefficient.IsNumeric() ||
          !IsInteger(coefficient.constant())) {
        integral = false;
        break;
      }
    }
    const std::string label = ConstraintLabel(c, k);
    if (integral) {
      const Rational bound = c.rhs.constant() - c.lhs.constant().constant();
      c.lhs.AddConstant(-c.lhs.constant());
      c.rhs = Scalar(Rational(less ? CeilDiv(bound) - 1 : FloorDiv(bound) + 1));
      c.sense = less ? Sense::kLe : Sense::kGe;
      result.notes.push_back(absl::StrCat(
          "strict ", label, " over integers made exact: ", c.lhs.ToString(),
          " ", SenseSymbol(c.sense), " ", c.rhs.ToString()));
    } else {
      c.rhs = less ? c.rhs - Scalar(epsilon) : c.rhs + Scalar(epsilon);
      c.sense = less ? Sense::kLe : Sense::kGe;
      result.notes.push_back(absl::StrCat(
          "strict ", label, " relaxed by eps=", FormatRational(epsilon), ": ",
          c.lhs.ToString(), " ", SenseSymbol(c.sense), " ",
          c.rhs.ToString()));
    }
  }
  return result;
}

bool CheckFeasible(const ProblemIR& problem,
                   const std::map<std::string, double>& assignment,
                   const SolverOptions& options) {
  const double ftol = options.feasibility_tolerance;
  for (const VariableDecl& v : problem.variables) {
    auto it = assignment.find(v.name);
    if (it == assignment.end() || !std::isfinite(it->second)) return false;
    const double x = it->second;
    if (v.lower.has_value()) {
      const double l = ToDouble(*v.lower);
      if (x < l - ftol * (1.0 + std::abs(l))) return false;
    }
    if (v.upper.has_value()) {
      const double u = ToDouble(*v.upper);
      if (x > u + ftol * (1.0 + std::abs(u))) return false;
    }
    if (IsIntegral(v.domain) &&
        std::abs(x - std::round(x)) > options.integrality_tolerance) {
      return false;
    }
  }
  for (const Constraint& c : problem.constraints) {
    if (!c.rhs.IsNumeric() || !c.lhs.IsNumeric()) return false;
    double lhs = ToDouble(c.lhs.constant().constant());
    double scale = std::abs(lhs);
    for (const auto& [name, coefficient] : c.lhs.terms()) {
      auto it = assignment.find(name);
      if (it == assignment.end()) return false;
      const double term = ToDouble(coefficient.constant()) * it->second;
      lhs += term;
      scale += std::abs(term);
    }
    const double rhs = ToDouble(c.rhs.constant());
    const double tol = ftol * (1.0 + std::max(std::abs(rhs), scale));
    bool ok = true;
    switch (c.sense) {
      case Sense::kLe: ok = lhs <= rhs + tol; break;
      case Sense::kGe: ok = lhs >= rhs - tol; break;
      case Sense::kEq: ok = std::abs(lhs - rhs) <= tol; break;
      case Sense::kLt: ok = lhs < rhs - tol; break;
      case Sense::kGt: ok = lhs > rhs + tol; break;
    }
    if (!ok) return false;
  }
  return true;
}

absl::StatusOr<SolveResult> Solve(const ProblemIR& problem,
                                  const SolverOptions& options) {
  MW_RETURN_IF_ERROR(CheckSolvable(problem));
  StrictifyResult strict = Strictify(problem, options.strict_epsilon);
  SolveResult result;
  result.relaxations = strict.notes;
  if (HasIndivisibleEquality(strict.problem)) {
    result.status = SolveStatus::kInfeasible;
    return result;
  }
  MipProblem mip = BuildMip(strict.problem);

  MipOutcome outcome =
      BranchAndBound(mip, options, &result.stats).Run(/*first_feasible=*/false);
  if (outcome.status == SolveStatus::kUnbounded &&
      std::find(mip.integral.begin(), mip.integral.end(), true) !=
          mip.integral.end()) {
    // An unbounded relaxation leaves the integer problem unbounded only if
    // it has a feasible point at all.
    MipProblem feasibility = mip;
    std::fill(feasibility.lp.objective.begin(),
              feasibility.lp.objective.end(), 0.0);
    MipOutcome probe = BranchAndBound(feasibility, options, &result.stats)
                           .Run(/*first_feasible=*/true);
    if (probe.status != SolveStatus::kOptimal) outcome.status = probe.status;
  }
  result.status = outcome.status;
  if (result.status != SolveStatus::kOptimal) return result;

  double objective = ToDouble(problem.objective.expr.constant().constant());
  for (std::size_t j = 0; j < problem.variables.size(); ++j) {
    result.assignment[problem.variables[j].name] = outcome.x[j];
  }
  for (const auto& [name, coefficient] : problem.objective.expr.terms()) {
    objective += ToDouble(coefficient.constant()) * result.assignment[name];
  }
  result.objective_value = objective;
  return result;
}

absl::StatusOr<std::string> ExportLp(const ProblemIR& problem,
                                     const SolverOptions& options) {
  MW_RETURN_IF_ERROR(CheckSolvable(problem));
  const ProblemIR p = Strictify(problem, options.strict_epsilon).problem;
  auto expr = [](const LinearExpr& e) {
    std::string out;
    for (const auto& [name, coefficient] : e.terms()) {
      const double c = ToDouble(coefficient.constant());
      absl::StrAppend(&out, out.empty() ? (c < 0 ? "- " : "")
                                        : (c < 0 ? " - " : " + "),
                      FormatDouble(std::abs(c)), " ", name);
    }
    return out.empty() ? std::string("0 ") + "__zero" : out;
  };
  std::string out = "\\ Generated by modelwright\n";
  absl::StrAppend(&out,
                  p.objective.sense == ObjectiveSense::kMaximize ? "Maximize"
                                                                 : "Minimize",
                  "\n obj: ");
  const LinearExpr& objective = p.objective.expr;
  bool needs_zero = objective.terms().empty();
  absl::StrAppend(&out, expr(objective));
  const double constant = ToDouble(objective.constant().constant());
  if (constant != 0) {
    absl::StrAppend(&out, constant < 0 ? " - " : " + ",
                    FormatDouble(std::abs(constant)));
  }
  absl::StrAppend(&out, "\nSubject To\n");
  std::set<std::string> used;
  for (std::size_t k = 0; k < p.constraints.size(); ++k) {
    const Constraint& c = p.constraints[k];
    std::string name = c.name.value_or("");
    if (name.empty() || !used.insert(name).second) {
      name = absl::StrCat("R", k + 1);
      used.insert(name);
    }
    if (c.lhs.terms().empty()) needs_zero = true;
    const double rhs = ToDouble(c.rhs.constant() -
                                c.lhs.constant().constant());
    absl::StrAppend(&out, " ", name, ": ", expr(c.lhs), " ",
                    c.sense == Sense::kEq ? "=" : SenseSymbol(c.sense), " ",
                    FormatDouble(rhs), "\n");
  }
  absl::StrAppend(&out, "Bounds\n");
  for (const VariableDecl& v : p.variables) {
    if (v.domain == VariableDomain::kBinary) continue;
    if (!v.lower.has_value() && !v.upper.has_value()) {
      absl::StrAppend(&out, " ", v.name, " free\n");
      continue;
    }
    absl::StrAppend(
        &out, " ",
        v.lower.has_value() ? FormatDouble(ToDouble(*v.lower)) : "-inf",
        " <= ", v.name, " <= ",
        v.upper.has_value() ? FormatDouble(ToDouble(*v.upper)) : "+inf", "\n");
  }
  if (needs_zero) absl::StrAppend(&out, " __zero = 0\n");
  std::vector<std::string> generals;
  std::vector<std::string> binaries;
  for (const VariableDecl& v : p.variables) {
    if (v.domain == VariableDomain::kInteger) generals.push_back(v.name);
    if (v.domain == VariableDomain::kBinary) binaries.push_back(v.name);
  }
  if (!generals.empty()) {
    absl::StrAppend(&out, "General\n ", absl::StrJoin(generals, " "), "\n");
  }
  if (!binaries.empty()) {
    absl::StrAppend(&out, "Binary\n ", absl::StrJoin(binaries, " "), "\n");
  }
  absl::StrAppend(&out, "End\n");
  return out;
}

}  // namespace modelwright::solver
