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

#include "modelwright/ir/canonical.h"

#include <algorithm>
#include <functional>
#include <set>
#include <tuple>

#include "absl/strings/str_cat.h"
#include "modelwright/common/status.h"
#include "modelwright/ir/validate.h"

namespace modelwright {

const char* EquivalenceModeName(EquivalenceMode mode) {
  return mode == EquivalenceMode::kScaled ? "scaled" : "strict";
}

std::optional<EquivalenceMode> ParseEquivalenceMode(const std::string& text) {
  if (text == "strict") return EquivalenceMode::kStrict;
  if (text == "scaled") return EquivalenceMode::kScaled;
  return std::nullopt;
}

const char* CanonicalSenseSymbol(CanonicalSense sense) {
  switch (sense) {
    case CanonicalSense::kLe: return "<=";
    case CanonicalSense::kLt: return "<";
    case CanonicalSense::kEq: return "=";
  }
  return "<=";
}

namespace {

// nullopt sorts first.
int CompareOptional(const std::optional<Rational>& a,
                    const std::optional<Rational>& b) {
  if (!a.has_value() || !b.has_value()) {
    return static_cast<int>(a.has_value()) - static_cast<int>(b.has_value());
  }
  if (*a < *b) return -1;
  if (*b < *a) return 1;
  return 0;
}

std::string TermsToString(const CanonicalTerms& terms) {
  std::string out = "[";
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i > 0) out += ", ";
    absl::StrAppend(&out, terms[i].first, ":", FormatRational(terms[i].second));
  }
  return out + "]";
}

std::string BoundToString(const std::optional<Rational>& b, const char* inf) {
  return b.has_value() ? FormatRational(*b) : std::string(inf);
}

CanonicalTerms ToTerms(const LinearExpr& expr) {
  CanonicalTerms terms;
  terms.reserve(expr.terms().size());
  for (const auto& [name, coeff] : expr.terms()) {
    terms.emplace_back(name, coeff.constant());
  }
  return terms;
}

CanonicalConstraint CanonicalizeConstraint(const Constraint& c,
                                           EquivalenceMode mode) {
  CanonicalConstraint out;
  out.terms = ToTerms(c.lhs);
  out.rhs = c.rhs.constant() - c.lhs.constant().constant();
  bool negate = false;
  switch (c.sense) {
    case Sense::kLe: out.sense = CanonicalSense::kLe; break;
    case Sense::kLt: out.sense = CanonicalSense::kLt; break;
    case Sense::kEq: out.sense = CanonicalSense::kEq; break;
    case Sense::kGe:
      out.sense = CanonicalSense::kLe;
      negate = true;
      break;
    case Sense::kGt:
      out.sense = CanonicalSense::kLt;
      negate = true;
      break;
  }
  if (negate) {
    for (auto& [name, coeff] : out.terms) coeff = -coeff;
    out.rhs = -out.rhs;
  }
  if (mode == EquivalenceMode::kScaled && !out.terms.empty()) {
    Rational divisor = out.terms.front().second;
    if (out.sense != CanonicalSense::kEq && divisor < 0) divisor = -divisor;
    for (auto& [name, coeff] : out.terms) coeff /= divisor;
    out.rhs /= divisor;
  }
  return out;
}

}  // namespace

bool CanonicalVariable::operator<(const CanonicalVariable& other) const {
  if (name != other.name) return name < other.name;
  if (domain != other.domain) return domain < other.domain;
  if (int c = CompareOptional(lower, other.lower); c != 0) return c < 0;
  return CompareOptional(upper, other.upper) < 0;
}

std::string CanonicalVariable::ToString() const {
  return absl::StrCat(name, " ", DomainName(domain), " [",
                      BoundToString(lower, "-inf"), ", ",
                      BoundToString(upper, "+inf"), "]");
}

std::string CanonicalObjective::ToString() const {
  return absl::StrCat(ObjectiveSenseName(sense), " ", TermsToString(terms),
                      " + ", FormatRational(constant));
}

bool CanonicalConstraint::operator<(const CanonicalConstraint& other) const {
  return std::tie(terms, sense, rhs) <
         std::tie(other.terms, other.sense, other.rhs);
}

std::string CanonicalConstraint::ToString() const {
  return absl::StrCat(TermsToString(terms), " ", CanonicalSenseSymbol(sense),
                      " ", FormatRational(rhs));
}

std::string CanonicalForm::ToString() const {
  std::string out = "variables:\n";
  for (const auto& v : variables) absl::StrAppend(&out, "  ", v.ToString(), "\n");
  absl::StrAppend(&out, "objective: ", objective.ToString(), "\nconstraints:\n");
  for (const auto& c : constraints) {
    absl::StrAppend(&out, "  ", c.ToString(), "\n");
  }
  return out;
}

absl::StatusOr<CanonicalForm> Canonicalize(const ProblemIR& problem,
                                           EquivalenceMode mode) {
  std::vector<Violation> violations = Validate(problem);
  if (!violations.empty()) {
    return MakeError(ErrorKind::kInvalidIR, DescribeViolations(violations));
  }
  if (!problem.IsNumeric()) {
    return MakeError(ErrorKind::kInvalidIR,
                     "problem references unresolved parameters; substitute "
                     "parameter values before canonicalizing");
  }
  CanonicalForm form;
  form.variables.reserve(problem.variables.size());
  for (const VariableDecl& v : problem.variables) {
    form.variables.push_back({v.name, v.domain, v.lower, v.upper});
  }
  std::sort(form.variables.begin(), form.variables.end());
  form.objective.sense = problem.objective.sense;
  form.objective.terms = ToTerms(problem.objective.expr);
  form.objective.constant = problem.objective.expr.constant().constant();
  form.constraints.reserve(problem.constraints.size());
  for (const Constraint& c : problem.constraints) {
    form.constraints.push_back(CanonicalizeConstraint(c, mode));
  }
  std::sort(form.constraints.begin(), form.constraints.end());
  return form;
}

ProblemIR ToProblem(const CanonicalForm& form) {
  ProblemIR p;
  for (const CanonicalVariable& v : form.variables) {
    p.variables.push_back({v.name, v.domain, v.lower, v.upper});
  }
  p.objective.sense = form.objective.sense;
  for (const auto& [name, coeff] : form.objective.terms) {
    p.objective.expr.AddTerm(name, coeff);
  }
  p.objective.expr.AddConstant(form.objective.constant);
  for (const CanonicalConstraint& c : form.constraints) {
    Constraint out;
    for (const auto& [name, coeff] : c.terms) out.lhs.AddTerm(name, coeff);
    switch (c.sense) {
      case CanonicalSense::kLe: out.sense = Sense::kLe; break;
      case CanonicalSense::kLt: out.sense = Sense::kLt; break;
      case CanonicalSense::kEq: out.sense = Sense::kEq; break;
    }
    out.rhs = c.rhs;
    p.constraints.push_back(std::move(out));
  }
  return p;
}

ProblemIR RenameVariables(const ProblemIR& problem,
                          const std::map<std::string, std::string>& renaming) {
  auto rename = [&](const std::string& name) {
    auto it = renaming.find(name);
    return it == renaming.end() ? name : it->second;
  };
  auto rename_expr = [&](const LinearExpr& e) {
    LinearExpr out;
    for (const auto& [name, coeff] : e.terms()) out.AddTerm(rename(name), coeff);
    out.AddConstant(e.constant());
    return out;
  };
  ProblemIR out = problem;
  for (VariableDecl& v : out.variables) v.name = rename(v.name);
  out.objective.expr = rename_expr(problem.objective.expr);
  for (Constraint& c : out.constraints) c.lhs = rename_expr(c.lhs);
  return out;
}

namespace {

// Rename-invariant per-variable summary. In strict mode per-constraint
// coefficients are name independent, so they are included; in scaled mode
// the scaling pivot depends on names and only counts are used.
struct Signature {
  CanonicalVariable decl;
  Rational objective_coeff;
  std::vector<std::string> appearances;

  bool operator==(const Signature& o) const {
    return decl.domain == o.decl.domain && decl.lower == o.decl.lower &&
           decl.upper == o.decl.upper && objective_coeff == o.objective_coeff &&
           appearances == o.appearances;
  }
};

std::map<std::string, Signature> Signatures(const CanonicalForm& form,
                                            EquivalenceMode mode) {
  std::map<std::string, Signature> out;
  for (const CanonicalVariable& v : form.variables) out[v.name].decl = v;
  for (const auto& [name, coeff] : form.objective.terms) {
    out[name].objective_coeff = coeff;
  }
  for (const CanonicalConstraint& c : form.constraints) {
    for (const auto& [name, coeff] : c.terms) {
      std::string key = "*";
      if (mode == EquivalenceMode::kStrict) {
        key = absl::StrCat(FormatRational(coeff), CanonicalSenseSymbol(c.sense),
                           FormatRational(c.rhs), "/", c.terms.size());
      }
      out[name].appearances.push_back(std::move(key));
    }
  }
  for (auto& [name, sig] : out) {
    std::sort(sig.appearances.begin(), sig.appearances.end());
  }
  return out;
}

}  // namespace

std::optional<std::map<std::string, std::string>> FindAlphaRenaming(
    const ProblemIR& candidate, const ProblemIR& reference,
    EquivalenceMode mode) {
  absl::StatusOr<CanonicalForm> cand = Canonicalize(candidate, mode);
  absl::StatusOr<CanonicalForm> ref = Canonicalize(reference, mode);
  if (!cand.ok() || !ref.ok()) return std::nullopt;
  if (cand->variables.size() != ref->variables.size()) return std::nullopt;

  const auto cand_sigs = Signatures(*cand, mode);
  const auto ref_sigs = Signatures(*ref, mode);
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::string>> options;
  for (const auto& [cname, csig] : cand_sigs) {
    order.push_back(cname);
    for (const auto& [rname, rsig] : ref_sigs) {
      if (csig == rsig) options[cname].push_back(rname);
    }
    if (options[cname].empty()) return std::nullopt;
  }
  std::sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
    return std::make_pair(options[a].size(), a) <
           std::make_pair(options[b].size(), b);
  });

  std::map<std::string, std::string> mapping;
  std::set<std::string> used;
  long budget = 100000;
  std::function<bool(std::size_t)> search = [&](std::size_t i) -> bool {
    if (--budget < 0) return false;
    if (i == order.size()) {
      absl::StatusOr<CanonicalForm> renamed =
          Canonicalize(RenameVariables(candidate, mapping), mode);
      return renamed.ok() && *renamed == *ref;
    }
    for (const std::string& target : options[order[i]]) {
      if (used.count(target) > 0) continue;
      mapping[order[i]] = target;
      used.insert(target);
      if (search(i + 1)) return true;
      used.erase(target);
      mapping.erase(order[i]);
    }
    return false;
  };
  if (!search(0)) return std::nullopt;
  return mapping;
}

}  // namespace modelwright
