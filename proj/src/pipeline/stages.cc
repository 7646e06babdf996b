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

#include "modelwright/pipeline/stages.h"

#include <charconv>
#include <cmath>
#include <set>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "modelwright/common/status.h"
#include "modelwright/common/strings.h"
#include "modelwright/ir/json_io.h"
#include "modelwright/ir/validate.h"
#include "modelwright/lang/miniapl.h"
#include "modelwright/llm/prompts.h"

namespace modelwright::pipeline {
namespace {

using llm::ChatMessage;
using llm::Role;

bool ContainsAny(const std::string& text,
                 std::initializer_list<const char*> needles) {
  for (const char* needle : needles) {
    if (text.find(needle) != std::string::npos) return true;
  }
  return false;
}

bool IsBackendFailure(const absl::Status& status) {
  const ErrorKind kind = KindOf(status);
  return kind == ErrorKind::kBackendUnavailable || kind == ErrorKind::kTimeout;
}

std::string JoinPhrases(const std::vector<std::string>& phrases) {
  if (phrases.size() <= 1) return phrases.empty() ? "" : phrases[0];
  std::vector<std::string> head(phrases.begin(), phrases.end() - 1);
  return absl::StrCat(absl::StrJoin(head, ", "), " and ", phrases.back());
}

std::string FollowUpQuestion(const std::vector<std::string>& missing) {
  std::vector<std::string> asks;
  for (const std::string& element : missing) {
    if (element == "objective") {
      asks.push_back("what you want to maximize or minimize");
    } else if (element == "variables") {
      asks.push_back("which quantities you want to decide");
    } else if (element == "constraints") {
      asks.push_back(
          "which limits apply (for example amounts you can use at most or "
          "must reach at least)");
    } else if (element == "parameters") {
      asks.push_back("the numbers involved, such as costs, profits or "
                     "capacities");
    }
  }
  return absl::StrCat("To build the model I still need to know ",
                      JoinPhrases(asks), ". Could you tell me?");
}

std::vector<std::string> OrderedMissing(const std::set<std::string>& found) {
  std::vector<std::string> out;
  for (const char* element : kCompletenessElements) {
    if (found.count(element) > 0) out.push_back(element);
  }
  return out;
}

CompletenessReport Finish(std::vector<std::string> missing,
                          std::string question, bool used_fallback) {
  CompletenessReport report;
  report.missing = std::move(missing);
  report.complete = report.missing.empty();
  report.used_fallback = used_fallback;
  if (!report.complete) {
    question = Trim(question);
    report.follow_up_question =
        question.empty() ? FollowUpQuestion(report.missing) : question;
  }
  return report;
}

std::vector<std::string> NameList(const nlohmann::json& value) {
  std::vector<std::string> out;
  if (!value.is_array()) return out;
  for (const nlohmann::json& item : value) {
    if (item.is_string()) out.push_back(item.get<std::string>());
  }
  return out;
}

void ReadFlagOrList(const nlohmann::json& doc, const char* key, bool* all,
                    std::vector<std::string>* names) {
  if (!doc.contains(key)) return;
  const nlohmann::json& value = doc[key];
  if (value.is_boolean()) *all = *all || value.get<bool>();
  for (std::string& name : NameList(value)) names->push_back(std::move(name));
}

void AppendUnique(std::vector<std::string>* into,
                  const std::vector<std::string>& from) {
  for (const std::string& name : from) {
    if (std::find(into->begin(), into->end(), name) == into->end()) {
      into->push_back(name);
    }
  }
}

bool Contains(const std::vector<std::string>& names, const std::string& name) {
  return std::find(names.begin(), names.end(), name) != names.end();
}

std::string RenderOrDie(const llm::PromptTemplate& prompt,
                        const std::map<std::string, std::string>& bindings) {
  return *llm::Render(prompt, bindings);
}

std::vector<ChatMessage> Request(std::string text) {
  return {{Role::kSystem, llm::SystemInstruction().text},
          {Role::kUser, std::move(text)}};
}

absl::StatusOr<Formulation> ParseFormulation(const std::string& reply,
                                             const std::string& description) {
  std::optional<nlohmann::json> doc = llm::ExtractFirstJsonObject(reply);
  if (!doc.has_value()) {
    return MakeError(ErrorKind::kMalformedModelOutput,
                     "the reply contains no JSON object");
  }
  absl::StatusOr<ProblemIR> problem = ProblemFromJson(*doc);
  if (!problem.ok()) {
    return MakeError(KindOf(problem.status()) == ErrorKind::kUnknown
                         ? ErrorKind::kMalformedModelOutput
                         : KindOf(problem.status()),
                     std::string(problem.status().message()));
  }
  std::vector<Violation> violations = Validate(*problem);
  if (!violations.empty()) {
    return MakeError(ErrorKind::kInvalidIR, DescribeViolations(violations));
  }
  Formulation out;
  out.problem = *std::move(problem);
  out.requirements = MergeRequirements(
      RequirementsFromJson(doc->value("requirements", nlohmann::json())),
      RequirementsFromDescription(description));
  out.reply = reply;
  return out;
}

std::string ConstraintLabel(const Constraint& c, std::size_t index) {
  return c.name.value_or(absl::StrCat("#", index + 1));
}

}  // namespace

std::string RelevanceRequest(const std::string& description) {
  return RenderOrDie(llm::RelevanceCheck(), {{"Description", description}});
}

std::string CompletenessRequest(const std::string& description) {
  return RenderOrDie(llm::CompletenessCheck(), {{"Description", description}});
}

std::string FormulationRequest(const std::string& description,
                               const llm::PromptTemplate& prompt) {
  absl::StatusOr<std::string> text =
      llm::Render(prompt, {{"Question_and_Answer_of_Case1", llm::DefaultCase()},
                           {"Question", description}});
  return text.ok() ? *text : prompt.text;
}

std::string FeedbackRequest(const std::string& description,
                            const std::string& previous_reply,
                            const std::string& diagnostics) {
  return RenderOrDie(llm::FormulationFeedback(),
                     {{"Question", description},
                      {"Previous_Output", previous_reply},
                      {"Diagnostics", diagnostics}});
}

std::string ParaphraseRequest(const std::string& report) {
  return RenderOrDie(llm::InterpretationParaphrase(), {{"Report", report}});
}

nlohmann::json ToJson(const CompletenessReport& report) {
  return {{"complete", report.complete},
          {"missing", report.missing},
          {"follow_up_question", report.follow_up_question},
          {"used_fallback", report.used_fallback}};
}

CompletenessReport CompletenessFromJson(const nlohmann::json& doc) {
  CompletenessReport report;
  report.complete = doc.value("complete", false);
  report.missing = NameList(doc.value("missing", nlohmann::json()));
  report.follow_up_question = doc.value("follow_up_question", "");
  report.used_fallback = doc.value("used_fallback", false);
  return report;
}

absl::StatusOr<bool> CheckRelevance(const std::string& description,
                                    llm::Backend& backend,
                                    llm::Transcript* transcript) {
  if (Trim(description).empty()) {
    return MakeError(ErrorKind::kPrecondition, "the message is empty");
  }
  MW_ASSIGN_OR_RETURN(
      ChatMessage reply,
      backend.Complete(Request(RelevanceRequest(description)), transcript));
  std::optional<nlohmann::json> doc = llm::ExtractFirstJsonObject(reply.content);
  if (doc.has_value() && doc->contains("relevant") &&
      (*doc)["relevant"].is_boolean()) {
    return (*doc)["relevant"].get<bool>();
  }
  const std::string lower = ToLower(Trim(reply.content));
  if (StartsWith(lower, "yes")) return true;
  if (StartsWith(lower, "no")) return false;
  return MakeError(ErrorKind::kMalformedModelOutput,
                   "the relevance reply is neither JSON nor yes/no");
}

CompletenessReport KeywordCompleteness(const std::string& description) {
  const std::string text = ToLower(description);
  std::set<std::string> missing;
  if (!ContainsAny(text, {"maximi", "minimi", "maximum", "minimum", "profit",
                          "cost", "revenue", "最大", "最小", "利润", "成本"})) {
    missing.insert("objective");
  }
  if (!ContainsAny(text, {"how many", "how much", "number of", "amount of",
                          "decide", "determine", "quantit", "多少", "数量",
                          "决定"})) {
    missing.insert("variables");
  }
  if (!ContainsAny(text, {"at most", "at least", "no more than",
                          "no less than", "not exceed", "more than",
                          "less than", "up to", "limit", "available",
                          "capacity", "budget", "only have", "至多", "至少",
                          "不超过", "不少于", "最多", "限制", "大于",
                          "小于"})) {
    missing.insert("constraints");
  }
  if (text.find_first_of("0123456789") == std::string::npos) {
    missing.insert("parameters");
  }
  return Finish(OrderedMissing(missing), "", /*used_fallback=*/true);
}

absl::StatusOr<CompletenessReport> CheckCompleteness(
    const std::string& description, llm::Backend& backend,
    llm::Transcript* transcript) {
  if (Trim(description).empty()) {
    return MakeError(ErrorKind::kPrecondition, "the description is empty");
  }
  absl::StatusOr<ChatMessage> reply = backend.Complete(
      Request(CompletenessRequest(description)), transcript);
  if (!reply.ok()) {
    if (IsBackendFailure(reply.status())) {
      return KeywordCompleteness(description);
    }
    return reply.status();
  }
  std::optional<nlohmann::json> doc = llm::ExtractFirstJsonObject(reply->content);
  if (!doc.has_value() || !doc->contains("complete")) {
    return KeywordCompleteness(description);
  }
  std::set<std::string> missing;
  for (const std::string& element :
       NameList(doc->value("missing", nlohmann::json()))) {
    missing.insert(ToLower(Trim(element)));
  }
  std::vector<std::string> ordered = OrderedMissing(missing);
  const bool claimed_complete =
      (*doc)["complete"].is_boolean() && (*doc)["complete"].get<bool>();
  if (!claimed_complete && ordered.empty()) {
    ordered = KeywordCompleteness(description).missing;
  }
  std::string question;
  if (doc->contains("follow_up_question") &&
      (*doc)["follow_up_question"].is_string()) {
    question = (*doc)["follow_up_question"].get<std::string>();
  }
  return Finish(std::move(ordered), question, /*used_fallback=*/false);
}

bool Requirements::empty() const {
  return !all_integer && integer.empty() && !all_nonnegative &&
         nonnegative.empty() && required_variables.empty();
}

nlohmann::json ToJson(const Requirements& r) {
  return {{"all_integer", r.all_integer},
          {"integer", r.integer},
          {"all_nonnegative", r.all_nonnegative},
          {"nonnegative", r.nonnegative},
          {"required_variables", r.required_variables}};
}

Requirements RequirementsFromJson(const nlohmann::json& doc) {
  Requirements r;
  if (!doc.is_object()) return r;
  ReadFlagOrList(doc, "integer", &r.all_integer, &r.integer);
  ReadFlagOrList(doc, "all_integer", &r.all_integer, &r.integer);
  ReadFlagOrList(doc, "nonnegative", &r.all_nonnegative, &r.nonnegative);
  ReadFlagOrList(doc, "all_nonnegative", &r.all_nonnegative, &r.nonnegative);
  AppendUnique(&r.required_variables,
               NameList(doc.value("variables", nlohmann::json())));
  AppendUnique(&r.required_variables,
               NameList(doc.value("required_variables", nlohmann::json())));
  return r;
}

Requirements RequirementsFromDescription(const std::string& description) {
  const std::string text = ToLower(description);
  Requirements r;
  r.all_integer = ContainsAny(text, {"integer", "whole number", "整数"});
  r.all_nonnegative =
      ContainsAny(text, {"nonnegative", "non-negative", "非负"});
  return r;
}

Requirements MergeRequirements(Requirements a, const Requirements& b) {
  a.all_integer = a.all_integer || b.all_integer;
  a.all_nonnegative = a.all_nonnegative || b.all_nonnegative;
  AppendUnique(&a.integer, b.integer);
  AppendUnique(&a.nonnegative, b.nonnegative);
  AppendUnique(&a.required_variables, b.required_variables);
  return a;
}

absl::StatusOr<Formulation> Formulate(const std::string& description,
                                      llm::Backend& backend,
                                      llm::Transcript* transcript,
                                      const llm::PromptTemplate& prompt) {
  MW_ASSIGN_OR_RETURN(
      ChatMessage reply,
      backend.Complete(Request(FormulationRequest(description, prompt)),
                       transcript));
  return ParseFormulation(reply.content, description);
}

nlohmann::json ToJson(const Attempt& attempt) {
  return {{"reply", attempt.reply},
          {"error_kind", attempt.error_kind},
          {"diagnostics", attempt.diagnostics}};
}

FormulationOutcome FormulateWithRetry(const std::string& description,
                                      llm::Backend& backend, int max_retries,
                                      llm::Transcript* transcript,
                                      const llm::PromptTemplate& prompt) {
  FormulationOutcome outcome;
  const std::vector<ChatMessage> base =
      Request(FormulationRequest(description, prompt));
  for (int attempt = 0; attempt <= std::max(0, max_retries); ++attempt) {
    std::vector<ChatMessage> messages = base;
    if (attempt > 0) {
      const Attempt& prior = outcome.attempts.back();
      messages.push_back({Role::kAssistant,
                          prior.reply.empty() ? "(empty reply)" : prior.reply});
      messages.push_back(
          {Role::kUser,
           FeedbackRequest(description, prior.reply, prior.diagnostics)});
    }
    absl::StatusOr<ChatMessage> reply = backend.Complete(messages, transcript);
    if (!reply.ok()) {
      outcome.attempts.push_back(
          {"", ErrorKindName(KindOf(reply.status())),
           std::string(reply.status().message())});
      outcome.status = reply.status();
      return outcome;
    }
    absl::StatusOr<Formulation> parsed =
        ParseFormulation(reply->content, description);
    absl::Status failure = parsed.status();
    if (parsed.ok()) {
      absl::StatusOr<CodeCheck> code = GenerateAndCheckCode(parsed->problem);
      if (!code.ok()) {
        failure = code.status();
      } else if (!code->diagnostics.empty()) {
        failure = MakeError(ErrorKind::kInvalidIR,
                            lang::FormatDiagnostics(code->diagnostics));
      }
    }
    if (failure.ok()) {
      outcome.attempts.push_back({reply->content, "", ""});
      outcome.formulation = *std::move(parsed);
      outcome.status = absl::OkStatus();
      return outcome;
    }
    outcome.attempts.push_back({reply->content, ErrorKindName(KindOf(failure)),
                                std::string(failure.message())});
    outcome.status = failure;
  }
  outcome.status = MakeError(
      KindOf(outcome.status),
      absl::StrCat("no usable formulation after ", outcome.attempts.size(),
                   " attempt(s): ", outcome.status.message()));
  return outcome;
}

absl::StatusOr<CodeCheck> GenerateAndCheckCode(const ProblemIR& problem) {
  MW_ASSIGN_OR_RETURN(lang::SourceFile code, lang::Print(problem));
  CodeCheck out;
  out.diagnostics = lang::GrammarCheck(code);
  out.code = std::move(code);
  return out;
}

const char* SensefulKindName(SensefulKind kind) {
  switch (kind) {
    case SensefulKind::kNonIntegerValue: return "NonIntegerValue";
    case SensefulKind::kNegativeValue: return "NegativeValue";
    case SensefulKind::kMissingVariable: return "MissingVariable";
  }
  return "Unknown";
}

nlohmann::json ToJson(const SensefulViolation& v) {
  nlohmann::json doc = {{"kind", SensefulKindName(v.kind)},
                        {"variable", v.variable},
                        {"question", v.question}};
  doc["value"] = v.value.has_value() ? nlohmann::json(*v.value)
                                     : nlohmann::json();
  return doc;
}

std::optional<SensefulViolation> SensefulFromJson(const nlohmann::json& doc) {
  SensefulViolation v;
  const std::string kind = doc.value("kind", "");
  if (kind == "NonIntegerValue") {
    v.kind = SensefulKind::kNonIntegerValue;
  } else if (kind == "NegativeValue") {
    v.kind = SensefulKind::kNegativeValue;
  } else if (kind == "MissingVariable") {
    v.kind = SensefulKind::kMissingVariable;
  } else {
    return std::nullopt;
  }
  v.variable = doc.value("variable", "");
  v.question = doc.value("question", "");
  if (doc.contains("value") && doc["value"].is_number()) {
    v.value = doc["value"].get<double>();
  }
  return v;
}

std::vector<SensefulViolation> SensefulCheck(const ProblemIR& problem,
                                             const solver::SolveResult& result,
                                             const Requirements& requirements,
                                             double tolerance) {
  std::vector<SensefulViolation> out;
  if (result.status != solver::SolveStatus::kOptimal) return out;
  for (const std::string& name : requirements.required_variables) {
    if (problem.FindVariable(name) == nullptr) {
      out.push_back({SensefulKind::kMissingVariable, name, std::nullopt,
                     absl::StrCat("You mentioned '", name,
                                  "', but the model has no such variable. "
                                  "Should it be added?")});
    }
  }
  for (const VariableDecl& v : problem.variables) {
    auto it = result.assignment.find(v.name);
    if (it == result.assignment.end()) continue;
    const double value = it->second;
    if ((requirements.all_integer || Contains(requirements.integer, v.name)) &&
        std::abs(value - std::round(value)) > tolerance) {
      out.push_back(
          {SensefulKind::kNonIntegerValue, v.name, value,
           absl::StrCat("You asked for whole numbers, but ", v.name, " = ",
                        FormatNumber(value),
                        ". Should ", v.name, " be an integer variable?")});
    }
    if ((requirements.all_nonnegative ||
         Contains(requirements.nonnegative, v.name)) &&
        value < -tolerance) {
      out.push_back({SensefulKind::kNegativeValue, v.name, value,
                     absl::StrCat("You asked for non-negative values, but ",
                                  v.name, " = ", FormatNumber(value),
                                  ". Should ", v.name,
                                  " have a lower bound of 0?")});
    }
  }
  return out;
}

std::string FormatNumber(double value) {
  double rounded = std::round(value * 1e9) / 1e9;
  if (!std::isfinite(rounded)) rounded = value;
  if (rounded == 0) rounded = 0;
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), rounded);
  return std::string(buffer, end);
}

std::string TemplateInterpretation(const ProblemIR& problem,
                                   const solver::SolveResult& result) {
  std::string out;
  switch (result.status) {
    case solver::SolveStatus::kOptimal: {
      absl::StrAppend(&out, "The solver found an optimal solution with "
                            "objective value ",
                      FormatNumber(result.objective_value.value_or(0)), " (",
                      ObjectiveSenseName(problem.objective.sense), ").\n");
      for (const VariableDecl& v : problem.variables) {
        auto it = result.assignment.find(v.name);
        if (it == result.assignment.end()) continue;
        const double value = it->second;
        absl::StrAppend(&out, v.name, " = ", FormatNumber(value));
        const double tol = 1e-9 * (1 + std::abs(value));
        if (v.lower.has_value() && std::abs(value - ToDouble(*v.lower)) <= tol) {
          absl::StrAppend(&out, " (at its lower bound ",
                          FormatRational(*v.lower), ")");
        } else if (v.upper.has_value() &&
                   std::abs(value - ToDouble(*v.upper)) <= tol) {
          absl::StrAppend(&out, " (at its upper bound ",
                          FormatRational(*v.upper), ")");
        }
        out += "\n";
      }
      break;
    }
    case solver::SolveStatus::kInfeasible: {
      std::vector<std::string> labels;
      for (std::size_t i = 0; i < problem.constraints.size(); ++i) {
        labels.push_back(ConstraintLabel(problem.constraints[i], i));
      }
      absl::StrAppend(&out, "The problem is infeasible: no assignment "
                            "satisfies all constraints at once.");
      if (labels.empty()) {
        absl::StrAppend(&out, " The variable bounds contradict each other.");
      } else {
        absl::StrAppend(&out, " Constraints to review: ",
                        absl::StrJoin(labels, ", "), ".");
      }
      out += "\n";
      break;
    }
    case solver::SolveStatus::kUnbounded:
      absl::StrAppend(&out, "The problem is unbounded: the objective can "
                            "improve without limit. A variable is probably "
                            "missing an upper bound, or a limiting "
                            "constraint is missing.\n");
      break;
    case solver::SolveStatus::kIterationLimit:
      absl::StrAppend(&out, "The solver stopped at its iteration limit before "
                            "reaching a conclusion.\n");
      break;
  }
  for (const std::string& note : result.relaxations) {
    absl::StrAppend(&out, "Note: ", note, "\n");
  }
  return out;
}

std::string Interpret(const ProblemIR& problem,
                      const solver::SolveResult& result, InterpretMode mode,
                      llm::Backend* backend, llm::Transcript* transcript,
                      bool uses_file_data) {
  std::string report = TemplateInterpretation(problem, result);
  if (mode == InterpretMode::kTemplate) return report;
  if (uses_file_data) {
    return absl::StrCat(report,
                        "(Shown without rewording because the model reads "
                        "values from data files.)\n");
  }
  if (backend == nullptr) {
    return absl::StrCat(report, "(Rewording unavailable: no backend.)\n");
  }
  absl::StatusOr<ChatMessage> reply =
      backend->Complete(Request(ParaphraseRequest(report)), transcript);
  if (!reply.ok() || Trim(reply->content).empty()) {
    return absl::StrCat(report, "(Rewording unavailable: ",
                        reply.ok() ? "empty reply" : reply.status().message(),
                        ")\n");
  }
  return reply->content;
}

}  // namespace modelwright::pipeline
