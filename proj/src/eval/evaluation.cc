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

#include "modelwright/eval/evaluation.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "modelwright/common/status.h"
#include "modelwright/common/strings.h"
#include "modelwright/ir/json_io.h"
#include "modelwright/ir/validate.h"
#include "modelwright/llm/scripted_backend.h"
#include "modelwright/pipeline/stages.h"

namespace modelwright::eval {
namespace {

using nlohmann::json;

absl::Status RequireValid(const ProblemIR& p, const char* which) {
  std::vector<Violation> violations = Validate(p);
  if (violations.empty()) return absl::OkStatus();
  return MakeError(ErrorKind::kInvalidIR,
                   absl::StrCat(which, " formulation is invalid: ",
                                DescribeViolations(violations)));
}

MatchResult Mismatch(ElementClass element, std::string detail) {
  return MatchResult{false, element, std::move(detail)};
}

std::optional<MatchResult> CompareVariables(const CanonicalForm& pred,
                                            const CanonicalForm& gold) {
  std::map<std::string, const CanonicalVariable*> p, g;
  std::set<std::string> names;
  for (const CanonicalVariable& v : pred.variables) {
    p[v.name] = &v;
    names.insert(v.name);
  }
  for (const CanonicalVariable& v : gold.variables) {
    g[v.name] = &v;
    names.insert(v.name);
  }
  for (const std::string& name : names) {
    auto pi = p.find(name);
    auto gi = g.find(name);
    if (pi == p.end()) {
      return Mismatch(ElementClass::kVariables,
                      absl::StrCat("missing variable ", gi->second->ToString()));
    }
    if (gi == g.end()) {
      return Mismatch(ElementClass::kVariables,
                      absl::StrCat("unexpected variable ",
                                   pi->second->ToString()));
    }
    if (!(*pi->second == *gi->second)) {
      return Mismatch(ElementClass::kVariables,
                      absl::StrCat("variable differs: predicted ",
                                   pi->second->ToString(), ", gold ",
                                   gi->second->ToString()));
    }
  }
  return std::nullopt;
}

std::optional<MatchResult> CompareConstraints(const CanonicalForm& pred,
                                              const CanonicalForm& gold) {
  const auto& p = pred.constraints;
  const auto& g = gold.constraints;
  std::size_t i = 0, j = 0;
  while (i < p.size() || j < g.size()) {
    if (i < p.size() && j < g.size() && p[i] == g[j]) {
      ++i;
      ++j;
      continue;
    }
    if (j < g.size() && (i == p.size() || g[j] < p[i])) {
      return Mismatch(ElementClass::kConstraints,
                      absl::StrCat("missing constraint ", g[j].ToString()));
    }
    return Mismatch(ElementClass::kConstraints,
                    absl::StrCat("unexpected constraint ", p[i].ToString()));
  }
  return std::nullopt;
}

std::vector<llm::ChatMessage> Request(std::string text) {
  return {{llm::Role::kSystem, llm::SystemInstruction().text},
          {llm::Role::kUser, std::move(text)}};
}

json LanguageSummary(const std::vector<Verdict>& verdicts,
                     std::optional<LanguageTag> tag) {
  std::size_t total = 0, correct = 0;
  for (const Verdict& v : verdicts) {
    if (tag.has_value() && v.language != *tag) continue;
    ++total;
    if (v.correct) ++correct;
  }
  return {{"total", total},
          {"correct", correct},
          {"accuracy", Accuracy(correct, total)}};
}

}  // namespace

const char* LanguageTagName(LanguageTag tag) {
  switch (tag) {
    case LanguageTag::kEn: return "en";
    case LanguageTag::kZh: return "zh";
    case LanguageTag::kOther: return "other";
  }
  return "other";
}

LanguageTag ParseLanguageTag(const std::string& text) {
  const std::string lower = ToLower(Trim(text));
  if (lower == "en") return LanguageTag::kEn;
  if (lower == "zh" || lower == "cn") return LanguageTag::kZh;
  return LanguageTag::kOther;
}

json ToJson(const EvalSample& sample) {
  return {{"id", sample.id},
          {"description", sample.description},
          {"language", LanguageTagName(sample.language)},
          {"gold", ToJson(sample.gold)}};
}

absl::StatusOr<EvalSample> SampleFromJson(const json& doc) {
  if (!doc.is_object() || !doc.contains("id") || !doc["id"].is_string() ||
      !doc.contains("description") || !doc["description"].is_string() ||
      !doc.contains("gold")) {
    return MakeError(ErrorKind::kInvalidIR,
                     "a sample needs string id, string description and gold");
  }
  EvalSample sample;
  sample.id = doc["id"].get<std::string>();
  sample.description = doc["description"].get<std::string>();
  sample.language = ParseLanguageTag(doc.value("language", "other"));
  absl::StatusOr<ProblemIR> gold = ProblemFromJson(doc["gold"]);
  if (!gold.ok()) {
    return MakeError(ErrorKind::kInvalidIR,
                     absl::StrCat("sample ", sample.id, ": ",
                                  gold.status().message()));
  }
  sample.gold = *std::move(gold);
  MW_RETURN_IF_ERROR(RequireValid(sample.gold, "gold"));
  return sample;
}

absl::StatusOr<std::vector<EvalSample>> ParseDataset(const std::string& text) {
  std::vector<EvalSample> samples;
  std::set<std::string> ids;
  const std::vector<std::string> lines = SplitLines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (Trim(lines[i]).empty()) continue;
    json doc = json::parse(lines[i], nullptr, false);
    absl::StatusOr<EvalSample> sample =
        doc.is_discarded()
            ? MakeError(ErrorKind::kInvalidIR, "not valid JSON")
            : SampleFromJson(doc);
    if (!sample.ok()) {
      return MakeError(ErrorKind::kInvalidIR,
                       absl::StrCat("line ", i + 1, ": ",
                                    sample.status().message()));
    }
    if (!ids.insert(sample->id).second) {
      return MakeError(ErrorKind::kPrecondition,
                       absl::StrCat("line ", i + 1, ": duplicate id ",
                                    sample->id));
    }
    samples.push_back(*std::move(sample));
  }
  return samples;
}

absl::StatusOr<std::vector<EvalSample>> LoadDataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return MakeError(ErrorKind::kMissingFile,
                     absl::StrCat("cannot read dataset ", path));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseDataset(buffer.str());
}

const char* ElementClassName(ElementClass element) {
  switch (element) {
    case ElementClass::kNone: return "";
    case ElementClass::kVariables: return "variables";
    case ElementClass::kObjective: return "objective";
    case ElementClass::kConstraints: return "constraints";
  }
  return "";
}

absl::StatusOr<MatchResult> ExactMatch(const ProblemIR& predicted,
                                       const ProblemIR& gold,
                                       EquivalenceMode mode) {
  MW_RETURN_IF_ERROR(RequireValid(predicted, "predicted"));
  MW_RETURN_IF_ERROR(RequireValid(gold, "gold"));
  MW_ASSIGN_OR_RETURN(CanonicalForm p, Canonicalize(predicted, mode));
  MW_ASSIGN_OR_RETURN(CanonicalForm g, Canonicalize(gold, mode));
  if (auto m = CompareVariables(p, g)) return *m;
  if (!(p.objective == g.objective)) {
    return Mismatch(ElementClass::kObjective,
                    absl::StrCat("objective differs: predicted ",
                                 p.objective.ToString(), ", gold ",
                                 g.objective.ToString()));
  }
  if (auto m = CompareConstraints(p, g)) return *m;
  return MatchResult{true, ElementClass::kNone, ""};
}

double Accuracy(std::size_t correct, std::size_t total) {
  return total == 0 ? 0.0
                    : static_cast<double>(correct) / static_cast<double>(total);
}

absl::StatusOr<EvalReport> Evaluate(const std::string& dataset_name,
                                    const std::vector<EvalSample>& samples,
                                    llm::Backend& backend,
                                    const llm::PromptTemplate& prompt,
                                    const EvalOptions& options) {
  if (samples.empty()) {
    return MakeError(ErrorKind::kPrecondition, "the dataset is empty");
  }
  std::vector<Verdict> verdicts(samples.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < samples.size(); i = next++) {
      const EvalSample& sample = samples[i];
      Verdict& v = verdicts[i];
      v.id = sample.id;
      v.language = sample.language;
      pipeline::FormulationOutcome outcome = pipeline::FormulateWithRetry(
          sample.description, backend, options.max_retries, nullptr, prompt);
      v.attempts = static_cast<int>(outcome.attempts.size());
      if (!outcome.formulation.has_value()) {
        v.reason = ErrorKindName(KindOf(outcome.status));
        v.detail = std::string(outcome.status.message());
        continue;
      }
      ProblemIR predicted = outcome.formulation->problem;
      absl::StatusOr<MatchResult> match =
          ExactMatch(predicted, sample.gold, options.mode);
      if (match.ok() && !match->match && options.alpha_rename) {
        if (auto renaming =
                FindAlphaRenaming(predicted, sample.gold, options.mode)) {
          match = ExactMatch(RenameVariables(predicted, *renaming),
                             sample.gold, options.mode);
        }
      }
      if (!match.ok()) {
        v.reason = ErrorKindName(KindOf(match.status()));
        v.detail = std::string(match.status().message());
        continue;
      }
      v.correct = match->match;
      v.mismatch = match->element;
      v.detail = match->detail;
    }
  };
  const int threads = std::clamp<int>(
      options.threads, 1, static_cast<int>(samples.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  std::sort(verdicts.begin(), verdicts.end(),
            [](const Verdict& a, const Verdict& b) { return a.id < b.id; });
  EvalReport report;
  report.dataset = dataset_name;
  report.backend = backend.Name();
  report.prompt = prompt.name;
  report.mode = options.alpha_rename
                    ? absl::StrCat(EquivalenceModeName(options.mode), "+alpha")
                    : EquivalenceModeName(options.mode);
  report.verdicts = std::move(verdicts);
  for (const Verdict& v : report.verdicts) {
    if (v.correct) ++report.correct;
  }
  report.accuracy = Accuracy(report.correct, report.verdicts.size());
  return report;
}

json ToJson(const EvalReport& report) {
  json verdicts = json::array();
  for (const Verdict& v : report.verdicts) {
    verdicts.push_back({{"id", v.id},
                        {"language", LanguageTagName(v.language)},
                        {"correct", v.correct},
                        {"mismatch", ElementClassName(v.mismatch)},
                        {"detail", v.detail},
                        {"reason", v.reason},
                        {"attempts", v.attempts}});
  }
  json by_language = json::object();
  for (LanguageTag tag :
       {LanguageTag::kEn, LanguageTag::kZh, LanguageTag::kOther}) {
    json summary = LanguageSummary(report.verdicts, tag);
    if (summary["total"].get<std::size_t>() > 0) {
      by_language[LanguageTagName(tag)] = summary;
    }
  }
  return {{"dataset", report.dataset},
          {"backend", report.backend},
          {"prompt", report.prompt},
          {"mode", report.mode},
          {"total", report.verdicts.size()},
          {"correct", report.correct},
          {"incorrect", report.verdicts.size() - report.correct},
          {"accuracy", report.accuracy},
          {"by_language", by_language},
          {"verdicts", verdicts}};
}

std::string FormatTable(const EvalReport& report) {
  std::vector<std::vector<std::string>> rows = {
      {"Dataset", "Backend", "Mode", "Samples", "Correct", "Accuracy"}};
  auto add = [&](const std::string& label, const json& summary) {
    rows.push_back({label, report.backend, report.mode,
                    std::to_string(summary["total"].get<std::size_t>()),
                    std::to_string(summary["correct"].get<std::size_t>()),
                    absl::StrFormat("%.2f", summary["accuracy"].get<double>())});
  };
  for (LanguageTag tag :
       {LanguageTag::kEn, LanguageTag::kZh, LanguageTag::kOther}) {
    json summary = LanguageSummary(report.verdicts, tag);
    if (summary["total"].get<std::size_t>() > 0) {
      add(absl::StrCat(report.dataset, " (", LanguageTagName(tag), ")"),
          summary);
    }
  }
  add(absl::StrCat(report.dataset, " (all)"),
      LanguageSummary(report.verdicts, std::nullopt));
  std::vector<std::size_t> widths(rows[0].size(), 0);
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      widths[c] = std::max(widths[c], row[c].size());
    }
  }
  std::string out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      const bool numeric = c >= 3;
      const std::string pad(widths[c] - rows[r][c].size(), ' ');
      absl::StrAppend(&out, c == 0 ? "" : "  ",
                      numeric ? pad + rows[r][c] : rows[r][c] + pad);
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += "\n";
    if (r == 0) {
      std::size_t total = 0;
      for (std::size_t w : widths) total += w;
      out += std::string(total + 2 * (widths.size() - 1), '-') + "\n";
    }
  }
  return out;
}

json ToJson(const Candidate& c) {
  return {{"id", c.id},
          {"seed_id", c.seed_id},
          {"prompt", c.prompt},
          {"variant", c.variant},
          {"description", c.description},
          {"proposed", c.proposed},
          {"valid", c.valid},
          {"issues", c.issues},
          {"raw_reply", c.raw_reply}};
}

std::string BootstrapRequest(const EvalSample& seed, int variant,
                             const llm::PromptTemplate& prompt) {
  absl::StatusOr<std::string> text =
      llm::Render(prompt, {{"Seed_Description", seed.description},
                           {"Seed_Formulation", ToJson(seed.gold).dump()},
                           {"Variant", std::to_string(variant)}});
  return text.ok() ? *text : prompt.text;
}

absl::StatusOr<std::vector<Candidate>> BootstrapGenerate(
    const std::vector<EvalSample>& seeds, int n, llm::Backend& backend,
    const llm::PromptTemplate& prompt) {
  if (seeds.empty()) {
    return MakeError(ErrorKind::kPrecondition, "bootstrap needs seeds");
  }
  if (n < 1) {
    return MakeError(ErrorKind::kPrecondition,
                     "bootstrap needs n of at least 1");
  }
  std::vector<Candidate> out;
  for (int i = 0; i < n; ++i) {
    const EvalSample& seed = seeds[i % seeds.size()];
    Candidate c;
    c.id = absl::StrFormat("cand-%04d", i + 1);
    c.seed_id = seed.id;
    c.prompt = prompt.name;
    c.variant = i / static_cast<int>(seeds.size()) + 1;
    MW_ASSIGN_OR_RETURN(
        llm::ChatMessage reply,
        backend.Complete(Request(BootstrapRequest(seed, c.variant, prompt))));
    c.raw_reply = reply.content;
    std::optional<json> doc = llm::ExtractFirstJsonObject(reply.content);
    if (!doc.has_value()) {
      c.issues.push_back("the reply contains no JSON object");
    } else {
      if (doc->contains("description") && (*doc)["description"].is_string()) {
        c.description = (*doc)["description"].get<std::string>();
      }
      if (Trim(c.description).empty()) {
        c.issues.push_back("no problem description");
      }
      if (doc->contains("formulation")) c.proposed = (*doc)["formulation"];
      if (!c.proposed.is_object()) {
        c.issues.push_back("no formulation object");
      } else {
        absl::StatusOr<ProblemIR> ir = ProblemFromJson(c.proposed);
        if (!ir.ok()) {
          c.issues.push_back(std::string(ir.status().message()));
        } else {
          for (const Violation& v : Validate(*ir)) {
            c.issues.push_back(v.message);
          }
        }
      }
    }
    c.valid = c.issues.empty();
    out.push_back(std::move(c));
  }
  return out;
}

absl::Status WriteQueue(const std::string& path,
                        const std::vector<Candidate>& candidates) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) {
    return MakeError(ErrorKind::kStorageFailure,
                     absl::StrCat("cannot open ", path, " for writing"));
  }
  for (const Candidate& c : candidates) {
    out << ToJson(c).dump(-1, ' ', false, json::error_handler_t::replace)
        << "\n";
  }
  out.flush();
  if (!out) {
    return MakeError(ErrorKind::kStorageFailure,
                     absl::StrCat("write to ", path, " failed"));
  }
  return absl::OkStatus();
}

std::map<std::string, std::string> BuildFixtures(
    const std::vector<EvalSample>& samples,
    const std::vector<std::string>& drop_last_constraint,
    const llm::PromptTemplate& prompt) {
  std::map<std::string, std::string> fixtures;
  for (const EvalSample& sample : samples) {
    ProblemIR answer = sample.gold;
    if (std::find(drop_last_constraint.begin(), drop_last_constraint.end(),
                  sample.id) != drop_last_constraint.end() &&
        !answer.constraints.empty()) {
      answer.constraints.pop_back();
    }
    fixtures[llm::FixtureKey(
        pipeline::FormulationRequest(sample.description, prompt))] =
        absl::StrCat("Formulation for ", sample.id, ":\n",
                     ToJson(answer).dump());
  }
  return fixtures;
}

}  // namespace modelwright::eval
