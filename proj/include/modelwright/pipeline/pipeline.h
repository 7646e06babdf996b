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

#ifndef MODELWRIGHT_PIPELINE_PIPELINE_H_
#define MODELWRIGHT_PIPELINE_PIPELINE_H_

#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "modelwright/llm/backend.h"
#include "modelwright/pipeline/data.h"
#include "modelwright/pipeline/session.h"
#include "modelwright/pipeline/stages.h"
#include "modelwright/solver/solver.h"

namespace modelwright::pipeline {

struct PipelineOptions {
  int max_retries = 2;
  InterpretMode interpret_mode = InterpretMode::kTemplate;
  solver::SolverOptions solver;
};

// Drives a session through the stages, recording every transition. Methods
// are reentrant across sessions; callers serialize calls per session.
// Stage failures are recorded on the session; only storage failures and
// caller mistakes come back as errors.
class Pipeline {
 public:
  Pipeline(llm::Backend& backend, PipelineOptions options = {})
      : backend_(backend), options_(std::move(options)) {}

  // One user turn. Until a relevant message arrives, each message is
  // screened for relevance; afterwards turns are appended to the working
  // description and the run restarts at the completeness check. Returns the
  // reply: a guidance message, a follow-up question, a failure report or
  // the interpretation. Errors: Precondition (empty text), StorageFailure.
  absl::StatusOr<std::string> PostMessage(SessionRecorder& recorder,
                                          const std::string& text,
                                          const FileContents& files,
                                          llm::Transcript* transcript = nullptr);

  // Replaces one artifact and regenerates what follows it. A description
  // re-enters at the completeness check, a formulation (ProblemIR JSON) at
  // code generation, code at the grammar check. Errors: Precondition (no
  // such artifact yet), InvalidIR (rejected formulation or code with
  // diagnostics; the findings are recorded on the session), StorageFailure.
  absl::StatusOr<std::string> EditArtifact(
      SessionRecorder& recorder, Stage stage, const std::string& content,
      const FileContents& files, llm::Transcript* transcript = nullptr);

  // Binds data, solves and interprets the staged code. Errors: Precondition
  // (no code, or code with diagnostics), StorageFailure.
  absl::StatusOr<std::string> Solve(SessionRecorder& recorder,
                                    const FileContents& files,
                                    llm::Transcript* transcript = nullptr);

  const PipelineOptions& options() const { return options_; }

 private:
  absl::StatusOr<std::string> FromCompleteness(SessionRecorder& recorder,
                                               const FileContents& files,
                                               llm::Transcript* transcript);
  absl::StatusOr<std::string> FromFormulate(SessionRecorder& recorder,
                                            const FileContents& files,
                                            llm::Transcript* transcript);
  absl::StatusOr<std::string> FromFormulation(SessionRecorder& recorder,
                                              const ProblemIR& problem,
                                              const Requirements& requirements,
                                              const FileContents& files,
                                              llm::Transcript* transcript);
  absl::StatusOr<std::string> FromCode(SessionRecorder& recorder,
                                       const lang::SourceFile& code,
                                       const FileContents& files,
                                       llm::Transcript* transcript);
  absl::StatusOr<std::string> RunSolve(SessionRecorder& recorder,
                                       const FileContents& files,
                                       llm::Transcript* transcript);

  llm::Backend& backend_;
  PipelineOptions options_;
};

// Bindings the printed code cannot carry (inline vectors and tables, file
// references) are taken from `formulation` for parameters the code leaves
// unresolved.
ProblemIR ReattachBindings(ProblemIR code_problem, const ProblemIR& formulation);

}  // namespace modelwright::pipeline

#endif  // MODELWRIGHT_PIPELINE_PIPELINE_H_
