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

#ifndef MODELWRIGHT_LANG_SOURCE_H_
#define MODELWRIGHT_LANG_SOURCE_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace modelwright::lang {

enum class SourceOrigin { kGenerated, kUserEdited };

struct SourceFile {
  std::string text;
  SourceOrigin origin = SourceOrigin::kGenerated;

  bool operator==(const SourceFile&) const = default;
};

const char* SourceOriginName(SourceOrigin origin);

enum class Severity { kError, kWarning };

// 1-based line and column (bytes). A zero-length span marks a position, e.g.
// end of input.
struct Span {
  int line = 1;
  int column = 1;
  int length = 0;

  bool operator==(const Span&) const = default;
};

struct Diagnostic {
  Severity severity = Severity::kError;
  std::string message;
  Span span;
  // Replacement hint, e.g. "maximize" for a misspelled keyword.
  std::optional<std::string> suggestion;

  bool operator==(const Diagnostic&) const = default;
};

// "2:15: error: expected ';' after the objective"
std::string FormatDiagnostic(const Diagnostic& diagnostic);
std::string FormatDiagnostics(const std::vector<Diagnostic>& diagnostics);

// True when `span` indexes into `text`: the line exists and
// column - 1 + length does not run past the end of that line.
bool SpanWithin(const Span& span, std::string_view text);

}  // namespace modelwright::lang

#endif  // MODELWRIGHT_LANG_SOURCE_H_
