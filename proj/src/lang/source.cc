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

#include "modelwright/lang/source.h"

#include "absl/strings/str_cat.h"

namespace modelwright::lang {

const char* SourceOriginName(SourceOrigin origin) {
  return origin == SourceOrigin::kGenerated ? "generated" : "user-edited";
}

std::string FormatDiagnostic(const Diagnostic& diagnostic) {
  std::string out = absl::StrCat(
      diagnostic.span.line, ":", diagnostic.span.column, ": ",
      diagnostic.severity == Severity::kError ? "error" : "warning", ": ",
      diagnostic.message);
  return out;
}

std::string FormatDiagnostics(const std::vector<Diagnostic>& diagnostics) {
  std::string out;
  for (const Diagnostic& d : diagnostics) {
    absl::StrAppend(&out, FormatDiagnostic(d), "\n");
  }
  return out;
}

bool SpanWithin(const Span& span, std::string_view text) {
  if (span.line < 1 || span.column < 1 || span.length < 0) return false;
  std::size_t start = 0;
  for (int line = 1; line < span.line; ++line) {
    const std::size_t newline = text.find('\n', start);
    if (newline == std::string_view::npos) return false;
    start = newline + 1;
  }
  std::size_t end = text.find('\n', start);
  if (end == std::string_view::npos) end = text.size();
  const std::size_t line_length = end - start;
  return static_cast<std::size_t>(span.column - 1) + span.length <= line_length;
}

}  // namespace modelwright::lang
