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

#ifndef MODELWRIGHT_COMMON_STRINGS_H_
#define MODELWRIGHT_COMMON_STRINGS_H_

#include <string>
#include <string_view>
#include <vector>

namespace modelwright {

std::string Trim(std::string_view text);
// ASCII only; other bytes pass through unchanged.
std::string ToLower(std::string_view text);
std::vector<std::string> SplitLines(std::string_view text);
bool StartsWith(std::string_view text, std::string_view prefix);
bool EndsWith(std::string_view text, std::string_view suffix);
// Collapses whitespace runs to one space, trims, and lowercases ASCII.
std::string NormalizeWhitespace(std::string_view text);

}  // namespace modelwright

#endif  // MODELWRIGHT_COMMON_STRINGS_H_
