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

#ifndef MODELWRIGHT_LANG_LEXER_H_
#define MODELWRIGHT_LANG_LEXER_H_

#include <string>
#include <string_view>
#include <vector>

#include "modelwright/lang/source.h"

namespace modelwright::lang {

enum class TokenKind {
  kIdent,
  kNumber,  // 12, 0.5, 1/3
  kString,  // "..." (only meaningful inside parameter indices)
  kSuchThat,  // s.t.
  kLe,
  kGe,
  kEq,
  kLt,
  kGt,
  kPlus,
  kMinus,
  kStar,
  kColon,
  kSemicolon,
  kLBracket,
  kRBracket,
  kComma,
  kEnd,
};

struct Token {
  TokenKind kind;
  std::string text;
  Span span;
};

const char* TokenKindName(TokenKind kind);

// Splits MiniAPL source into tokens, ending with kEnd. Characters that start
// no token are reported in `diagnostics` and skipped, so lexing always
// terminates.
std::vector<Token> Tokenize(std::string_view text,
                            std::vector<Diagnostic>* diagnostics);

}  // namespace modelwright::lang

#endif  // MODELWRIGHT_LANG_LEXER_H_
