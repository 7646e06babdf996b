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

#include "modelwright/lang/lexer.h"

#include "absl/strings/str_cat.h"

namespace modelwright::lang {

const char* TokenKindName(TokenKind kind) {
  switch (kind) {
    case TokenKind::kIdent: return "identifier";
    case TokenKind::kNumber: return "number";
    case TokenKind::kString: return "string";
    case TokenKind::kSuchThat: return "'s.t.'";
    case TokenKind::kLe: return "'<='";
    case TokenKind::kGe: return "'>='";
    case TokenKind::kEq: return "'='";
    case TokenKind::kLt: return "'<'";
    case TokenKind::kGt: return "'>'";
    case TokenKind::kPlus: return "'+'";
    case TokenKind::kMinus: return "'-'";
    case TokenKind::kStar: return "'*'";
    case TokenKind::kColon: return "':'";
    case TokenKind::kSemicolon: return "';'";
    case TokenKind::kLBracket: return "'['";
    case TokenKind::kRBracket: return "']'";
    case TokenKind::kComma: return "','";
    case TokenKind::kEnd: return "end of input";
  }
  return "token";
}

namespace {

bool IsDigit(char c) { return c >= '0' && c <= '9'; }
bool IsIdentStart(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool IsIdentChar(char c) { return IsIdentStart(c) || IsDigit(c); }

class Lexer {
 public:
  Lexer(std::string_view text, std::vector<Diagnostic>* diagnostics)
      : text_(text), diagnostics_(diagnostics) {}

  std::vector<Token> Run() {
    std::vector<Token> tokens;
    while (true) {
      SkipSpaceAndComments();
      if (pos_ >= text_.size()) break;
      const std::size_t start = pos_;
      const int line = line_;
      const int column = Column();
      std::optional<TokenKind> kind = Next();
      if (!kind.has_value()) continue;
      tokens.push_back(Token{*kind, std::string(text_.substr(start, pos_ - start)),
                             Span{line, column, static_cast<int>(pos_ - start)}});
      if (*kind == TokenKind::kString) {
        tokens.back().text = tokens.back().text.substr(
            1, tokens.back().text.size() - 2);
      }
    }
    tokens.push_back(Token{TokenKind::kEnd, "", Span{line_, Column(), 0}});
    return tokens;
  }

 private:
  int Column() const { return static_cast<int>(pos_ - line_start_) + 1; }
  char Peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  void SkipSpaceAndComments() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '\n') {
        ++pos_;
        ++line_;
        line_start_ = pos_;
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  void Error(std::string message, int length,
             std::optional<std::string> suggestion = std::nullopt) {
    diagnostics_->push_back(Diagnostic{Severity::kError, std::move(message),
                                       Span{line_, Column(), length},
                                       std::move(suggestion)});
  }

  std::optional<TokenKind> Next() {
    const char c = Peek();
    if (c == 's' && Peek(1) == '.' && Peek(2) == 't' && Peek(3) == '.') {
      pos_ += 4;
      return TokenKind::kSuchThat;
    }
    if (IsIdentStart(c)) {
      while (IsIdentChar(Peek())) ++pos_;
      return TokenKind::kIdent;
    }
    if (IsDigit(c)) {
      while (IsDigit(Peek())) ++pos_;
      if (Peek() == '.' && IsDigit(Peek(1))) {
        ++pos_;
        while (IsDigit(Peek())) ++pos_;
      }
      if (Peek() == '/' && IsDigit(Peek(1))) {
        ++pos_;
        while (IsDigit(Peek())) ++pos_;
      }
      return TokenKind::kNumber;
    }
    if (c == '"') {
      std::size_t end = pos_ + 1;
      while (end < text_.size() && text_[end] != '"' && text_[end] != '\n') {
        ++end;
      }
      if (end >= text_.size() || text_[end] != '"') {
        Error("unterminated string", static_cast<int>(end - pos_));
        pos_ = end;
        return std::nullopt;
      }
      pos_ = end + 1;
      return TokenKind::kString;
    }
    switch (c) {
      case '<':
        ++pos_;
        if (Peek() == '=') {
          ++pos_;
          return TokenKind::kLe;
        }
        return TokenKind::kLt;
      case '>':
        ++pos_;
        if (Peek() == '=') {
          ++pos_;
          return TokenKind::kGe;
        }
        return TokenKind::kGt;
      case '=':
        if (Peek(1) == '=') {
          Error("'==' is not an operator; use '=' for equality", 2, "=");
          pos_ += 2;
          return std::nullopt;
        }
        ++pos_;
        return TokenKind::kEq;
      case '+': ++pos_; return TokenKind::kPlus;
      case '-': ++pos_; return TokenKind::kMinus;
      case '*': ++pos_; return TokenKind::kStar;
      case ':': ++pos_; return TokenKind::kColon;
      case ';': ++pos_; return TokenKind::kSemicolon;
      case '[': ++pos_; return TokenKind::kLBracket;
      case ']': ++pos_; return TokenKind::kRBracket;
      case ',': ++pos_; return TokenKind::kComma;
      default:
        break;
    }
    // U+2264 and U+2265 are common in pasted formulas.
    if (text_.substr(pos_, 3) == "\xe2\x89\xa4") {
      Error("unexpected character '\xe2\x89\xa4'", 3, "<=");
      pos_ += 3;
      return std::nullopt;
    }
    if (text_.substr(pos_, 3) == "\xe2\x89\xa5") {
      Error("unexpected character '\xe2\x89\xa5'", 3, ">=");
      pos_ += 3;
      return std::nullopt;
    }
    const unsigned char byte = static_cast<unsigned char>(c);
    if (byte >= 0x20 && byte < 0x7f) {
      Error(absl::StrCat("unexpected character '", std::string(1, c), "'"), 1);
    } else {
      Error(absl::StrCat("unexpected byte 0x", absl::Hex(byte)), 1);
    }
    ++pos_;
    return std::nullopt;
  }

  std::string_view text_;
  std::vector<Diagnostic>* diagnostics_;
  std::size_t pos_ = 0;
  std::size_t line_start_ = 0;
  int line_ = 1;
};

}  // namespace

std::vector<Token> Tokenize(std::string_view text,
                            std::vector<Diagnostic>* diagnostics) {
  return Lexer(text, diagnostics).Run();
}

}  // namespace modelwright::lang
