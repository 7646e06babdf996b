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

#include "modelwright/ir/rational.h"

#include <charconv>
#include <cmath>
#include <cstddef>
#include <string>

namespace modelwright {
namespace {

bool AllDigits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

// cpp_int reads a leading 0 as an octal prefix, so strip it first.
BigInt DecimalBigInt(std::string_view digits) {
  while (digits.size() > 1 && digits.front() == '0') digits.remove_prefix(1);
  return BigInt(std::string(digits));
}

BigInt Pow10(long exponent) {
  BigInt result = 1;
  for (long i = 0; i < exponent; ++i) result *= 10;
  return result;
}

// Decimal with optional fraction and exponent, sign already stripped.
std::optional<Rational> ParseUnsignedDecimal(std::string_view text) {
  long exponent = 0;
  const std::size_t e_pos = text.find_first_of("eE");
  if (e_pos != std::string_view::npos) {
    std::string_view exp_text = text.substr(e_pos + 1);
    text = text.substr(0, e_pos);
    bool negative_exp = false;
    if (!exp_text.empty() && (exp_text[0] == '+' || exp_text[0] == '-')) {
      negative_exp = exp_text[0] == '-';
      exp_text.remove_prefix(1);
    }
    // Exponents beyond this are never meaningful in a model and would make
    // BigInt construction arbitrarily expensive.
    if (!AllDigits(exp_text) || exp_text.size() > 4) return std::nullopt;
    exponent = std::stol(std::string(exp_text));
    if (negative_exp) exponent = -exponent;
  }
  std::string digits;
  const std::size_t dot = text.find('.');
  if (dot == std::string_view::npos) {
    if (!AllDigits(text)) return std::nullopt;
    digits = std::string(text);
  } else {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    if (!(AllDigits(whole) || whole.empty()) || !AllDigits(frac)) {
      return std::nullopt;
    }
    digits = std::string(whole) + std::string(frac);
    exponent -= static_cast<long>(frac.size());
  }
  Rational value{DecimalBigInt(digits)};
  if (exponent > 0) value *= Rational(Pow10(exponent));
  if (exponent < 0) value /= Rational(Pow10(-exponent));
  return value;
}

}  // namespace

std::optional<Rational> ParseRational(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  if (text[0] == '+' || text[0] == '-') {
    negative = text[0] == '-';
    text.remove_prefix(1);
  }
  std::optional<Rational> value;
  const std::size_t slash = text.find('/');
  if (slash != std::string_view::npos) {
    std::string_view num = text.substr(0, slash);
    std::string_view den = text.substr(slash + 1);
    if (!AllDigits(num) || !AllDigits(den)) return std::nullopt;
    BigInt d = DecimalBigInt(den);
    if (d == 0) return std::nullopt;
    value = Rational(DecimalBigInt(num), d);
  } else {
    value = ParseUnsignedDecimal(text);
  }
  if (!value.has_value()) return std::nullopt;
  return negative ? Rational(-*value) : *value;
}

bool HasTerminatingDecimal(const Rational& value) {
  BigInt den = boost::multiprecision::denominator(value);
  while (den % 2 == 0) den /= 2;
  while (den % 5 == 0) den /= 5;
  return den == 1;
}

std::string FormatRational(const Rational& value) {
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  if (!HasTerminatingDecimal(value)) return num.str() + "/" + den.str();
  // Scale to an integer by the smallest power of ten.
  int places = 0;
  BigInt scale = 1;
  while ((num * scale) % den != 0) {
    scale *= 10;
    ++places;
  }
  BigInt scaled = num * scale / den;
  const bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  std::string digits = scaled.str();
  if (digits.size() <= static_cast<std::size_t>(places)) {
    digits.insert(0, places + 1 - digits.size(), '0');
  }
  digits.insert(digits.size() - places, ".");
  return negative ? "-" + digits : digits;
}

std::optional<Rational> RationalFromDouble(double value) {
  if (!std::isfinite(value)) return std::nullopt;
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) return std::nullopt;
  return ParseRational(std::string_view(buffer, end - buffer));
}

double ToDouble(const Rational& value) {
  return value.convert_to<double>();
}

bool IsInteger(const Rational& value) {
  return boost::multiprecision::denominator(value) == 1;
}

}  // namespace modelwright
