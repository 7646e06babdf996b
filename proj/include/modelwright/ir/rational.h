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

#ifndef MODELWRIGHT_IR_RATIONAL_H_
#define MODELWRIGHT_IR_RATIONAL_H_

#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace modelwright {

// Exact rational used throughout the IR. Floating point only appears inside
// the solver.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Parses "12", "-3.25", "1e3", "2.5E-2" and "p/q" forms. Returns nullopt for
// anything else, including a zero denominator.
std::optional<Rational> ParseRational(std::string_view text);

// Terminating decimal when the denominator is of the form 2^a 5^b,
// otherwise "p/q". Never uses exponent notation.
std::string FormatRational(const Rational& value);

// Exact value of the shortest decimal that round-trips to `value`. This
// recovers "0.1" from the double nearest to 0.1.
std::optional<Rational> RationalFromDouble(double value);

double ToDouble(const Rational& value);

bool IsInteger(const Rational& value);

// True when FormatRational(value) has no '/'.
bool HasTerminatingDecimal(const Rational& value);

}  // namespace modelwright

#endif  // MODELWRIGHT_IR_RATIONAL_H_
