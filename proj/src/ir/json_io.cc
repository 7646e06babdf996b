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

#include "modelwright/ir/json_io.h"

#include <cstdint>
#include <limits>
#include <set>

#include "absl/strings/str_cat.h"
#include "modelwright/common/strings.h"
#include "modelwright/common/status.h"

namespace modelwright {

using nlohmann::json;

namespace {

absl::Status SchemaError(const std::string& message) {
  return MakeError(ErrorKind::kInvalidIR, message);
}

std::string TypeOf(const json& j) { return j.type_name(); }

}  // namespace

json RationalToJson(const Rational& value) {
  if (IsInteger(value)) {
    const BigInt n = boost::multiprecision::numerator(value);
    if (n >= std::numeric_limits<std::int64_t>::min() &&
        n <= std::numeric_limits<std::int64_t>::max()) {
      return n.convert_to<std::int64_t>();
    }
    return n.str();
  }
  const double d = ToDouble(value);
  std::optional<Rational> back = RationalFromDouble(d);
  if (back.has_value() && *back == value) return d;
  return FormatRational(value);
}

json ScalarToJson(const Scalar& value) {
  if (value.IsNumeric()) return RationalToJson(value.constant());
  if (value.constant() == 0 && value.params().size() == 1 &&
      value.params().begin()->second == 1) {
    return value.params().begin()->first.ToString();
  }
  json params = json::object();
  for (const auto& [ref, factor] : value.params()) {
    params[ref.ToString()] = RationalToJson(factor);
  }
  return json{{"constant", RationalToJson(value.constant())},
              {"params", std::move(params)}};
}

absl::StatusOr<Rational> RationalFromJson(const json& value) {
  if (value.is_number_integer()) {
    if (value.is_number_unsigned()) {
      return Rational(BigInt(value.get<std::uint64_t>()));
    }
    return Rational(BigInt(value.get<std::int64_t>()));
  }
  if (value.is_number_float()) {
    std::optional<Rational> r = RationalFromDouble(value.get<double>());
    if (!r.has_value()) return SchemaError("non-finite number");
    return *r;
  }
  if (value.is_string()) {
    std::optional<Rational> r =
        ParseRational(Trim(value.get<std::string>()));
    if (!r.has_value()) {
      return SchemaError(absl::StrCat("'", value.get<std::string>(),
                                      "' is not a number"));
    }
    return *r;
  }
  return SchemaError(absl::StrCat("expected a number, got ", TypeOf(value)));
}

namespace {

// "C", "-C", "2*C", "2 * cost[1]", "1/3*t[2,a]".
absl::StatusOr<Scalar> ScalarFromString(const std::string& raw) {
  std::string text = Trim(raw);
  if (std::optional<Rational> r = ParseRational(text)) return Scalar(*r);
  Rational factor = 1;
  if (!text.empty() && text[0] == '-') {
    factor = -1;
    text = Trim(text.substr(1));
  }
  const std::size_t star = text.find('*');
  if (star != std::string::npos) {
    std::optional<Rational> f = ParseRational(Trim(std::string_view(text).substr(0, star)));
    if (!f.has_value()) {
      return SchemaError(absl::StrCat("cannot read coefficient '", raw, "'"));
    }
    factor *= *f;
    text = Trim(text.substr(star + 1));
  }
  std::string compact;
  for (char c : text) {
    if (c != ' ') compact += c;
  }
  std::optional<ParamRef> ref = ParseParamRef(compact);
  if (!ref.has_value()) {
    return SchemaError(absl::StrCat("cannot read coefficient '", raw, "'"));
  }
  return Scalar::Param(*ref, factor);
}

absl::StatusOr<std::optional<Rational>> BoundFromJson(const json& value,
                                                      bool upper) {
  if (value.is_null()) return std::optional<Rational>();
  if (value.is_string()) {
    std::string s = ToLower(value.get<std::string>());
    if (s == "inf" || s == "+inf" || s == "infinity" || s == "+infinity") {
      if (!upper) return SchemaError("lower bound cannot be +infinity");
      return std::optional<Rational>();
    }
    if (s == "-inf" || s == "-infinity") {
      if (upper) return SchemaError("upper bound cannot be -infinity");
      return std::optional<Rational>();
    }
  }
  MW_ASSIGN_OR_RETURN(Rational r, RationalFromJson(value));
  return std::optional<Rational>(r);
}

std::string FirstKey(const json& obj, std::initializer_list<const char*> keys) {
  for (const char* k : keys) {
    if (obj.contains(k)) return k;
  }
  return "";
}

absl::StatusOr<LinearExpr> TermsFromJson(
    const json& terms, const std::vector<std::string>& positional) {
  LinearExpr expr;
  if (terms.is_null()) return expr;
  if (terms.is_object()) {
    for (const auto& [name, coeff] : terms.items()) {
      MW_ASSIGN_OR_RETURN(Scalar s, ScalarFromJson(coeff));
      expr.AddTerm(name, s);
    }
    return expr;
  }
  if (!terms.is_array()) {
    return SchemaError(absl::StrCat("terms must be an object or array, got ",
                                    TypeOf(terms)));
  }
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const json& t = terms[i];
    if (t.is_object()) {
      const std::string vk = FirstKey(t, {"variable", "var", "name"});
      const std::string ck = FirstKey(t, {"coefficient", "coef", "value"});
      if (vk.empty() || !t[vk].is_string()) {
        return SchemaError("term object needs a \"variable\" name");
      }
      Scalar s = 1;
      if (!ck.empty()) {
        MW_ASSIGN_OR_RETURN(s, ScalarFromJson(t[ck]));
      }
      expr.AddTerm(t[vk].get<std::string>(), s);
      continue;
    }
    if (i >= positional.size()) {
      return SchemaError("positional terms list is longer than the variable "
                         "list");
    }
    MW_ASSIGN_OR_RETURN(Scalar s, ScalarFromJson(t));
    expr.AddTerm(positional[i], s);
  }
  return expr;
}

absl::StatusOr<std::vector<Rational>> RationalList(const json& j) {
  if (!j.is_array()) return SchemaError("expected an array of numbers");
  std::vector<Rational> out;
  for (const json& v : j) {
    MW_ASSIGN_OR_RETURN(Rational r, RationalFromJson(v));
    out.push_back(std::move(r));
  }
  return out;
}

absl::StatusOr<BindingSource> SourceFromJson(const json& src) {
  if (!src.is_object()) return SchemaError("binding source must be an object");
  const std::string kind = src.value("kind", "");
  if (kind == "unresolved") return BindingSource(UnresolvedSource{});
  if (kind == "scalar") {
    if (!src.contains("value")) return SchemaError("scalar binding needs value");
    MW_ASSIGN_OR_RETURN(Rational r, RationalFromJson(src["value"]));
    return BindingSource(InlineScalar{r});
  }
  if (kind == "vector") {
    MW_ASSIGN_OR_RETURN(std::vector<Rational> values,
                        RationalList(src.value("values", json())));
    return BindingSource(InlineVector{std::move(values)});
  }
  if (kind == "table") {
    const json& cols = src.value("columns", json());
    if (!cols.is_object()) return SchemaError("table binding needs columns");
    InlineTable table;
    for (const auto& [name, values] : cols.items()) {
      MW_ASSIGN_OR_RETURN(table.columns[name], RationalList(values));
    }
    return BindingSource(std::move(table));
  }
  if (kind == "file") {
    FileReference ref;
    if (!src.contains("path") || !src["path"].is_string()) {
      return SchemaError("file binding needs a path");
    }
    ref.path = src["path"].get<std::string>();
    if (src.contains("column") && !src["column"].is_null()) {
      if (!src["column"].is_string()) {
        return SchemaError("file binding column must be a string");
      }
      ref.column = src["column"].get<std::string>();
    }
    if (src.contains("row") && !src["row"].is_null()) {
      if (!src["row"].is_number_integer()) {
        return SchemaError("file binding row must be an integer");
      }
      ref.row = src["row"].get<int>();
    }
    return BindingSource(std::move(ref));
  }
  return SchemaError(absl::StrCat("unknown binding kind '", kind, "'"));
}

json SourceToJson(const BindingSource& source) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, UnresolvedSource>) {
          return {{"kind", "unresolved"}};
        } else if constexpr (std::is_same_v<T, InlineScalar>) {
          return {{"kind", "scalar"}, {"value", RationalToJson(s.value)}};
        } else if constexpr (std::is_same_v<T, InlineVector>) {
          json values = json::array();
          for (const Rational& r : s.values) values.push_back(RationalToJson(r));
          return {{"kind", "vector"}, {"values", std::move(values)}};
        } else if constexpr (std::is_same_v<T, InlineTable>) {
          json cols = json::object();
          for (const auto& [name, values] : s.columns) {
            json arr = json::array();
            for (const Rational& r : values) arr.push_back(RationalToJson(r));
            cols[name] = std::move(arr);
          }
          return {{"kind", "table"}, {"columns", std::move(cols)}};
        } else {
          json out = {{"kind", "file"}, {"path", s.path}};
          if (s.column.has_value()) out["column"] = *s.column;
          if (s.row.has_value()) out["row"] = *s.row;
          return out;
        }
      },
      source);
}

json ExprTermsToJson(const LinearExpr& e) {
  json terms = json::object();
  for (const auto& [name, coeff] : e.terms()) terms[name] = ScalarToJson(coeff);
  return terms;
}

}  // namespace

absl::StatusOr<Scalar> ScalarFromJson(const json& value) {
  if (value.is_number()) {
    MW_ASSIGN_OR_RETURN(Rational r, RationalFromJson(value));
    return Scalar(r);
  }
  if (value.is_string()) return ScalarFromString(value.get<std::string>());
  if (value.is_object()) {
    Scalar out;
    if (value.contains("constant")) {
      MW_ASSIGN_OR_RETURN(Rational k, RationalFromJson(value["constant"]));
      out += Scalar(k);
    }
    if (value.contains("params")) {
      if (!value["params"].is_object()) {
        return SchemaError("\"params\" must be an object");
      }
      for (const auto& [text, factor] : value["params"].items()) {
        std::optional<ParamRef> ref = ParseParamRef(text);
        if (!ref.has_value()) {
          return SchemaError(absl::StrCat("bad parameter reference '", text,
                                          "'"));
        }
        MW_ASSIGN_OR_RETURN(Rational f, RationalFromJson(factor));
        out += Scalar::Param(*ref, f);
      }
    }
    return out;
  }
  return SchemaError(absl::StrCat("expected a coefficient, got ", TypeOf(value)));
}

json ToJson(const ProblemIR& problem) {
  json vars = json::array();
  for (const VariableDecl& v : problem.variables) {
    vars.push_back({{"name", v.name},
                    {"domain", DomainName(v.domain)},
                    {"lower", v.lower ? RationalToJson(*v.lower) : json()},
                    {"upper", v.upper ? RationalToJson(*v.upper) : json()}});
  }
  json objective = {
      {"sense", ObjectiveSenseName(problem.objective.sense)},
      {"terms", ExprTermsToJson(problem.objective.expr)},
      {"constant", ScalarToJson(problem.objective.expr.constant())}};
  json constraints = json::array();
  for (const Constraint& c : problem.constraints) {
    json jc = json::object();
    if (c.name.has_value()) jc["name"] = *c.name;
    jc["terms"] = ExprTermsToJson(c.lhs);
    if (!c.lhs.constant().IsZero()) jc["constant"] = ScalarToJson(c.lhs.constant());
    jc["sense"] = SenseSymbol(c.sense);
    jc["rhs"] = ScalarToJson(c.rhs);
    constraints.push_back(std::move(jc));
  }
  json bindings = json::array();
  for (const DataBinding& b : problem.bindings) {
    bindings.push_back(
        {{"parameter", b.parameter}, {"source", SourceToJson(b.source)}});
  }
  json metadata = json::object();
  for (const auto& [k, v] : problem.metadata) metadata[k] = v;
  return {{"variables", std::move(vars)},
          {"objective", std::move(objective)},
          {"constraints", std::move(constraints)},
          {"bindings", std::move(bindings)},
          {"metadata", std::move(metadata)}};
}

absl::StatusOr<ProblemIR> ProblemFromJson(const json& doc) {
  if (!doc.is_object()) {
    return SchemaError(absl::StrCat("formulation must be a JSON object, got ",
                                    TypeOf(doc)));
  }
  ProblemIR p;
  const json& vars = doc.value("variables", json());
  if (!vars.is_array()) return SchemaError("\"variables\" must be an array");
  std::set<std::string> given;
  for (const json& v : vars) {
    if (v.is_object() && v.contains("name") && v["name"].is_string()) {
      given.insert(v["name"].get<std::string>());
    } else if (v.is_string()) {
      given.insert(v.get<std::string>());
    }
  }
  int auto_index = 0;
  auto next_auto_name = [&]() {
    std::string name;
    do {
      name = absl::StrCat("x", ++auto_index);
    } while (given.count(name) > 0);
    given.insert(name);
    return name;
  };
  std::vector<std::string> positional;
  for (const json& v : vars) {
    VariableDecl decl;
    if (v.is_string()) {
      decl.name = v.get<std::string>();
    } else if (v.is_object()) {
      if (v.contains("name") && v["name"].is_string() &&
          !v["name"].get<std::string>().empty()) {
        decl.name = v["name"].get<std::string>();
      } else {
        decl.name = next_auto_name();
      }
      const std::string dk = FirstKey(v, {"domain", "type"});
      if (!dk.empty()) {
        if (!v[dk].is_string()) return SchemaError("domain must be a string");
        std::optional<VariableDomain> d =
            ParseDomain(ToLower(v[dk].get<std::string>()));
        if (!d.has_value()) {
          return SchemaError(absl::StrCat("unknown domain '",
                                          v[dk].get<std::string>(), "'"));
        }
        decl.domain = *d;
      }
      if (decl.domain == VariableDomain::kBinary) decl.upper = Rational(1);
      if (v.contains("lower")) {
        MW_ASSIGN_OR_RETURN(decl.lower, BoundFromJson(v["lower"], false));
      }
      if (v.contains("upper")) {
        MW_ASSIGN_OR_RETURN(decl.upper, BoundFromJson(v["upper"], true));
      }
    } else {
      return SchemaError("each variable must be an object or a name");
    }
    positional.push_back(decl.name);
    p.variables.push_back(std::move(decl));
  }

  const json& obj = doc.value("objective", json());
  if (!obj.is_object()) return SchemaError("\"objective\" must be an object");
  std::string sense = ToLower(obj.value("sense", ""));
  if (sense == "maximize" || sense == "max" || sense == "maximise") {
    p.objective.sense = ObjectiveSense::kMaximize;
  } else if (sense == "minimize" || sense == "min" || sense == "minimise") {
    p.objective.sense = ObjectiveSense::kMinimize;
  } else {
    return SchemaError(absl::StrCat("objective sense must be \"maximize\" or "
                                    "\"minimize\", got '", sense, "'"));
  }
  MW_ASSIGN_OR_RETURN(p.objective.expr,
                      TermsFromJson(obj.value("terms", json()), positional));
  if (obj.contains("constant")) {
    MW_ASSIGN_OR_RETURN(Scalar k, ScalarFromJson(obj["constant"]));
    p.objective.expr.AddConstant(k);
  }

  const json& cons = doc.value("constraints", json::array());
  if (!cons.is_array()) return SchemaError("\"constraints\" must be an array");
  for (const json& jc : cons) {
    if (!jc.is_object()) return SchemaError("each constraint must be an object");
    Constraint c;
    if (jc.contains("name") && jc["name"].is_string() &&
        !jc["name"].get<std::string>().empty()) {
      c.name = jc["name"].get<std::string>();
    }
    MW_ASSIGN_OR_RETURN(c.lhs,
                        TermsFromJson(jc.value("terms", json()), positional));
    if (jc.contains("constant")) {
      MW_ASSIGN_OR_RETURN(Scalar k, ScalarFromJson(jc["constant"]));
      c.lhs.AddConstant(k);
    }
    std::optional<Sense> s = ParseSense(jc.value("sense", ""));
    if (!s.has_value()) {
      return SchemaError(absl::StrCat("constraint sense must be one of <=, >=, "
                                      "=, <, >; got '",
                                      jc.value("sense", ""), "'"));
    }
    c.sense = *s;
    if (!jc.contains("rhs")) return SchemaError("constraint is missing \"rhs\"");
    MW_ASSIGN_OR_RETURN(c.rhs, ScalarFromJson(jc["rhs"]));
    p.constraints.push_back(std::move(c));
  }

  const json& binds = doc.value("bindings", json::array());
  if (!binds.is_array()) return SchemaError("\"bindings\" must be an array");
  for (const json& jb : binds) {
    if (!jb.is_object() || !jb.contains("parameter") ||
        !jb["parameter"].is_string()) {
      return SchemaError("each binding needs a \"parameter\" name");
    }
    DataBinding b;
    b.parameter = jb["parameter"].get<std::string>();
    MW_ASSIGN_OR_RETURN(b.source, SourceFromJson(jb.value("source", json())));
    p.bindings.push_back(std::move(b));
  }

  if (doc.contains("metadata") && doc["metadata"].is_object()) {
    for (const auto& [k, v] : doc["metadata"].items()) {
      p.metadata[k] = v.is_string() ? v.get<std::string>() : v.dump();
    }
  }
  return p;
}

absl::StatusOr<ProblemIR> ParseProblemJson(const std::string& text) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) return SchemaError("formulation is not valid JSON");
  return ProblemFromJson(doc);
}

}  // namespace modelwright
