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


#ifndef MODELWRIGHT_TESTS_SUPPORT_JSON_SCHEMA_H_
#define MODELWRIGHT_TESTS_SUPPORT_JSON_SCHEMA_H_

#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace modelwright::testing {

// Checks the draft-07 subset used by docs/api-schema.json: type, enum,
// required, properties, additionalProperties (boolean), items and local
// $ref. Returns one message per violation.
class SchemaChecker {
 public:
  explicit SchemaChecker(nlohmann::json root) : root_(std::move(root)) {}

  static SchemaChecker FromFile(const std::string& path) {
    std::ifstream in(path);
    return SchemaChecker(nlohmann::json::parse(in));
  }

  std::vector<std::string> Check(const nlohmann::json& value,
                                 const std::string& definition) const {
    std::vector<std::string> errors;
    Walk(value, root_["definitions"][definition], "$", errors);
    return errors;
  }

 private:
  static bool HasType(const nlohmann::json& v, const std::string& type) {
    if (type == "null") return v.is_null();
    if (type == "object") return v.is_object();
    if (type == "array") return v.is_array();
    if (type == "string") return v.is_string();
    if (type == "boolean") return v.is_boolean();
    if (type == "integer") return v.is_number_integer();
    if (type == "number") return v.is_number();
    return false;
  }

  void Walk(const nlohmann::json& v, const nlohmann::json& schema,
            const std::string& path, std::vector<std::string>& errors) const {
    if (schema.contains("$ref")) {
      const std::string ref = schema["$ref"];
      const std::string name = ref.substr(ref.rfind('/') + 1);
      Walk(v, root_["definitions"][name], path, errors);
      return;
    }
    if (schema.contains("type")) {
      const nlohmann::json& type = schema["type"];
      bool ok = false;
      if (type.is_string()) ok = HasType(v, type);
      for (const auto& t : type.is_array() ? type : nlohmann::json::array()) {
        ok |= HasType(v, t);
      }
      if (!ok) {
        errors.push_back(path + ": expected type " + type.dump() + ", got " +
                         v.dump());
        return;
      }
    }
    if (schema.contains("enum")) {
      bool found = false;
      for (const auto& option : schema["enum"]) found |= option == v;
      if (!found) errors.push_back(path + ": " + v.dump() + " not in enum");
    }
    if (v.is_object()) {
      for (const auto& key : schema.value("required", nlohmann::json::array())) {
        if (!v.contains(key.get<std::string>())) {
          errors.push_back(path + ": missing " + key.get<std::string>());
        }
      }
      const nlohmann::json props =
          schema.value("properties", nlohmann::json::object());
      for (const auto& [key, child] : v.items()) {
        if (props.contains(key)) {
          Walk(child, props[key], path + "." + key, errors);
        } else if (schema.value("additionalProperties", true) == false) {
          errors.push_back(path + ": unexpected property " + key);
        }
      }
    }
    if (v.is_array() && schema.contains("items")) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        Walk(v[i], schema["items"], path + "[" + std::to_string(i) + "]",
             errors);
      }
    }
  }

  nlohmann::json root_;
};

}  // namespace modelwright::testing

#endif  // MODELWRIGHT_TESTS_SUPPORT_JSON_SCHEMA_H_
