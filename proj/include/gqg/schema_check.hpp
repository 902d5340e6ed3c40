#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace gqg {

/// Validator for the JSON-Schema subset used by the shipped report schemas:
/// type (single or list), required, properties, additionalProperties (bool),
/// items (single schema), enum, const. Collects one message per violation.
inline void schema_check(const nlohmann::json& schema, const nlohmann::json& value,
                         const std::string& path, std::vector<std::string>& errors) {
  auto fail = [&](const std::string& why) { errors.push_back(path + ": " + why); };

  if (schema.contains("type")) {
    const auto matches = [&](const std::string& t) {
      if (t == "object") return value.is_object();
      if (t == "array") return value.is_array();
      if (t == "string") return value.is_string();
      if (t == "number") return value.is_number() || value.is_null();  // NaN serializes as null
      if (t == "integer") return value.is_number_integer();
      if (t == "boolean") return value.is_boolean();
      if (t == "null") return value.is_null();
      return false;
    };
    const auto& ty = schema.at("type");
    bool ok = false;
    if (ty.is_string()) {
      ok = matches(ty.get<std::string>());
    } else if (ty.is_array()) {
      for (const auto& t : ty) ok = ok || matches(t.get<std::string>());
    }
    if (!ok) {
      fail("type mismatch (expected " + ty.dump() + ")");
      return;
    }
  }
  if (schema.contains("enum")) {
    bool ok = false;
    for (const auto& cand : schema.at("enum")) ok = ok || (cand == value);
    if (!ok) fail("value " + value.dump() + " not in enum");
  }
  if (schema.contains("const") && !(schema.at("const") == value)) {
    fail("value " + value.dump() + " != const " + schema.at("const").dump());
  }
  if (value.is_object()) {
    if (schema.contains("required")) {
      for (const auto& key : schema.at("required")) {
        if (!value.contains(key.get<std::string>())) {
          fail("missing required key " + key.get<std::string>());
        }
      }
    }
    const bool extra_ok =
        !schema.contains("additionalProperties") || schema.at("additionalProperties").get<bool>();
    if (schema.contains("properties")) {
      const auto& props = schema.at("properties");
      for (const auto& [key, sub] : value.items()) {
        if (props.contains(key)) {
          schema_check(props.at(key), sub, path + "." + key, errors);
        } else if (!extra_ok) {
          fail("unexpected key " + key);
        }
      }
    }
  }
  if (value.is_array() && schema.contains("items")) {
    int i = 0;
    for (const auto& item : value) {
      schema_check(schema.at("items"), item, path + "[" + std::to_string(i++) + "]", errors);
    }
  }
}

inline std::vector<std::string> schema_check(const nlohmann::json& schema,
                                             const nlohmann::json& value) {
  std::vector<std::string> errors;
  schema_check(schema, value, "$", errors);
  return errors;
}

}  // namespace gqg
