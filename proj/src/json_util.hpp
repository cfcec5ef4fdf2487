#pragma once

#include <string>

#include <json.hpp>

#include "heatseek/error.hpp"
#include "heatseek/geometry.hpp"

namespace heatseek::detail {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

[[noreturn]] inline void schema_violation(const std::string& field, const std::string& what) {
  throw Error("schema violation: " + field + ": " + what);
}

inline Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error("cannot parse " + source + ": " + e.what());
  }
}

inline const Json& require(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) schema_violation(where, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) schema_violation(where + "." + key, "missing");
  return *it;
}

inline double require_number(const Json& v, const std::string& where) {
  if (!v.is_number()) schema_violation(where, "expected a number");
  return v.get<double>();
}

inline std::string require_string(const Json& v, const std::string& where) {
  if (!v.is_string()) schema_violation(where, "expected a string");
  return v.get<std::string>();
}

inline bool require_bool(const Json& v, const std::string& where) {
  if (!v.is_boolean()) schema_violation(where, "expected a boolean");
  return v.get<bool>();
}

inline const Json& require_array(const Json& v, const std::string& where) {
  if (!v.is_array()) schema_violation(where, "expected an array");
  return v;
}

inline Point2D point_from_json(const Json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2) schema_violation(where, "expected [x, y]");
  return {require_number(v[0], where + "[0]"), require_number(v[1], where + "[1]")};
}

inline Box2D box_from_json(const Json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 4) schema_violation(where, "expected [x, y, w, h]");
  Box2D b{require_number(v[0], where + "[0]"), require_number(v[1], where + "[1]"),
          require_number(v[2], where + "[2]"), require_number(v[3], where + "[3]")};
  if (!is_valid(b)) schema_violation(where, "box must be finite with non-negative extent");
  return b;
}

inline OrderedJson box_to_json(const Box2D& b) { return OrderedJson::array({b.x, b.y, b.w, b.h}); }

}  // namespace heatseek::detail
