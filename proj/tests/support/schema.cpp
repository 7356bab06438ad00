#include "schema.hpp"

#include <cmath>
#include <fstream>
#include <regex>
#include <set>

namespace equibench::test {

using nlohmann::json;

namespace {

bool has_type(const json& doc, const std::string& type) {
  if (type == "object") return doc.is_object();
  if (type == "array") return doc.is_array();
  if (type == "string") return doc.is_string();
  if (type == "boolean") return doc.is_boolean();
  if (type == "null") return doc.is_null();
  if (type == "number") return doc.is_number();
  if (type == "integer") {
    if (doc.is_number_integer()) return true;
    return doc.is_number_float() && std::floor(doc.get<double>()) == doc.get<double>();
  }
  return false;
}

bool json_equal(const json& a, const json& b) {
  if (a.is_number() && b.is_number()) return a.get<double>() == b.get<double>();
  return a == b;
}

void check(const json& schema, const json& doc, const std::string& at,
           std::vector<std::string>& errors) {
  static const std::set<std::string> known = {
      "$schema", "$id", "title", "description", "type", "enum", "properties", "required",
      "additionalProperties", "propertyNames", "items", "minItems", "maxItems", "minimum",
      "maximum", "exclusiveMinimum", "minLength", "pattern"};
  if (schema.is_boolean()) {
    if (!schema.get<bool>()) errors.push_back(at + ": not allowed");
    return;
  }
  for (const auto& [key, _] : schema.items()) {
    if (!known.count(key)) errors.push_back(at + ": unsupported schema keyword '" + key + "'");
  }
  auto fail = [&](const std::string& msg) { errors.push_back(at + ": " + msg); };

  if (schema.contains("type")) {
    const auto& t = schema["type"];
    bool ok = false;
    if (t.is_string()) {
      ok = has_type(doc, t.get<std::string>());
    } else {
      for (const auto& alt : t) ok = ok || has_type(doc, alt.get<std::string>());
    }
    if (!ok) {
      fail("expected type " + t.dump() + ", got " + doc.type_name());
      return;
    }
  }
  if (schema.contains("enum")) {
    bool ok = false;
    for (const auto& v : schema["enum"]) ok = ok || json_equal(v, doc);
    if (!ok) fail(doc.dump() + " not in " + schema["enum"].dump());
  }
  if (doc.is_number()) {
    const double v = doc.get<double>();
    if (schema.contains("minimum") && v < schema["minimum"].get<double>()) fail("below minimum");
    if (schema.contains("maximum") && v > schema["maximum"].get<double>()) fail("above maximum");
    if (schema.contains("exclusiveMinimum") && v <= schema["exclusiveMinimum"].get<double>()) {
      fail("not above exclusiveMinimum");
    }
  }
  if (doc.is_string()) {
    const auto& s = doc.get_ref<const std::string&>();
    if (schema.contains("minLength") && s.size() < schema["minLength"].get<std::size_t>()) {
      fail("shorter than minLength");
    }
    if (schema.contains("pattern") &&
        !std::regex_search(s, std::regex(schema["pattern"].get<std::string>()))) {
      fail("'" + s + "' does not match " + schema["pattern"].get<std::string>());
    }
  }
  if (doc.is_array()) {
    if (schema.contains("minItems") && doc.size() < schema["minItems"].get<std::size_t>()) {
      fail("fewer than minItems");
    }
    if (schema.contains("maxItems") && doc.size() > schema["maxItems"].get<std::size_t>()) {
      fail("more than maxItems");
    }
    if (schema.contains("items")) {
      for (std::size_t i = 0; i < doc.size(); ++i) {
        check(schema["items"], doc[i], at + "[" + std::to_string(i) + "]", errors);
      }
    }
  }
  if (doc.is_object()) {
    if (schema.contains("required")) {
      for (const auto& key : schema["required"]) {
        if (!doc.contains(key.get<std::string>())) fail("missing '" + key.get<std::string>() + "'");
      }
    }
    const json props = schema.value("properties", json::object());
    for (const auto& [key, value] : doc.items()) {
      const std::string child = at + "." + key;
      if (schema.contains("propertyNames")) check(schema["propertyNames"], key, child, errors);
      if (props.contains(key)) {
        check(props[key], value, child, errors);
      } else if (schema.contains("additionalProperties")) {
        check(schema["additionalProperties"], value, child, errors);
      }
    }
  }
}

}  // namespace

SchemaValidator SchemaValidator::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open schema " + path.string());
  return SchemaValidator(json::parse(in));
}

std::vector<std::string> SchemaValidator::validate(const json& doc) const {
  std::vector<std::string> errors;
  check(schema_, doc, "$", errors);
  return errors;
}

}  // namespace equibench::test
