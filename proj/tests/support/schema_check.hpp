#pragma once

#include <map>
#include <string>
#include <vector>

#include "veinfer/io.hpp"

// Small draft-07 subset validator, just wide enough for the schemas this
// project ships: type, required, properties, additionalProperties (boolean
// or schema), enum, numeric bounds, items, allOf, and $ref (local
// "#/definitions/..." plus cross-file references by file name).
namespace test_oracle {

class SchemaChecker {
 public:
  using json = veinfer::json;

  void add_document(const std::string& name, json doc) { docs_[name] = std::move(doc); }

  std::vector<std::string> validate(const std::string& root_doc, const json& instance) {
    errors_.clear();
    check(docs_.at(root_doc), instance, root_doc, "$");
    return errors_;
  }

 private:
  std::map<std::string, json> docs_;
  std::vector<std::string> errors_;

  void fail(const std::string& path, const std::string& what) {
    errors_.push_back(path + ": " + what);
  }

  static bool type_matches(const std::string& t, const json& v) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "number") return v.is_number();
    if (t == "integer") return v.is_number_integer() || v.is_number_unsigned();
    if (t == "boolean") return v.is_boolean();
    if (t == "null") return v.is_null();
    return false;
  }

  const json* resolve_ref(const std::string& ref, std::string& doc_name) {
    std::string file = doc_name;
    std::string pointer;
    auto hash = ref.find('#');
    if (hash == std::string::npos) {
      file = ref;
    } else {
      if (hash > 0) file = ref.substr(0, hash);
      pointer = ref.substr(hash + 1);
    }
    auto it = docs_.find(file);
    if (it == docs_.end()) return nullptr;
    doc_name = file;
    const json* node = &it->second;
    std::size_t pos = 1;  // skip leading '/'
    while (pos <= pointer.size() && pos != 0) {
      auto next = pointer.find('/', pos);
      std::string key = pointer.substr(pos, next == std::string::npos ? next : next - pos);
      if (key.empty()) break;
      if (!node->is_object() || !node->contains(key)) return nullptr;
      node = &(*node)[key];
      pos = next == std::string::npos ? 0 : next + 1;
    }
    return node;
  }

  void check(const json& schema, const json& v, std::string doc_name, const std::string& path) {
    if (schema.is_boolean()) {
      if (!schema.get<bool>()) fail(path, "schema forbids any value");
      return;
    }
    if (schema.contains("$ref")) {
      std::string target_doc = doc_name;
      const json* target = resolve_ref(schema["$ref"].get<std::string>(), target_doc);
      if (!target) {
        fail(path, "unresolvable $ref " + schema["$ref"].get<std::string>());
        return;
      }
      check(*target, v, target_doc, path);
      return;
    }
    if (schema.contains("allOf")) {
      for (const auto& sub : schema["allOf"]) check(sub, v, doc_name, path);
    }
    if (schema.contains("type")) {
      if (!type_matches(schema["type"].get<std::string>(), v)) {
        fail(path, "expected type " + schema["type"].get<std::string>());
        return;
      }
    }
    if (schema.contains("enum")) {
      bool ok = false;
      for (const auto& cand : schema["enum"]) ok = ok || cand == v;
      if (!ok) fail(path, "value not in enum");
    }
    if (v.is_number()) {
      double x = v.get<double>();
      if (schema.contains("minimum") && x < schema["minimum"].get<double>())
        fail(path, "below minimum");
      if (schema.contains("maximum") && x > schema["maximum"].get<double>())
        fail(path, "above maximum");
      if (schema.contains("exclusiveMinimum") && x <= schema["exclusiveMinimum"].get<double>())
        fail(path, "not above exclusiveMinimum");
      if (schema.contains("exclusiveMaximum") && x >= schema["exclusiveMaximum"].get<double>())
        fail(path, "not below exclusiveMaximum");
    }
    if (v.is_object()) {
      if (schema.contains("required")) {
        for (const auto& key : schema["required"]) {
          if (!v.contains(key.get<std::string>()))
            fail(path, "missing required field '" + key.get<std::string>() + "'");
        }
      }
      const json* props = schema.contains("properties") ? &schema["properties"] : nullptr;
      for (const auto& [key, value] : v.items()) {
        if (props && props->contains(key)) {
          check((*props)[key], value, doc_name, path + "." + key);
        } else if (schema.contains("additionalProperties")) {
          const json& ap = schema["additionalProperties"];
          if (ap.is_boolean() && !ap.get<bool>()) {
            fail(path, "unexpected field '" + key + "'");
          } else if (!ap.is_boolean()) {
            check(ap, value, doc_name, path + "." + key);
          }
        }
      }
    }
    if (v.is_array() && schema.contains("items")) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        check(schema["items"], v[i], doc_name, path + "[" + std::to_string(i) + "]");
      }
    }
  }
};

}  // namespace test_oracle
