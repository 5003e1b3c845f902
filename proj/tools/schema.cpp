#include "schema.hpp"

#include <cmath>
#include <regex>
#include <stdexcept>

namespace smod::cli {
namespace {

using nlohmann::json;

bool has_type(const json &v, const std::string &type) {
  if (type == "object")
    return v.is_object();
  if (type == "array")
    return v.is_array();
  if (type == "string")
    return v.is_string();
  if (type == "boolean")
    return v.is_boolean();
  if (type == "null")
    return v.is_null();
  if (type == "integer")
    return v.is_number_integer() || (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>());
  if (type == "number")
    return v.is_number();
  throw std::logic_error("schema uses unknown type " + type);
}

class Validator {
public:
  explicit Validator(const json &root) : root_(root) {}

  void check(const json &v, const json &s, const std::string &path, std::vector<std::string> &out) const {
    if (s.contains("$ref")) {
      check(v, resolve(s.at("$ref").get<std::string>()), path, out);
      return;
    }
    if (s.contains("type")) {
      const json &t = s.at("type");
      bool ok = false;
      if (t.is_string())
        ok = has_type(v, t.get<std::string>());
      else
        for (const auto &name : t)
          ok = ok || has_type(v, name.get<std::string>());
      if (!ok) {
        out.push_back(at(path) + "expected type " + t.dump());
        return;
      }
    }
    if (s.contains("const") && v != s.at("const"))
      out.push_back(at(path) + "must equal " + s.at("const").dump());
    if (s.contains("enum")) {
      bool found = false;
      for (const auto &e : s.at("enum"))
        found = found || e == v;
      if (!found)
        out.push_back(at(path) + "must be one of " + s.at("enum").dump());
    }
    if (v.is_number()) {
      const double x = v.get<double>();
      if (s.contains("minimum") && x < s.at("minimum").get<double>())
        out.push_back(at(path) + "below minimum " + s.at("minimum").dump());
      if (s.contains("exclusiveMinimum") && !(x > s.at("exclusiveMinimum").get<double>()))
        out.push_back(at(path) + "must exceed " + s.at("exclusiveMinimum").dump());
    }
    if (v.is_string() && s.contains("pattern")) {
      const std::regex re(s.at("pattern").get<std::string>());
      if (!std::regex_search(v.get<std::string>(), re))
        out.push_back(at(path) + "does not match " + s.at("pattern").get<std::string>());
    }
    if (v.is_array()) {
      if (s.contains("minItems") && v.size() < s.at("minItems").get<std::size_t>())
        out.push_back(at(path) + "needs at least " + s.at("minItems").dump() + " items");
      if (s.contains("items"))
        for (std::size_t i = 0; i < v.size(); ++i)
          check(v[i], s.at("items"), path + "/" + std::to_string(i), out);
    }
    if (v.is_object()) {
      if (s.contains("required"))
        for (const auto &key : s.at("required"))
          if (!v.contains(key.get<std::string>()))
            out.push_back(at(path) + "missing required key \"" + key.get<std::string>() + "\"");
      const json *props = s.contains("properties") ? &s.at("properties") : nullptr;
      for (const auto &[key, item] : v.items()) {
        if (props && props->contains(key))
          check(item, props->at(key), path + "/" + key, out);
        else if (s.contains("additionalProperties") && s.at("additionalProperties").is_boolean() &&
                 !s.at("additionalProperties").get<bool>())
          out.push_back(at(path) + "unknown key \"" + key + "\"");
      }
    }
    if (s.contains("oneOf")) {
      int matches = 0;
      std::vector<std::string> first_failure;
      for (const auto &branch : s.at("oneOf")) {
        std::vector<std::string> errs;
        check(v, branch, path, errs);
        if (errs.empty())
          ++matches;
        else if (first_failure.empty() || errs.size() < first_failure.size())
          first_failure = std::move(errs);
      }
      if (matches == 0) {
        out.push_back(at(path) + "matches none of the allowed forms");
        out.insert(out.end(), first_failure.begin(), first_failure.end());
      } else if (matches > 1) {
        out.push_back(at(path) + "matches more than one allowed form");
      }
    }
  }

private:
  static std::string at(const std::string &path) { return (path.empty() ? "/" : path) + ": "; }

  const json &resolve(const std::string &ref) const {
    if (ref.rfind("#/", 0) != 0)
      throw std::logic_error("only local $ref is supported: " + ref);
    return root_.at(json::json_pointer(ref.substr(1)));
  }

  const json &root_;
};

} // namespace

std::vector<std::string> validate(const nlohmann::json &instance, const nlohmann::json &schema) {
  std::vector<std::string> out;
  Validator(schema).check(instance, schema, "", out);
  return out;
}

} // namespace smod::cli
