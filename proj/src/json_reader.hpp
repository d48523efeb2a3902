#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qualimeter/ingest.hpp"

namespace qualimeter::detail {

using nlohmann::json;

// Read-only view of a JSON node that remembers its key path for error
// messages such as "types[2].methods[0].visibility".
class JsonReader {
 public:
  JsonReader(const json& node, std::string path) : node_(node), path_(std::move(path)) {}

  const json& node() const { return node_; }
  const std::string& path() const { return path_; }

  void require_object() const {
    if (!node_.is_object()) throw SchemaError(path_, "expected an object");
  }

  bool has(const char* key) const { return node_.contains(key); }

  JsonReader child(const char* key) const {
    if (!node_.contains(key)) throw SchemaError(path_.empty() ? key : path_ + "." + key, "missing required key");
    return JsonReader(node_.at(key), path_.empty() ? key : path_ + "." + key);
  }

  std::string string(const char* key, std::optional<std::string> fallback = std::nullopt) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      return child(key).as_string();
    }
    return child(key).as_string();
  }

  std::string as_string() const {
    if (!node_.is_string()) throw SchemaError(path_, "expected a string");
    return node_.get<std::string>();
  }

  std::size_t count(const char* key, bool required = false) const {
    if (!has(key)) {
      if (required) child(key);
      return 0;
    }
    return child(key).as_count();
  }

  std::size_t as_count() const {
    if (node_.is_number_unsigned()) return node_.get<std::size_t>();
    if (node_.is_number_integer() && node_.get<long long>() >= 0) return static_cast<std::size_t>(node_.get<long long>());
    throw SchemaError(path_, "expected a non-negative integer");
  }

  bool boolean(const char* key) const {
    if (!has(key)) return false;
    const auto c = child(key);
    if (!c.node_.is_boolean()) throw SchemaError(c.path_, "expected a boolean");
    return c.node_.get<bool>();
  }

  std::vector<JsonReader> array(const char* key, bool required = false) const {
    std::vector<JsonReader> out;
    if (!has(key)) {
      if (required) child(key);
      return out;
    }
    const auto c = child(key);
    if (!c.node_.is_array()) throw SchemaError(c.path_, "expected an array");
    for (std::size_t i = 0; i < c.node_.size(); ++i) {
      out.emplace_back(c.node_.at(i), c.path_ + "[" + std::to_string(i) + "]");
    }
    return out;
  }

  double as_number() const {
    if (node_.is_number()) return node_.get<double>();
    if (node_.is_string()) {
      const auto text = node_.get<std::string>();
      if (text == "+inf" || text == "inf") return std::numeric_limits<double>::infinity();
      if (text == "-inf") return -std::numeric_limits<double>::infinity();
    }
    throw SchemaError(path_, "expected a number");
  }

  double number(const char* key) const { return child(key).as_number(); }

  std::vector<std::string> strings(const char* key) const {
    std::vector<std::string> out;
    for (const auto& r : array(key)) out.push_back(r.as_string());
    return out;
  }

 private:
  const json& node_;
  std::string path_;
};

inline json parse_json_document(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("(document)", std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace qualimeter::detail
