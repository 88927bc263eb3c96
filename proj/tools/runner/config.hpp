#pragma once

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace wmlab::runner {

using json = nlohmann::ordered_json;

// One documented key, recorded while a suite declares its configuration.
struct SchemaEntry {
  std::string path;
  std::string type;
  std::string fallback;  // default, as JSON text
  std::string doc;
};

// A view of one config object. Every accessor both reads its key and, when a
// schema sink is attached, records it; with no JSON attached the defaults
// are returned, which is how print-schema walks the suites. Keys that are
// never read are reported by finish().
class Node {
 public:
  Node(const json* value, std::string path, std::vector<SchemaEntry>* schema);

  double number(const std::string& key, double fallback, std::string_view doc);
  int integer(const std::string& key, int fallback, std::string_view doc);
  bool boolean(const std::string& key, bool fallback, std::string_view doc);
  std::string text(const std::string& key, const std::string& fallback, std::string_view doc);
  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback, std::string_view doc);
  std::vector<int> integers(const std::string& key, const std::vector<int>& fallback, std::string_view doc);
  std::vector<std::string> strings(const std::string& key, const std::vector<std::string>& fallback,
                                   std::string_view doc);
  // Raw JSON (for nested scenario configs); recorded as type "object[]".
  std::vector<json> objects(const std::string& key, std::string_view doc);

  // Nested object; absent means all defaults.
  Node child(const std::string& key, std::string_view doc);
  // Array of objects; in schema mode a single element is visited under key[].
  std::vector<Node> list(const std::string& key, std::string_view doc);
  // Schema-only visit of a list element, for lists that are empty here.
  Node element(const std::string& key);

  bool has(const std::string& key) const;
  bool schema_mode() const { return value_ == nullptr; }
  const std::string& path() const { return path_; }
  std::string key_path(const std::string& key) const;

  // ConfigError naming the first unread key, searching children too.
  void finish() const;

 private:
  const json* lookup(const std::string& key, std::string_view type, const json& fallback, std::string_view doc);

  const json* value_;
  std::string path_;
  std::vector<SchemaEntry>* schema_;
  std::shared_ptr<std::set<std::string>> used_;
  std::shared_ptr<std::vector<Node>> children_;
};

// ConfigError unless cond, naming the key.
void require(bool cond, const Node& node, const std::string& key, const std::string& what);

}  // namespace wmlab::runner
