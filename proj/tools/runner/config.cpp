#include "config.hpp"

#include "wmlab/errors.hpp"

namespace wmlab::runner {

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

[[noreturn]] void type_error(const std::string& path, std::string_view type) {
  throw ConfigError("config: key '" + path + "' must be " + std::string(type));
}

}  // namespace

Node::Node(const json* value, std::string path, std::vector<SchemaEntry>* schema)
    : value_(value),
      path_(std::move(path)),
      schema_(schema),
      used_(std::make_shared<std::set<std::string>>()),
      children_(std::make_shared<std::vector<Node>>()) {
  if (value_ && !value_->is_object()) type_error(path_.empty() ? "<root>" : path_, "an object");
}

std::string Node::key_path(const std::string& key) const { return join(path_, key); }

bool Node::has(const std::string& key) const { return value_ && value_->contains(key); }

const json* Node::lookup(const std::string& key, std::string_view type, const json& fallback, std::string_view doc) {
  used_->insert(key);
  if (schema_) schema_->push_back({key_path(key), std::string(type), fallback.dump(), std::string(doc)});
  if (!value_) return nullptr;
  const auto it = value_->find(key);
  return it == value_->end() ? nullptr : &*it;
}

double Node::number(const std::string& key, double fallback, std::string_view doc) {
  const json* v = lookup(key, "number", fallback, doc);
  if (!v) return fallback;
  if (!v->is_number()) type_error(key_path(key), "a number");
  return v->get<double>();
}

int Node::integer(const std::string& key, int fallback, std::string_view doc) {
  const json* v = lookup(key, "integer", fallback, doc);
  if (!v) return fallback;
  if (!v->is_number_integer()) type_error(key_path(key), "an integer");
  return v->get<int>();
}

bool Node::boolean(const std::string& key, bool fallback, std::string_view doc) {
  const json* v = lookup(key, "boolean", fallback, doc);
  if (!v) return fallback;
  if (!v->is_boolean()) type_error(key_path(key), "a boolean");
  return v->get<bool>();
}

std::string Node::text(const std::string& key, const std::string& fallback, std::string_view doc) {
  const json* v = lookup(key, "string", fallback, doc);
  if (!v) return fallback;
  if (!v->is_string()) type_error(key_path(key), "a string");
  return v->get<std::string>();
}

std::vector<double> Node::numbers(const std::string& key, const std::vector<double>& fallback, std::string_view doc) {
  const json* v = lookup(key, "number[]", fallback, doc);
  if (!v) return fallback;
  if (!v->is_array()) type_error(key_path(key), "an array of numbers");
  std::vector<double> out;
  for (const auto& e : *v) {
    if (!e.is_number()) type_error(key_path(key), "an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<int> Node::integers(const std::string& key, const std::vector<int>& fallback, std::string_view doc) {
  const json* v = lookup(key, "integer[]", fallback, doc);
  if (!v) return fallback;
  if (!v->is_array()) type_error(key_path(key), "an array of integers");
  std::vector<int> out;
  for (const auto& e : *v) {
    if (!e.is_number_integer()) type_error(key_path(key), "an array of integers");
    out.push_back(e.get<int>());
  }
  return out;
}

std::vector<std::string> Node::strings(const std::string& key, const std::vector<std::string>& fallback,
                                       std::string_view doc) {
  const json* v = lookup(key, "string[]", fallback, doc);
  if (!v) return fallback;
  if (!v->is_array()) type_error(key_path(key), "an array of strings");
  std::vector<std::string> out;
  for (const auto& e : *v) {
    if (!e.is_string()) type_error(key_path(key), "an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::vector<json> Node::objects(const std::string& key, std::string_view doc) {
  const json* v = lookup(key, "object[]", json::array(), doc);
  if (!v) return {};
  if (!v->is_array()) type_error(key_path(key), "an array of objects");
  std::vector<json> out;
  for (const auto& e : *v) {
    if (!e.is_object()) type_error(key_path(key), "an array of objects");
    out.push_back(e);
  }
  return out;
}

Node Node::child(const std::string& key, std::string_view doc) {
  used_->insert(key);
  if (schema_) schema_->push_back({key_path(key), "object", "{}", std::string(doc)});
  const json* v = nullptr;
  if (value_) {
    const auto it = value_->find(key);
    if (it != value_->end()) {
      if (!it->is_object()) type_error(key_path(key), "an object");
      v = &*it;
    }
  }
  // Absent objects read defaults but are not schema-recorded twice.
  static const json empty = json::object();
  Node n(v ? v : (value_ ? &empty : nullptr), key_path(key), schema_);
  children_->push_back(n);
  return n;
}

std::vector<Node> Node::list(const std::string& key, std::string_view doc) {
  used_->insert(key);
  if (schema_) schema_->push_back({key_path(key), "object[]", "[]", std::string(doc)});
  std::vector<Node> out;
  if (!value_) {
    out.emplace_back(nullptr, key_path(key) + "[]", schema_);
    return out;
  }
  const auto it = value_->find(key);
  if (it == value_->end()) return out;
  if (!it->is_array()) type_error(key_path(key), "an array of objects");
  for (std::size_t i = 0; i < it->size(); ++i) {
    Node n(&(*it)[i], key_path(key) + "[" + std::to_string(i) + "]", nullptr);
    children_->push_back(n);
    out.push_back(n);
  }
  return out;
}

Node Node::element(const std::string& key) { return Node(nullptr, key_path(key) + "[]", schema_); }

void Node::finish() const {
  if (!value_) return;
  for (const auto& [k, v] : value_->items())
    if (!used_->contains(k)) throw ConfigError("config: unknown key '" + key_path(k) + "'");
  for (const auto& c : *children_) c.finish();
}

void require(bool cond, const Node& node, const std::string& key, const std::string& what) {
  if (!cond) throw ConfigError("config: key '" + node.key_path(key) + "' " + what);
}

}  // namespace wmlab::runner
