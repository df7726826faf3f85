#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "laprl/controller.hpp"

namespace laprl {

// Flat key-value run configuration. Grammar: one `key = value` per line,
// '#' starts a comment, keys may be dotted. Defaults are materialized on
// load so every field is explicit and the serialized form round-trips.
class RunConfig {
 public:
  static RunConfig load(const std::string& path);
  static RunConfig from_string(const std::string& text);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const { return kv_.count(key) > 0; }

  std::string get_str(const std::string& key) const;
  double get_double(const std::string& key) const;
  long long get_int(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::vector<int> get_int_list(const std::string& key) const;

  std::vector<std::uint64_t> seeds() const;

  // Fills in every known default that the file did not set.
  void materialize_defaults();

  ControllerConfig controller_config() const;

  std::string serialize() const;  // sorted key = value lines
  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace laprl
