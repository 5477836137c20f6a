#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace wikibox::report {

// Flat "key = value" configuration document. '#' starts a comment, blank
// lines are ignored, later assignments win. Command-line flags override
// file values by calling set() after load.
class FlatConfig {
 public:
  FlatConfig() = default;

  static FlatConfig parse(std::string_view text);
  static FlatConfig load(const std::filesystem::path& path);

  void set(const std::string& key, std::string value);
  bool has(const std::string& key) const;

  std::optional<std::string> get(const std::string& key) const;
  std::string get_or(const std::string& key, std::string fallback) const;
  int get_int(const std::string& key, int fallback) const;     // throws ConfigError on junk
  bool get_bool(const std::string& key, bool fallback) const;  // true/false/1/0/yes/no

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace wikibox::report
