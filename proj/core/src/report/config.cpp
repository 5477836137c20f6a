#include "wikibox/report/config.hpp"

#include <charconv>

#include "wikibox/errors.hpp"
#include "wikibox/ioutil.hpp"

namespace wikibox::report {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

FlatConfig FlatConfig::parse(std::string_view text) {
  FlatConfig config;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;

    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        " is not 'key = value': '" + std::string(line) + "'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) + " has an empty key");
    }
    config.entries_[key] = value;
  }
  return config;
}

FlatConfig FlatConfig::load(const std::filesystem::path& path) {
  return parse(read_text_file(path));
}

void FlatConfig::set(const std::string& key, std::string value) {
  entries_[key] = std::move(value);
}

bool FlatConfig::has(const std::string& key) const { return entries_.count(key) != 0; }

std::optional<std::string> FlatConfig::get(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::string FlatConfig::get_or(const std::string& key, std::string fallback) const {
  auto found = get(key);
  return found ? *found : std::move(fallback);
}

int FlatConfig::get_int(const std::string& key, int fallback) const {
  auto found = get(key);
  if (!found) return fallback;
  int value = 0;
  const char* begin = found->data();
  const char* end = begin + found->size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError("config key '" + key + "' is not an integer: '" + *found + "'");
  }
  return value;
}

bool FlatConfig::get_bool(const std::string& key, bool fallback) const {
  auto found = get(key);
  if (!found) return fallback;
  if (*found == "true" || *found == "1" || *found == "yes") return true;
  if (*found == "false" || *found == "0" || *found == "no") return false;
  throw ConfigError("config key '" + key + "' is not a boolean: '" + *found + "'");
}

}  // namespace wikibox::report
