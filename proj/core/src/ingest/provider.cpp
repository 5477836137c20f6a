#include "wikibox/ingest/provider.hpp"

#include <fstream>
#include <sstream>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "wikibox/errors.hpp"

namespace wikibox::ingest {

namespace {

std::uint64_t checked_count(const nlohmann::json& value, const std::string& context) {
  if (value.is_number_unsigned()) return value.get<std::uint64_t>();
  if (value.is_number_integer() && value.get<std::int64_t>() < 0) {
    throw DataError("negative view count " + value.dump() + " for " + context);
  }
  if (value.is_number_integer()) return value.get<std::uint64_t>();
  throw DataError("non-integer view count " + value.dump() + " for " + context);
}

DailyCounts parse_daily_object(const nlohmann::json& obj, const std::string& context) {
  DailyCounts counts;
  for (const auto& [date_str, value] : obj.items()) {
    counts[Date::parse(date_str)] = checked_count(value, context + " on " + date_str);
  }
  return counts;
}

std::string encode_title_component(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.' ||
                      c == '~' || c == '(' || c == ')';
    if (keep) {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    }
  }
  return out;
}

}  // namespace

FixturePageviewProvider FixturePageviewProvider::from_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open pageview fixture " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_json(buffer.str());
}

FixturePageviewProvider FixturePageviewProvider::from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("malformed pageview fixture JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ConfigError("pageview fixture must map article URLs to daily count objects");
  }
  FixturePageviewProvider provider;
  for (const auto& [url, daily] : doc.items()) {
    if (!daily.is_object()) {
      throw ConfigError("pageview fixture entry for " + url +
                        " must map dates to counts");
    }
    provider.by_article_[url] = parse_daily_object(daily, url);
  }
  return provider;
}

DailyCounts FixturePageviewProvider::daily_views(const std::string& article_url,
                                                 const Date& first, const Date& last) {
  DailyCounts out;
  auto it = by_article_.find(article_url);
  if (it == by_article_.end()) return out;
  for (auto day = it->second.lower_bound(first);
       day != it->second.end() && !(last < day->first); ++day) {
    out.insert(*day);
  }
  return out;
}

HttpPageviewProvider::HttpPageviewProvider(Config config) : config_(std::move(config)) {
  for (const char* placeholder : {"{article}", "{start}", "{end}"}) {
    if (config_.endpoint_template.find(placeholder) == std::string::npos) {
      throw ConfigError(std::string("pageview endpoint template lacks ") + placeholder);
    }
  }
}

DailyCounts HttpPageviewProvider::daily_views(const std::string& article_url,
                                              const Date& first, const Date& last) {
  const auto wiki_pos = article_url.find("/wiki/");
  const std::string title =
      wiki_pos == std::string::npos ? article_url : article_url.substr(wiki_pos + 6);

  std::string url = config_.endpoint_template;
  auto substitute = [&url](std::string_view placeholder, const std::string& value) {
    const auto pos = url.find(placeholder);
    url.replace(pos, placeholder.size(), value);
  };
  substitute("{article}", encode_title_component(title));
  substitute("{start}", first.to_string());
  substitute("{end}", last.to_string());

  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos || url.substr(0, scheme_end) != "http") {
    throw ConfigError("pageview endpoint must be an http:// URL");
  }
  const auto host_end = url.find('/', scheme_end + 3);
  const std::string origin = url.substr(0, host_end);
  const std::string path = host_end == std::string::npos ? "/" : url.substr(host_end);

  httplib::Client client(origin);
  client.set_connection_timeout(config_.timeout_seconds);
  client.set_read_timeout(config_.timeout_seconds);
  auto res = client.Get(path);
  if (!res) {
    throw ProviderError("pageview request for " + article_url + " failed: " +
                        httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw ProviderError("pageview endpoint returned HTTP " + std::to_string(res->status) +
                        " for " + article_url);
  }

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::parse_error& e) {
    throw ProviderError(std::string("unparseable pageview response: ") + e.what());
  }
  const nlohmann::json& daily =
      doc.is_object() && doc.contains("daily") ? doc["daily"] : doc;
  if (!daily.is_object()) {
    throw ProviderError("pageview response for " + article_url +
                        " is not a date-to-count object");
  }
  return parse_daily_object(daily, article_url);
}

}  // namespace wikibox::ingest
