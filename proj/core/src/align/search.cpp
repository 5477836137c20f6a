#include "wikibox/align/search.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "wikibox/align/normalize.hpp"
#include "wikibox/align/sparql.hpp"
#include "wikibox/errors.hpp"

namespace wikibox::align {

FixtureSearchProvider FixtureSearchProvider::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open search fixture " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_json(buffer.str());
}

FixtureSearchProvider FixtureSearchProvider::from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("malformed search fixture JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ConfigError("search fixture must map query keys to URL arrays");
  }
  FixtureSearchProvider provider;
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_array()) {
      throw ConfigError("search fixture entry '" + key + "' must be a URL array");
    }
    provider.results_[key] = value.get<std::vector<std::string>>();
  }
  return provider;
}

std::vector<std::string> FixtureSearchProvider::search(const std::string& title,
                                                       const Market& market) {
  const std::string key = normalize_title(title, market.wiki_language()) + "+" +
                          std::string(market.film_suffix());
  auto it = results_.find(key);
  return it == results_.end() ? std::vector<std::string>{} : it->second;
}

HttpSearchProvider::HttpSearchProvider(Config config) : config_(std::move(config)) {
  if (config_.endpoint_template.find("{query}") == std::string::npos) {
    throw ConfigError("search endpoint template lacks a {query} placeholder");
  }
}

namespace {

std::string url_encode_query(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
        c == '-' || c == '_' || c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else if (c == ' ') {
      out += '+';
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    }
  }
  return out;
}

}  // namespace

std::vector<std::string> HttpSearchProvider::search(const std::string& title,
                                                    const Market& market) {
  const std::string query =
      title + " " + std::string(market.film_suffix());
  std::string url = config_.endpoint_template;
  url.replace(url.find("{query}"), 7, url_encode_query(query));

  const auto scheme_end = url.find("://");
  const auto host_end = url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  if (scheme_end == std::string::npos || url.substr(0, scheme_end) != "http") {
    throw ConfigError("search endpoint must be an http:// URL");
  }
  const std::string origin = url.substr(0, host_end);
  const std::string path = host_end == std::string::npos ? "/" : url.substr(host_end);

  httplib::Client client(origin);
  client.set_connection_timeout(config_.timeout_seconds);
  client.set_read_timeout(config_.timeout_seconds);
  auto res = client.Get(path);
  if (!res) {
    throw ProviderError("search request failed: " + httplib::to_string(res.error()));
  }
  if (res->status == 429 || res->status == 403) {
    throw QuotaError("search quota exhausted (HTTP " + std::to_string(res->status) + ")");
  }
  if (res->status != 200) {
    throw ProviderError("search endpoint returned HTTP " + std::to_string(res->status));
  }

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::parse_error& e) {
    throw ProviderError(std::string("unparseable search response: ") + e.what());
  }
  std::vector<std::string> urls;
  if (doc.is_array()) {
    urls = doc.get<std::vector<std::string>>();
  } else if (doc.is_object() && doc.contains("items") && doc["items"].is_array()) {
    for (const auto& item : doc["items"]) {
      if (item.contains("link")) urls.push_back(item["link"].get<std::string>());
    }
  } else {
    throw ProviderError("search response is neither a URL array nor an items list");
  }
  return urls;
}

std::vector<std::string> resolve_candidates(const std::string& title, const Market& market,
                                            SearchProvider& provider,
                                            const LanguageTable& table) {
  const std::vector<std::string> raw = provider.search(title, market);

  std::vector<std::string> candidates;
  std::set<std::string> seen;
  for (const std::string& url : raw) {
    const auto canonical = article_url_for_language(url, market.wiki_language(), table);
    if (!canonical) continue;
    if (seen.insert(*canonical).second) {
      candidates.push_back(*canonical);
    }
  }
  return candidates;
}

}  // namespace wikibox::align
