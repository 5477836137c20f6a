#include "wikibox/align/sparql.hpp"

#include <algorithm>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "wikibox/errors.hpp"

namespace wikibox::align {

namespace {

std::string fill_year(std::string_view templ, int year) {
  std::string out(templ);
  const std::string placeholder = "{year}";
  const auto pos = out.find(placeholder);
  if (pos == std::string::npos) {
    throw ConfigError("category template '" + out + "' lacks a {year} placeholder");
  }
  out.replace(pos, placeholder.size(), std::to_string(year));
  return out;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::string percent_decode(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size()) {
      const int hi = hex_value(s[i + 1]);
      const int lo = hex_value(s[i + 2]);
      if (hi >= 0 && lo >= 0) {
        out += static_cast<char>(hi * 16 + lo);
        i += 2;
        continue;
      }
    }
    out += s[i];
  }
  return out;
}

std::string percent_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s) {
    const bool unreserved = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                            (c >= '0' && c <= '9') || c == '-' || c == '_' ||
                            c == '.' || c == '~';
    if (unreserved) {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    }
  }
  return out;
}

struct SplitUrl {
  std::string scheme;
  std::string host;
  std::string path;
};

std::optional<SplitUrl> split_url(std::string_view url) {
  SplitUrl out;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) return std::nullopt;
  out.scheme = std::string(url.substr(0, scheme_end));
  std::string_view rest = url.substr(scheme_end + 3);
  const auto slash = rest.find('/');
  if (slash == std::string_view::npos) {
    out.host = std::string(rest);
  } else {
    out.host = std::string(rest.substr(0, slash));
    out.path = std::string(rest.substr(slash));
  }
  std::transform(out.host.begin(), out.host.end(), out.host.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  // Drop query and fragment; article identity lives in the path.
  for (const char cut : {'?', '#'}) {
    const auto pos = out.path.find(cut);
    if (pos != std::string::npos) out.path.resize(pos);
  }
  return out;
}

}  // namespace

FilmListQuery build_film_list_query(std::string_view language, std::span<const int> years,
                                    bool include_animation, const LanguageTable& table) {
  const LanguageProfile& profile = table.profile(language);
  if (years.empty()) {
    throw ConfigError("years must be nonempty");
  }

  std::vector<int> sorted(years.begin(), years.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  std::vector<std::string> category_names;
  for (int year : sorted) {
    category_names.push_back(fill_year(profile.film_category_template, year));
  }
  if (include_animation && profile.animated_category_template) {
    for (int year : sorted) {
      category_names.push_back(fill_year(*profile.animated_category_template, year));
    }
  }

  FilmListQuery query;
  query.language = profile.language;
  for (const std::string& name : category_names) {
    query.categories.push_back(profile.dbpedia_category_prefix + name);
  }

  std::string text;
  text += "PREFIX c: <" + profile.dbpedia_category_prefix + ">\n";
  text += "PREFIX dcterms: <http://purl.org/dc/terms/>\n";
  text += "SELECT ?film WHERE {\n";
  for (std::size_t i = 0; i < category_names.size(); ++i) {
    if (i > 0) text += "  UNION\n";
    text += "  {?film dcterms:subject c:" + category_names[i] + " .}\n";
  }
  text += "}\n";
  query.rendered = std::move(text);
  return query;
}

std::string canonicalize_article_url(std::string_view url) {
  const auto parts = split_url(url);
  if (!parts) {
    throw DataError("not a URL: '" + std::string(url) + "'");
  }
  std::string title = parts->path;
  const std::string wiki = "/wiki/";
  if (title.rfind(wiki, 0) != 0) {
    throw DataError("not an article URL (no /wiki/ path): '" + std::string(url) + "'");
  }
  title = percent_decode(title.substr(wiki.size()));
  std::replace(title.begin(), title.end(), ' ', '_');
  return "https://" + parts->host + "/wiki/" + title;
}

std::optional<std::string> article_url_for_language(std::string_view url,
                                                    std::string_view language,
                                                    const LanguageTable& table) {
  const LanguageProfile& profile = table.profile(language);
  const auto parts = split_url(url);
  if (!parts) return std::nullopt;
  if (parts->host != profile.wiki_host) return std::nullopt;
  if (parts->path.rfind("/wiki/", 0) != 0) return std::nullopt;

  const std::string canonical = canonicalize_article_url(url);
  const std::string title = canonical.substr(canonical.find("/wiki/") + 6);
  if (title.empty()) return std::nullopt;
  for (const std::string& prefix : profile.non_article_prefixes) {
    if (title.rfind(prefix, 0) == 0) return std::nullopt;
  }
  return canonical;
}

FilmList parse_film_list(std::string_view sparql_json, std::string_view language,
                         std::string source, const LanguageTable& table) {
  const LanguageProfile& profile = table.profile(language);

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(sparql_json);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("malformed SPARQL results JSON: ") + e.what());
  }
  if (!doc.contains("results") || !doc["results"].contains("bindings") ||
      !doc["results"]["bindings"].is_array()) {
    throw DataError("SPARQL results JSON lacks results.bindings");
  }

  FilmList list;
  list.language = std::string(language);
  list.source = std::move(source);

  const std::string resource_prefix = "http://" + profile.dbpedia_host + "/resource/";
  const std::string resource_prefix_https = "https://" + profile.dbpedia_host + "/resource/";

  std::size_t row = 0;
  for (const auto& binding : doc["results"]["bindings"]) {
    if (!binding.is_object() || !binding.contains("film") ||
        !binding["film"].is_object() || !binding["film"].contains("value") ||
        !binding["film"]["value"].is_string()) {
      throw DataError("SPARQL binding " + std::to_string(row) + " lacks a 'film' value");
    }
    if (binding["film"].contains("type") && binding["film"]["type"] != "uri") {
      throw DataError("SPARQL binding " + std::to_string(row) + " is not a URI");
    }
    const std::string value = binding["film"]["value"].get<std::string>();

    std::string article;
    if (value.rfind(resource_prefix, 0) == 0) {
      article = "https://" + profile.wiki_host + "/wiki/" +
                value.substr(resource_prefix.size());
    } else if (value.rfind(resource_prefix_https, 0) == 0) {
      article = "https://" + profile.wiki_host + "/wiki/" +
                value.substr(resource_prefix_https.size());
    } else {
      article = value;  // accept direct article URLs too
    }
    const auto canonical = article_url_for_language(article, language, table);
    if (!canonical) {
      throw DataError("SPARQL binding " + std::to_string(row) + " ('" + value +
                      "') is not a " + std::string(language) + " film resource");
    }
    list.urls.insert(*canonical);
    ++row;
  }
  return list;
}

FilmList fetch_film_list_http(const std::string& endpoint, const FilmListQuery& query,
                              const LanguageTable& table) {
  const auto parts = split_url(endpoint);
  if (!parts || parts->scheme != "http") {
    throw ConfigError("SPARQL endpoint must be an http:// URL, got '" + endpoint + "'");
  }

  httplib::Client client(parts->scheme + "://" + parts->host);
  client.set_connection_timeout(10);
  client.set_read_timeout(30);

  const std::string path = parts->path + "?query=" + percent_encode(query.rendered) +
                           "&format=" + percent_encode("application/sparql-results+json");
  auto res = client.Get(path);
  if (!res) {
    throw ProviderError("SPARQL request to " + endpoint + " failed: " +
                        httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw ProviderError("SPARQL endpoint " + endpoint + " returned HTTP " +
                        std::to_string(res->status));
  }
  return parse_film_list(res->body, query.language, endpoint, table);
}

}  // namespace wikibox::align
