#include "wikibox/align/language.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wikibox/errors.hpp"

namespace wikibox::align {

namespace {

std::vector<LanguageProfile> builtin_profiles() {
  return {
      LanguageProfile{
          "en",
          "en.wikipedia.org",
          "dbpedia.org",
          "http://dbpedia.org/resource/Category:",
          "http://dbpedia.org/sparql",
          "{year}_films",
          "{year}_animated_films",
          {"Category:", "File:", "Template:", "Wikipedia:", "Help:", "Portal:",
           "Special:", "Talk:", "User:", "Draft:", "Module:", "MediaWiki:"},
      },
      LanguageProfile{
          "de",
          "de.wikipedia.org",
          "de.dbpedia.org",
          "http://de.dbpedia.org/resource/Kategorie:",
          "http://de.dbpedia.org/sparql",
          "Filmtitel_{year}",
          // No per-year animated-film category exists on the German edition.
          std::nullopt,
          {"Kategorie:", "Datei:", "Vorlage:", "Wikipedia:", "Hilfe:", "Portal:",
           "Spezial:", "Diskussion:", "Benutzer:", "Modul:"},
      },
      LanguageProfile{
          "ja",
          "ja.wikipedia.org",
          "ja.dbpedia.org",
          "http://ja.dbpedia.org/resource/Category:",
          "http://ja.dbpedia.org/sparql",
          "{year}年の映画",
          "{year}年のアニメ映画",
          {"Category:", "ファイル:", "Template:", "Wikipedia:", "Help:", "Portal:",
           "特別:", "ノート:", "利用者:", "プロジェクト:"},
      },
  };
}

}  // namespace

const LanguageTable& LanguageTable::builtin() {
  static const LanguageTable table = [] {
    LanguageTable t;
    t.profiles_ = builtin_profiles();
    return t;
  }();
  return table;
}

LanguageTable LanguageTable::from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open language table file " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(buffer.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("malformed language table JSON in " + path.string() + ": " +
                      e.what());
  }
  if (!doc.is_array()) {
    throw ConfigError("language table must be a JSON array of profiles");
  }

  LanguageTable table;
  table.profiles_ = builtin_profiles();
  for (const auto& entry : doc) {
    if (!entry.is_object() || !entry.contains("language") ||
        !entry["language"].is_string()) {
      throw ConfigError("language table entries need a 'language' string");
    }
    const std::string language = entry.at("language").get<std::string>();
    LanguageProfile* target = nullptr;
    for (LanguageProfile& p : table.profiles_) {
      if (p.language == language) target = &p;
    }
    if (target == nullptr) {
      table.profiles_.push_back(LanguageProfile{language, {}, {}, {}, {}, {}, {}, {}});
      target = &table.profiles_.back();
    }
    auto set_string = [&](const char* key, std::string& field) {
      if (entry.contains(key)) field = entry[key].get<std::string>();
    };
    set_string("wiki_host", target->wiki_host);
    set_string("dbpedia_host", target->dbpedia_host);
    set_string("dbpedia_category_prefix", target->dbpedia_category_prefix);
    set_string("sparql_endpoint", target->sparql_endpoint);
    set_string("film_category_template", target->film_category_template);
    if (entry.contains("animated_category_template")) {
      if (entry["animated_category_template"].is_null()) {
        target->animated_category_template.reset();
      } else {
        target->animated_category_template =
            entry["animated_category_template"].get<std::string>();
      }
    }
    if (entry.contains("non_article_prefixes")) {
      target->non_article_prefixes =
          entry["non_article_prefixes"].get<std::vector<std::string>>();
    }
  }
  return table;
}

const LanguageProfile& LanguageTable::profile(std::string_view language) const {
  for (const LanguageProfile& p : profiles_) {
    if (p.language == language) return p;
  }
  throw ConfigError("no language profile for '" + std::string(language) +
                    "' (builtin table covers en, de, ja)");
}

}  // namespace wikibox::align
