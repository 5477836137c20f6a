#include "wikibox/dataset.hpp"

#include <set>

#include <nlohmann/json.hpp>

#include "wikibox/errors.hpp"

namespace wikibox {

using ordered_json = nlohmann::ordered_json;

std::string_view to_string(AlignmentMethod m) {
  return m == AlignmentMethod::automatic ? "automatic" : "manual";
}

AlignmentMethod alignment_method_from_string(std::string_view s) {
  if (s == "automatic") return AlignmentMethod::automatic;
  if (s == "manual") return AlignmentMethod::manual;
  throw DataError("unknown alignment method '" + std::string(s) + "'");
}

namespace {

bool url_in_edition(std::string_view url, std::string_view language) {
  const std::string host = std::string(language) + ".wikipedia.org";
  const std::string wanted = "https://" + host + "/wiki/";
  return url.rfind(wanted, 0) == 0;
}

}  // namespace

ValidationReport validate_dataset(const Dataset& d) {
  ValidationReport report;
  auto fatal = [&](std::string msg) { report.fatal.push_back(std::move(msg)); };

  if (d.window_start >= 0) {
    fatal("window_start must be negative, got " + std::to_string(d.window_start));
  }

  std::set<std::string> urls;
  for (const AlignedFilm& film : d.films) {
    const std::string& title = film.record.title;

    if (film.record.market != d.market) {
      fatal("mixed markets: '" + title + "' is " +
            std::string(film.record.market.code_name()) + " in a " +
            std::string(d.market.code_name()) + " dataset");
    }
    if (film.record.revenue == 0) {
      fatal("'" + title + "' has zero revenue");
    }
    if (!urls.insert(film.article_url).second) {
      fatal("duplicate article URL " + film.article_url);
    }
    if (film.views.article_url() != film.article_url) {
      fatal("pageview series URL mismatch for '" + title + "': " +
            film.views.article_url() + " vs " + film.article_url);
    }
    if (!url_in_edition(film.article_url, d.market.wiki_language())) {
      fatal("article URL for '" + title + "' is not in the " +
            std::string(d.market.wiki_language()) + " edition: " + film.article_url);
    }

    const OffsetRange needed{d.window_start, 0};
    if (!film.views.coverage().contains(needed)) {
      report.warnings.push_back(
          "incomplete pageview coverage for '" + title + "': have [" +
          std::to_string(film.views.coverage().lo) + ", " +
          std::to_string(film.views.coverage().hi) + "], window needs [" +
          std::to_string(needed.lo) + ", 0]");
    }
  }
  return report;
}

Manifest read_manifest_json(std::string_view text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw DataError(std::string("malformed manifest JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("market") || !doc.contains("window_start") ||
      !doc.contains("films") || !doc["films"].is_array()) {
    throw DataError("manifest JSON needs object keys market, window_start, films");
  }

  try {
    Manifest manifest{Market::from_code(doc["market"].get<std::string>()),
                      doc["window_start"].get<int>(),
                      {}};
    for (const auto& entry : doc["films"]) {
      if (!entry.contains("catalog_key") || !entry.contains("article_url") ||
          !entry.contains("pageview_file") || !entry.contains("alignment_method")) {
        throw DataError(
            "manifest film entry needs catalog_key, article_url, pageview_file, "
            "alignment_method");
      }
      const auto& key = entry["catalog_key"];
      manifest.films.push_back(ManifestEntry{
          key.at("title").get<std::string>(),
          Date::parse(key.at("release_date").get<std::string>()),
          entry["article_url"].get<std::string>(),
          entry["pageview_file"].get<std::string>(),
          alignment_method_from_string(entry["alignment_method"].get<std::string>())});
    }
    return manifest;
  } catch (const ordered_json::exception& e) {
    throw DataError(std::string("malformed manifest JSON: ") + e.what());
  }
}

std::string write_manifest_json(const Manifest& manifest) {
  ordered_json films = ordered_json::array();
  for (const ManifestEntry& entry : manifest.films) {
    ordered_json key = ordered_json::object();
    key["title"] = entry.title;
    key["release_date"] = entry.release_date.to_string();
    ordered_json film = ordered_json::object();
    film["catalog_key"] = std::move(key);
    film["article_url"] = entry.article_url;
    film["pageview_file"] = entry.pageview_file;
    film["alignment_method"] = std::string(to_string(entry.alignment_method));
    films.push_back(std::move(film));
  }
  ordered_json doc = ordered_json::object();
  doc["market"] = std::string(manifest.market.code_name());
  doc["window_start"] = manifest.window_start;
  doc["films"] = std::move(films);
  return doc.dump(2) + "\n";
}

}  // namespace wikibox
