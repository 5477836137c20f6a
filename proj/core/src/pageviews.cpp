#include "wikibox/pageviews.hpp"

#include <charconv>

#include <nlohmann/json.hpp>

#include "wikibox/errors.hpp"

namespace wikibox {

using ordered_json = nlohmann::ordered_json;

PageviewSeries::PageviewSeries(std::string article_url, Date release_date,
                               OffsetRange coverage, std::map<int, std::uint64_t> daily)
    : article_url_(std::move(article_url)),
      release_date_(release_date),
      coverage_(coverage),
      daily_(std::move(daily)) {
  if (coverage_.lo > coverage_.hi) {
    throw DataError("pageview coverage range [" + std::to_string(coverage_.lo) + ", " +
                    std::to_string(coverage_.hi) + "] is empty for " + article_url_);
  }
  for (const auto& [offset, _] : daily_) {
    if (!coverage_.contains(offset)) {
      throw DataError("pageview offset " + std::to_string(offset) +
                      " lies outside coverage [" + std::to_string(coverage_.lo) + ", " +
                      std::to_string(coverage_.hi) + "] for " + article_url_);
    }
  }
}

std::uint64_t PageviewSeries::at(int offset) const {
  if (!coverage_.contains(offset)) {
    throw DataError("offset " + std::to_string(offset) + " not covered by series for " +
                    article_url_);
  }
  auto it = daily_.find(offset);
  return it == daily_.end() ? 0 : it->second;
}

PageviewSeries read_series_json(std::string_view text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw DataError(std::string("malformed pageview series JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("article_url") || !doc.contains("release_date") ||
      !doc.contains("daily") || !doc["daily"].is_object()) {
    throw DataError(
        "pageview series JSON needs object keys article_url, release_date, daily");
  }

  if (!doc["article_url"].is_string() || !doc["release_date"].is_string()) {
    throw DataError("pageview series JSON: article_url and release_date must be strings");
  }
  const std::string url = doc["article_url"].get<std::string>();
  const Date release = Date::parse(doc["release_date"].get<std::string>());

  std::map<int, std::uint64_t> daily;
  for (const auto& [key, value] : doc["daily"].items()) {
    int offset = 0;
    auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), offset);
    if (ec != std::errc{} || ptr != key.data() + key.size()) {
      throw DataError("bad day offset '" + key + "' in series for " + url);
    }
    if (!value.is_number_integer() || value.is_number_float() ||
        (value.is_number_integer() && !value.is_number_unsigned() &&
         value.get<std::int64_t>() < 0)) {
      throw DataError("negative or non-integer view count at offset " + key +
                      " in series for " + url);
    }
    daily[offset] = value.get<std::uint64_t>();
  }
  if (daily.empty()) {
    throw DataError("pageview series for " + url + " has an empty daily map");
  }
  const OffsetRange coverage{daily.begin()->first, daily.rbegin()->first};
  return PageviewSeries(url, release, coverage, std::move(daily));
}

std::string write_series_json(const PageviewSeries& series) {
  ordered_json daily = ordered_json::object();
  for (int d = series.coverage().lo; d <= series.coverage().hi; ++d) {
    daily[std::to_string(d)] = series.at(d);
  }
  ordered_json doc = ordered_json::object();
  doc["article_url"] = series.article_url();
  doc["release_date"] = series.release_date().to_string();
  doc["daily"] = std::move(daily);
  return doc.dump(2) + "\n";
}

}  // namespace wikibox
