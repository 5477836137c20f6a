#include "wikibox/align/align.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include <nlohmann/json.hpp>

#include "wikibox/errors.hpp"

namespace wikibox::align {

std::string_view to_string(UnalignedReason reason) {
  return reason == UnalignedReason::no_candidates ? "no_candidates" : "all_filtered";
}

AlignmentResult align_film(const FilmRecord& record, const FilmList& list,
                           SearchProvider& provider, const LanguageTable& table) {
  if (list.language != record.market.wiki_language()) {
    throw DataError("film list language '" + list.language + "' does not match market " +
                    std::string(record.market.code_name()) + " ('" +
                    std::string(record.market.wiki_language()) + "')");
  }

  AlignmentResult result;
  result.title = record.title;
  result.release_date = record.release_date;

  const std::vector<std::string> candidates =
      resolve_candidates(record.title, record.market, provider, table);
  if (candidates.empty()) {
    result.unaligned_reason = UnalignedReason::no_candidates;
    return result;
  }

  for (const std::string& url : candidates) {
    CandidateDecision decision;
    decision.url = url;
    if (!result.url && list.contains(url)) {
      decision.accepted = true;
      decision.note = "highest-ranked film-list member";
      result.url = url;
    } else if (list.contains(url)) {
      decision.note = "film-list member ranked below the accepted candidate";
    } else {
      decision.note = "not in film list";
    }
    result.candidates_considered.push_back(std::move(decision));
  }
  if (!result.url) {
    result.unaligned_reason = UnalignedReason::all_filtered;
  }
  return result;
}

std::pair<std::vector<AlignmentResult>, AlignmentSummary> align_catalog(
    std::span<const FilmRecord> records, const FilmList& list, SearchProvider& provider,
    const std::map<std::string, std::string>& manual_overrides,
    const LanguageTable& table, int max_concurrent) {
  for (const FilmRecord& record : records) {
    if (record.market != records.front().market) {
      throw DataError("align_catalog: records span multiple markets ('" +
                      record.title + "' is " +
                      std::string(record.market.code_name()) + ")");
    }
  }

  // Resolve provider-backed records, possibly on several threads; slots
  // keep results (or failures) addressable by record index so assembly
  // below stays in input order.
  struct Slot {
    std::optional<AlignmentResult> result;
    std::exception_ptr failure;
  };
  std::vector<Slot> slots(records.size());

  auto resolve_one = [&](std::size_t i) {
    if (manual_overrides.count(records[i].title)) return;
    try {
      slots[i].result = align_film(records[i], list, provider, table);
    } catch (...) {
      slots[i].failure = std::current_exception();
    }
  };

  const std::size_t workers = std::min<std::size_t>(
      records.size(), static_cast<std::size_t>(std::max(max_concurrent, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < records.size(); ++i) resolve_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= records.size()) return;
          resolve_one(i);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }

  std::vector<AlignmentResult> results;
  results.reserve(records.size());
  AlignmentSummary summary;
  summary.total = records.size();

  for (std::size_t i = 0; i < records.size(); ++i) {
    const FilmRecord& record = records[i];
    auto override_it = manual_overrides.find(record.title);
    if (override_it != manual_overrides.end()) {
      AlignmentResult result;
      result.title = record.title;
      result.release_date = record.release_date;
      result.method = AlignmentMethod::manual;
      result.url = canonicalize_article_url(override_it->second);
      CandidateDecision decision{*result.url, true, "manual override"};
      if (!list.contains(*result.url)) {
        decision.note = "manual override (not in film list)";
        summary.warnings.push_back("manual override for '" + record.title +
                                   "' is not in the film list: " + *result.url);
      }
      result.candidates_considered.push_back(std::move(decision));
      ++summary.aligned_manual;
      results.push_back(std::move(result));
      continue;
    }

    if (slots[i].failure) {
      std::rethrow_exception(slots[i].failure);
    }
    AlignmentResult result = std::move(*slots[i].result);
    if (result.aligned()) {
      ++summary.aligned_auto;
    } else {
      ++summary.unaligned;
    }
    results.push_back(std::move(result));
  }
  return {std::move(results), summary};
}

std::string write_summary_json(const AlignmentSummary& summary) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  doc["total"] = summary.total;
  doc["aligned_auto"] = summary.aligned_auto;
  doc["aligned_manual"] = summary.aligned_manual;
  doc["unaligned"] = summary.unaligned;
  return doc.dump(2) + "\n";
}

std::string write_results_json(std::span<const AlignmentResult> results) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const AlignmentResult& result : results) {
    nlohmann::ordered_json row = nlohmann::ordered_json::object();
    row["title"] = result.title;
    row["release_date"] = result.release_date.to_string();
    if (result.url) {
      row["outcome"] = "aligned";
      row["url"] = *result.url;
      row["method"] = std::string(to_string(result.method));
    } else {
      row["outcome"] = "unaligned";
      row["reason"] = std::string(to_string(*result.unaligned_reason));
    }
    nlohmann::ordered_json candidates = nlohmann::ordered_json::array();
    for (const CandidateDecision& decision : result.candidates_considered) {
      nlohmann::ordered_json c = nlohmann::ordered_json::object();
      c["url"] = decision.url;
      c["accepted"] = decision.accepted;
      c["note"] = decision.note;
      candidates.push_back(std::move(c));
    }
    row["candidates_considered"] = std::move(candidates);
    rows.push_back(std::move(row));
  }
  return rows.dump(2) + "\n";
}

std::map<std::string, std::string> read_overrides_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("malformed overrides JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ConfigError("overrides file must map titles to article URLs");
  }
  std::map<std::string, std::string> overrides;
  for (const auto& [title, url] : doc.items()) {
    if (!url.is_string()) {
      throw ConfigError("override for '" + title + "' must be a URL string");
    }
    overrides[title] = url.get<std::string>();
  }
  return overrides;
}

}  // namespace wikibox::align
