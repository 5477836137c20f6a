#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wikibox/align/search.hpp"
#include "wikibox/align/sparql.hpp"
#include "wikibox/catalog.hpp"
#include "wikibox/dataset.hpp"

namespace wikibox::align {

enum class UnalignedReason { no_candidates, all_filtered };

std::string_view to_string(UnalignedReason reason);

struct CandidateDecision {
  std::string url;
  bool accepted = false;
  std::string note;
};

// Outcome for one catalog record: either exactly one article URL or a
// reason. Every candidate's accept/reject decision is kept for audit.
struct AlignmentResult {
  std::string title;
  Date release_date;
  std::optional<std::string> url;
  std::optional<UnalignedReason> unaligned_reason;
  AlignmentMethod method = AlignmentMethod::automatic;
  std::vector<CandidateDecision> candidates_considered;

  bool aligned() const { return url.has_value(); }
};

struct AlignmentSummary {
  std::size_t total = 0;
  std::size_t aligned_auto = 0;
  std::size_t aligned_manual = 0;
  std::size_t unaligned = 0;
  std::vector<std::string> warnings;

  std::size_t aligned() const { return aligned_auto + aligned_manual; }
};

// The highest-ranked candidate that is a member of the film list wins.
// Requires list.language == record.market.wiki_language().
AlignmentResult align_film(const FilmRecord& record, const FilmList& list,
                           SearchProvider& provider,
                           const LanguageTable& table = LanguageTable::builtin());

// Aligns a single-market catalog. manual_overrides (title -> URL) take
// precedence and skip the provider; an override URL missing from the list
// is kept but reported as a warning. Candidate resolution for distinct
// records runs on up to max_concurrent threads (providers must tolerate
// concurrent calls and enforce their own rate limits); assembly is
// order-stable, so the output matches a sequential run byte for byte and
// a provider failure surfaces as the earliest failing record's error.
std::pair<std::vector<AlignmentResult>, AlignmentSummary> align_catalog(
    std::span<const FilmRecord> records, const FilmList& list, SearchProvider& provider,
    const std::map<std::string, std::string>& manual_overrides = {},
    const LanguageTable& table = LanguageTable::builtin(), int max_concurrent = 1);

// {"total": ..., "aligned_auto": ..., "aligned_manual": ..., "unaligned": ...}
std::string write_summary_json(const AlignmentSummary& summary);

std::string write_results_json(std::span<const AlignmentResult> results);

std::map<std::string, std::string> read_overrides_json(std::string_view text);

}  // namespace wikibox::align
