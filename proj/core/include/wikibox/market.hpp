#pragma once

#include <span>
#include <string_view>

namespace wikibox {

enum class MarketCode { US, UK, AU, DE, JA };

// A national box-office market bound to the language edition whose article
// traffic stands in for local interest. US, UK and AU share the English
// edition; DE and JA have their own.
class Market {
 public:
  static Market from_code(std::string_view code);  // throws ConfigError
  static std::span<const Market> all();

  MarketCode code() const { return code_; }
  std::string_view code_name() const;
  std::string_view wiki_language() const;

  // Localized disambiguation word appended to search queries.
  std::string_view film_suffix() const;

  friend bool operator==(Market a, Market b) { return a.code_ == b.code_; }
  friend bool operator!=(Market a, Market b) { return !(a == b); }

 private:
  friend struct MarketTable;
  explicit constexpr Market(MarketCode c) : code_(c) {}

  MarketCode code_;
};

}  // namespace wikibox
