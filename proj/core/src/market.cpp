#include "wikibox/market.hpp"

#include <array>
#include <string>

#include "wikibox/errors.hpp"

namespace wikibox {

namespace {

struct MarketRow {
  MarketCode code;
  std::string_view name;
  std::string_view language;
  std::string_view suffix;
};

constexpr std::array<MarketRow, 5> kMarkets{{
    {MarketCode::US, "US", "en", "film"},
    {MarketCode::UK, "UK", "en", "film"},
    {MarketCode::AU, "AU", "en", "film"},
    {MarketCode::DE, "DE", "de", "film"},
    {MarketCode::JA, "JA", "ja", "映画"},
}};

const MarketRow& row_for(MarketCode code) {
  return kMarkets[static_cast<std::size_t>(code)];
}

}  // namespace

struct MarketTable {
  static std::span<const Market> all() {
    static const std::array<Market, 5> markets{
        Market(MarketCode::US), Market(MarketCode::UK), Market(MarketCode::AU),
        Market(MarketCode::DE), Market(MarketCode::JA)};
    return markets;
  }
};

Market Market::from_code(std::string_view code) {
  for (const Market& m : MarketTable::all()) {
    if (m.code_name() == code) return m;
  }
  throw ConfigError("unknown market code '" + std::string(code) +
                    "' (expected US, UK, AU, DE or JA)");
}

std::span<const Market> Market::all() { return MarketTable::all(); }

std::string_view Market::code_name() const { return row_for(code_).name; }

std::string_view Market::wiki_language() const { return row_for(code_).language; }

std::string_view Market::film_suffix() const { return row_for(code_).suffix; }

}  // namespace wikibox
