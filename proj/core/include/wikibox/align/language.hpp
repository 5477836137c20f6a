#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wikibox::align {

// Per-edition knowledge needed to build film-list queries and to tell
// article URLs from namespace pages. Category templates carry a {year}
// placeholder and use underscores, matching the resource IRIs.
struct LanguageProfile {
  std::string language;
  std::string wiki_host;
  std::string dbpedia_host;
  std::string dbpedia_category_prefix;
  std::string sparql_endpoint;
  std::string film_category_template;
  std::optional<std::string> animated_category_template;
  std::vector<std::string> non_article_prefixes;
};

// The bundled table covers en, de and ja. Only the Japanese category naming
// is documented upstream; the English and German schemes are best-effort
// reconstructions and can be replaced via an override file.
class LanguageTable {
 public:
  static const LanguageTable& builtin();

  // JSON override: an array of profile objects mirroring LanguageProfile
  // field names. Missing optional fields fall back to the builtin entry.
  static LanguageTable from_json_file(const std::filesystem::path& path);

  const LanguageProfile& profile(std::string_view language) const;  // throws ConfigError
  const std::vector<LanguageProfile>& profiles() const { return profiles_; }

 private:
  std::vector<LanguageProfile> profiles_;
};

}  // namespace wikibox::align
