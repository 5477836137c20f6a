#include "wikibox/align/normalize.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "wikibox/errors.hpp"

namespace wikibox::align {

namespace {

bool is_open_bracket(UChar32 c) {
  return c == U'(' || c == 0xFF08;  // ( and fullwidth （
}

bool is_close_bracket(UChar32 c) {
  return c == U')' || c == 0xFF09;
}

icu::UnicodeString strip_bracketed(const icu::UnicodeString& s) {
  icu::UnicodeString out;
  int depth = 0;
  for (int32_t i = 0; i < s.length();) {
    const UChar32 c = s.char32At(i);
    if (is_open_bracket(c)) {
      ++depth;
    } else if (is_close_bracket(c)) {
      if (depth > 0) --depth;
    } else if (depth == 0) {
      out.append(c);
    }
    i += U16_LENGTH(c);
  }
  return out;
}

bool is_separator_or_punct(UChar32 c) {
  if (c == '\t' || c == '\n' || c == '\r') return true;
  switch (u_charType(c)) {
    case U_SPACE_SEPARATOR:
    case U_LINE_SEPARATOR:
    case U_PARAGRAPH_SEPARATOR:
    case U_DASH_PUNCTUATION:
    case U_START_PUNCTUATION:
    case U_END_PUNCTUATION:
    case U_CONNECTOR_PUNCTUATION:
    case U_OTHER_PUNCTUATION:
    case U_INITIAL_PUNCTUATION:
    case U_FINAL_PUNCTUATION:
    case U_MATH_SYMBOL:
    case U_CURRENCY_SYMBOL:
    case U_MODIFIER_SYMBOL:
    case U_OTHER_SYMBOL:
      return true;
    default:
      return false;
  }
}

}  // namespace

std::string normalize_title(std::string_view title, std::string_view /*language*/) {
  icu::UnicodeString text =
      icu::UnicodeString::fromUTF8(icu::StringPiece(title.data(), title.size()));

  text = strip_bracketed(text);
  text.foldCase(U_FOLD_CASE_DEFAULT);

  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) {
    throw DataError("ICU NFC normalizer unavailable");
  }
  icu::UnicodeString composed = nfc->normalize(text, status);
  if (U_FAILURE(status)) {
    throw DataError("NFC normalization failed for title '" + std::string(title) + "'");
  }

  icu::UnicodeString collapsed;
  bool pending_space = false;
  for (int32_t i = 0; i < composed.length();) {
    const UChar32 c = composed.char32At(i);
    if (is_separator_or_punct(c)) {
      pending_space = collapsed.length() > 0;
    } else {
      if (pending_space) collapsed.append(static_cast<UChar32>(' '));
      pending_space = false;
      collapsed.append(c);
    }
    i += U16_LENGTH(c);
  }

  std::string out;
  collapsed.toUTF8String(out);
  return out;
}

}  // namespace wikibox::align
