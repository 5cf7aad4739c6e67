/*
 * Copyright 2026 borrowkit authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

// Small UTF-8 / Latin-script text layer shared by every other header.
// Covers ASCII, Latin-1 Supplement and Latin Extended-A, which is all the
// LU/DE/FR/EN news material needs; anything beyond that is passed through
// untouched and treated as a plain letter.

namespace borrowkit::text {

inline constexpr char32_t kReplacement = 0xFFFD;

// Decodes the codepoint starting at byte i and advances i past it.
// Invalid sequences consume one byte and yield U+FFFD.
inline char32_t decode(std::string_view s, std::size_t& i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  auto cont = [&](std::size_t k) {
    return i + k < s.size() &&
           (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80;
  };
  if ((b0 & 0xE0) == 0xC0 && cont(1)) {
    char32_t cp = (b0 & 0x1Fu) << 6 |
                  (static_cast<unsigned char>(s[i + 1]) & 0x3Fu);
    i += 2;
    return cp;
  }
  if ((b0 & 0xF0) == 0xE0 && cont(1) && cont(2)) {
    char32_t cp = (b0 & 0x0Fu) << 12 |
                  (static_cast<unsigned char>(s[i + 1]) & 0x3Fu) << 6 |
                  (static_cast<unsigned char>(s[i + 2]) & 0x3Fu);
    i += 3;
    return cp;
  }
  if ((b0 & 0xF8) == 0xF0 && cont(1) && cont(2) && cont(3)) {
    char32_t cp = (b0 & 0x07u) << 18 |
                  (static_cast<unsigned char>(s[i + 1]) & 0x3Fu) << 12 |
                  (static_cast<unsigned char>(s[i + 2]) & 0x3Fu) << 6 |
                  (static_cast<unsigned char>(s[i + 3]) & 0x3Fu);
    i += 4;
    return cp;
  }
  ++i;
  return kReplacement;
}

inline void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline std::vector<char32_t> decode_all(std::string_view s) {
  std::vector<char32_t> cps;
  cps.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) cps.push_back(decode(s, i));
  return cps;
}

inline bool is_space(char32_t cp) {
  return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' ||
         cp == U'\f' || cp == U'\v' || cp == 0x00A0 || cp == 0x2009 ||
         cp == 0x200A || cp == 0x2002 || cp == 0x2003 || cp == 0x202F ||
         cp == 0x3000;
}

inline bool is_digit(char32_t cp) {
  return (cp >= U'0' && cp <= U'9') || cp == 0x00B2 || cp == 0x00B3 ||
         cp == 0x00B9 || (cp >= 0x00BC && cp <= 0x00BE);
}

// Punctuation and symbols, ASCII plus the general-punctuation block and the
// odd currency/math signs seen in news text.
inline bool is_punct_or_symbol(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= U'!' && cp <= U'/') || (cp >= U':' && cp <= U'@') ||
           (cp >= U'[' && cp <= U'`') || (cp >= U'{' && cp <= U'~');
  }
  if (cp >= 0x00A1 && cp <= 0x00BF) return !is_digit(cp);
  if (cp == 0x00D7 || cp == 0x00F7) return true;
  if (cp >= 0x2010 && cp <= 0x205E) return true;  // dashes, quotes, ellipsis
  if (cp >= 0x20A0 && cp <= 0x20BF) return true;  // currency signs
  if (cp >= 0x2190 && cp <= 0x2BFF) return true;  // arrows, math, misc symbols
  return false;
}

inline bool is_control(char32_t cp) { return cp < 0x20 || cp == 0x7F; }

inline bool is_letter(char32_t cp) {
  return !is_space(cp) && !is_digit(cp) && !is_punct_or_symbol(cp) &&
         !is_control(cp);
}

inline bool is_upper(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return true;
  if (cp >= 0x00C0 && cp <= 0x00DE && cp != 0x00D7) return true;
  if (cp >= 0x0100 && cp <= 0x0137) return (cp & 1) == 0;
  if (cp >= 0x0139 && cp <= 0x0148) return (cp & 1) == 1;
  if (cp >= 0x014A && cp <= 0x0177) return (cp & 1) == 0;
  if (cp == 0x0178) return true;
  if (cp >= 0x0179 && cp <= 0x017E) return (cp & 1) == 1;
  return false;
}

inline char32_t to_lower(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 0x20;
  if (cp >= 0x00C0 && cp <= 0x00DE && cp != 0x00D7) return cp + 0x20;
  if (cp >= 0x0100 && cp <= 0x0137) return (cp & 1) == 0 ? cp + 1 : cp;
  if (cp >= 0x0139 && cp <= 0x0148) return (cp & 1) == 1 ? cp + 1 : cp;
  if (cp >= 0x014A && cp <= 0x0177) return (cp & 1) == 0 ? cp + 1 : cp;
  if (cp == 0x0178) return 0x00FF;
  if (cp >= 0x0179 && cp <= 0x017E) return (cp & 1) == 1 ? cp + 1 : cp;
  return cp;
}

// Maps a lowercase Latin codepoint to its unaccented base letter.
inline char32_t strip_diacritic(char32_t cp) {
  if (cp < 0x00C0) return cp;
  switch (cp) {
    case 0x00E0: case 0x00E1: case 0x00E2: case 0x00E3:
    case 0x00E4: case 0x00E5: return U'a';
    case 0x00E6: return U'a';  // ae ligature folds toward a
    case 0x00E7: return U'c';
    case 0x00E8: case 0x00E9: case 0x00EA: case 0x00EB: return U'e';
    case 0x00EC: case 0x00ED: case 0x00EE: case 0x00EF: return U'i';
    case 0x00F0: return U'd';
    case 0x00F1: return U'n';
    case 0x00F2: case 0x00F3: case 0x00F4: case 0x00F5:
    case 0x00F6: case 0x00F8: return U'o';
    case 0x00F9: case 0x00FA: case 0x00FB: case 0x00FC: return U'u';
    case 0x00FD: case 0x00FF: return U'y';
    default: break;
  }
  if (cp >= 0x0101 && cp <= 0x0105) return U'a';
  if (cp >= 0x0107 && cp <= 0x010D) return U'c';
  if (cp >= 0x010F && cp <= 0x0111) return U'd';
  if (cp >= 0x0113 && cp <= 0x011B) return U'e';
  if (cp >= 0x011D && cp <= 0x0123) return U'g';
  if (cp >= 0x0125 && cp <= 0x0127) return U'h';
  if (cp >= 0x0129 && cp <= 0x0131) return U'i';
  if (cp >= 0x0135 && cp <= 0x0136) return U'j';
  if (cp == 0x0137 || cp == 0x0138) return U'k';
  if (cp >= 0x013A && cp <= 0x0142) return U'l';
  if (cp >= 0x0144 && cp <= 0x014B) return U'n';
  if (cp >= 0x014D && cp <= 0x0151) return U'o';
  if (cp == 0x0153) return U'o';  // oe ligature
  if (cp >= 0x0155 && cp <= 0x0159) return U'r';
  if (cp >= 0x015B && cp <= 0x0161) return U's';
  if (cp >= 0x0163 && cp <= 0x0167) return U't';
  if (cp >= 0x0169 && cp <= 0x0173) return U'u';
  if (cp == 0x0175) return U'w';
  if (cp == 0x0177) return U'y';
  if (cp >= 0x017A && cp <= 0x017E) return U'z';
  return cp;
}

/// Lowercases a UTF-8 string (diacritics preserved).
inline std::string fold_case(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) append_utf8(out, to_lower(decode(s, i)));
  return out;
}

/// Lowercases and removes diacritics; used for accent-tolerant comparison.
inline std::string fold_strip(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();)
    append_utf8(out, strip_diacritic(to_lower(decode(s, i))));
  return out;
}

inline bool equal_folded(std::string_view a, std::string_view b) {
  return fold_case(a) == fold_case(b);
}

inline std::string_view trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (static_cast<unsigned char>(s[b]) <= 0x20)) ++b;
  while (e > b && (static_cast<unsigned char>(s[e - 1]) <= 0x20)) --e;
  return s.substr(b, e - b);
}

/// Trims and collapses internal whitespace runs to single spaces.
inline std::string collapse_ws(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending = false;
  for (std::size_t i = 0; i < s.size();) {
    char32_t cp = decode(s, i);
    if (is_space(cp) || is_control(cp)) {
      pending = !out.empty();
    } else {
      if (pending) out.push_back(' ');
      pending = false;
      append_utf8(out, cp);
    }
  }
  return out;
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Transparent hashing so containers can be probed with string_view keys.
struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view sv) const noexcept {
    return std::hash<std::string_view>{}(sv);
  }
};

template <typename T>
using StringMap = std::unordered_map<std::string, T, StringHash, std::equal_to<>>;

}  // namespace borrowkit::text
