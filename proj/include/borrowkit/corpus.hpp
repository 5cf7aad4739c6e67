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

#include <array>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "borrowkit/log.hpp"
#include "borrowkit/text.hpp"

// Annotated corpus data model: documents -> sentences -> tokens, plus the
// JSON-lines ingestion path that builds it from raw article records.

namespace borrowkit {

enum class Lang : std::uint8_t { LU, DE, FR, EN, OTHER, NEUTRAL };
enum class LoanLabel : std::uint8_t { UNSET, NATIVE, FR_LOAN, DE_LOAN, EN_LOAN };
enum class MixingRole : std::uint8_t {
  UNSET, MATRIX, BORROWING, CODE_SWITCH, AMBIGUOUS, NEUTRAL
};
enum class GateDecision : std::uint8_t { UNSET, PROCESS, ROUTE_OTHER };

inline std::string_view to_string(Lang v) {
  switch (v) {
    case Lang::LU: return "LU";
    case Lang::DE: return "DE";
    case Lang::FR: return "FR";
    case Lang::EN: return "EN";
    case Lang::OTHER: return "OTHER";
    case Lang::NEUTRAL: return "NEUTRAL";
  }
  return "OTHER";
}

inline std::optional<Lang> lang_from(std::string_view s) {
  if (s == "LU") return Lang::LU;
  if (s == "DE") return Lang::DE;
  if (s == "FR") return Lang::FR;
  if (s == "EN") return Lang::EN;
  if (s == "OTHER") return Lang::OTHER;
  if (s == "NEUTRAL") return Lang::NEUTRAL;
  return std::nullopt;
}

inline std::string_view to_string(LoanLabel v) {
  switch (v) {
    case LoanLabel::UNSET: return "UNSET";
    case LoanLabel::NATIVE: return "NATIVE";
    case LoanLabel::FR_LOAN: return "FR_LOAN";
    case LoanLabel::DE_LOAN: return "DE_LOAN";
    case LoanLabel::EN_LOAN: return "EN_LOAN";
  }
  return "UNSET";
}

inline std::optional<LoanLabel> loan_from(std::string_view s) {
  if (s == "UNSET") return LoanLabel::UNSET;
  if (s == "NATIVE") return LoanLabel::NATIVE;
  if (s == "FR_LOAN") return LoanLabel::FR_LOAN;
  if (s == "DE_LOAN") return LoanLabel::DE_LOAN;
  if (s == "EN_LOAN") return LoanLabel::EN_LOAN;
  return std::nullopt;
}

inline std::string_view to_string(MixingRole v) {
  switch (v) {
    case MixingRole::UNSET: return "UNSET";
    case MixingRole::MATRIX: return "MATRIX";
    case MixingRole::BORROWING: return "BORROWING";
    case MixingRole::CODE_SWITCH: return "CODE_SWITCH";
    case MixingRole::AMBIGUOUS: return "AMBIGUOUS";
    case MixingRole::NEUTRAL: return "NEUTRAL";
  }
  return "UNSET";
}

inline std::optional<MixingRole> role_from(std::string_view s) {
  if (s == "UNSET") return MixingRole::UNSET;
  if (s == "MATRIX") return MixingRole::MATRIX;
  if (s == "BORROWING") return MixingRole::BORROWING;
  if (s == "CODE_SWITCH") return MixingRole::CODE_SWITCH;
  if (s == "AMBIGUOUS") return MixingRole::AMBIGUOUS;
  if (s == "NEUTRAL") return MixingRole::NEUTRAL;
  return std::nullopt;
}

inline std::string_view to_string(GateDecision v) {
  switch (v) {
    case GateDecision::UNSET: return "UNSET";
    case GateDecision::PROCESS: return "PROCESS";
    case GateDecision::ROUTE_OTHER: return "ROUTE_OTHER";
  }
  return "UNSET";
}

inline std::optional<GateDecision> gate_from(std::string_view s) {
  if (s == "UNSET") return GateDecision::UNSET;
  if (s == "PROCESS") return GateDecision::PROCESS;
  if (s == "ROUTE_OTHER") return GateDecision::ROUTE_OTHER;
  return std::nullopt;
}

inline Lang donor_of(LoanLabel label) {
  switch (label) {
    case LoanLabel::FR_LOAN: return Lang::FR;
    case LoanLabel::DE_LOAN: return Lang::DE;
    case LoanLabel::EN_LOAN: return Lang::EN;
    default: return Lang::OTHER;
  }
}

inline LoanLabel loan_label_for(Lang donor) {
  switch (donor) {
    case Lang::FR: return LoanLabel::FR_LOAN;
    case Lang::DE: return LoanLabel::DE_LOAN;
    case Lang::EN: return LoanLabel::EN_LOAN;
    default: return LoanLabel::UNSET;
  }
}

// ---------------------------------------------------------------------------
// Calendar dates (ISO-8601, Gregorian, 1990..2100)

struct Date {
  int year = 0;
  int month = 0;
  int day = 0;

  auto operator<=>(const Date&) const = default;

  std::string iso() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
  }
  std::string month_key() const {
    char buf[12];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
    return buf;
  }
};

inline bool is_leap_year(int y) {
  return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

inline std::optional<Date> parse_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
    if (s[i] < '0' || s[i] > '9') return std::nullopt;
  auto num = [&](std::size_t b, std::size_t n) {
    int v = 0;
    for (std::size_t i = b; i < b + n; ++i) v = v * 10 + (s[i] - '0');
    return v;
  };
  Date d{num(0, 4), num(5, 2), num(8, 2)};
  if (d.month < 1 || d.month > 12) return std::nullopt;
  static constexpr std::array<int, 12> days = {31, 28, 31, 30, 31, 30,
                                               31, 31, 30, 31, 30, 31};
  int dim = days[d.month - 1];
  if (d.month == 2 && is_leap_year(d.year)) dim = 29;
  if (d.day < 1 || d.day > dim) return std::nullopt;
  if (d < Date{1990, 1, 1} || d > Date{2100, 12, 31}) return std::nullopt;
  return d;
}

// ---------------------------------------------------------------------------
// Corpus units

struct Token {
  std::string surface;
  std::string normalized;           // case-folded surface
  std::size_t begin = 0;            // byte offsets into the sentence text
  std::size_t end = 0;
  Lang lang = Lang::OTHER;
  LoanLabel loan = LoanLabel::UNSET;
  MixingRole role = MixingRole::UNSET;
  std::string pattern;              // matched adaptation pattern id, if any

  bool operator==(const Token&) const = default;
  bool neutral() const { return lang == Lang::NEUTRAL; }
};

struct Sentence {
  std::string text;
  std::vector<Token> tokens;
  Lang lang = Lang::OTHER;
  double posterior = 0.0;
  GateDecision gate = GateDecision::UNSET;

  bool operator==(const Sentence&) const = default;
};

struct Document {
  std::string id;
  Date date;
  std::string section;
  std::vector<Sentence> sentences;
  std::size_t token_count = 0;

  bool operator==(const Document&) const = default;
};

// ---------------------------------------------------------------------------
// Tokenization

namespace detail {

inline bool is_joiner_hyphen(char32_t cp) {
  return cp == U'-' || cp == 0x2010 || cp == 0x2011;
}

inline bool is_apostrophe(char32_t cp) { return cp == U'\'' || cp == 0x2019; }

inline bool url_shape(std::string_view chunk) {
  std::string low = text::fold_case(chunk);
  return low.rfind("http://", 0) == 0 || low.rfind("https://", 0) == 0 ||
         low.rfind("www.", 0) == 0;
}

inline bool email_shape(std::string_view chunk) {
  auto at = chunk.find('@');
  if (at == std::string_view::npos || at == 0 || at + 1 >= chunk.size())
    return false;
  if (chunk.find('@', at + 1) != std::string_view::npos) return false;
  auto dot = chunk.find('.', at + 1);
  return dot != std::string_view::npos && dot + 1 < chunk.size();
}

}  // namespace detail

/// True for tokens made entirely of punctuation, symbols, and digits,
/// and for URL/email shaped tokens. These never carry a language.
inline bool neutral_surface(std::string_view surface) {
  if (surface.empty()) return true;
  if (detail::url_shape(surface) || detail::email_shape(surface)) return true;
  for (std::size_t i = 0; i < surface.size();) {
    char32_t cp = text::decode(surface, i);
    if (!text::is_punct_or_symbol(cp) && !text::is_digit(cp)) return false;
  }
  return true;
}

// Splits sentence text into tokens with byte spans. Words are maximal runs
// of letters/digits; hyphens and apostrophes join when flanked by word
// characters (entre-temps, n'a). The LU articles d' and l' are split off as
// their own tokens. URL/email chunks come through whole.
inline std::vector<Token> tokenize(std::string_view sentence) {
  std::vector<Token> tokens;
  auto push = [&](std::size_t b, std::size_t e) {
    if (e <= b) return;
    Token t;
    t.surface.assign(sentence.substr(b, e - b));
    t.normalized = text::fold_case(t.surface);
    t.begin = b;
    t.end = e;
    t.lang = neutral_surface(t.surface) ? Lang::NEUTRAL : Lang::OTHER;
    if (t.lang == Lang::NEUTRAL) t.role = MixingRole::NEUTRAL;
    tokens.push_back(std::move(t));
  };

  std::size_t i = 0;
  const std::size_t n = sentence.size();
  while (i < n) {
    std::size_t cp_at = i;
    char32_t cp = text::decode(sentence, i);
    if (text::is_space(cp) || text::is_control(cp)) continue;

    // Maximal non-whitespace chunk.
    std::size_t chunk_begin = cp_at;
    std::size_t chunk_end = i;
    while (chunk_end < n) {
      std::size_t k = chunk_end;
      char32_t c2 = text::decode(sentence, k);
      if (text::is_space(c2) || text::is_control(c2)) break;
      chunk_end = k;
    }
    std::string_view chunk = sentence.substr(chunk_begin, chunk_end - chunk_begin);

    if (detail::url_shape(chunk) || detail::email_shape(chunk)) {
      push(chunk_begin, chunk_end);
      i = chunk_end;
      continue;
    }

    // Sub-tokenize the chunk.
    std::size_t p = chunk_begin;
    while (p < chunk_end) {
      std::size_t start = p;
      std::size_t q = p;
      char32_t c = text::decode(sentence, q);
      if (text::is_letter(c) || text::is_digit(c)) {
        // Word run with internal joiners.
        std::size_t word_end = q;
        std::size_t apos_split = std::string_view::npos;
        char32_t first = c;
        bool first_is_clitic = (text::to_lower(first) == U'd' ||
                                text::to_lower(first) == U'l');
        std::size_t seen = 1;
        while (word_end < chunk_end) {
          std::size_t k = word_end;
          char32_t c2 = text::decode(sentence, k);
          if (text::is_letter(c2) || text::is_digit(c2)) {
            word_end = k;
            ++seen;
            continue;
          }
          if (detail::is_joiner_hyphen(c2) || detail::is_apostrophe(c2)) {
            // Joiner only when followed by a word character.
            std::size_t k2 = k;
            if (k2 < chunk_end) {
              char32_t c3 = text::decode(sentence, k2);
              if (text::is_letter(c3) || text::is_digit(c3)) {
                if (detail::is_apostrophe(c2) && first_is_clitic && seen == 1 &&
                    apos_split == std::string_view::npos) {
                  apos_split = k;  // split after d' / l'
                }
                word_end = k;
                ++seen;
                continue;
              }
            }
          }
          break;
        }
        if (apos_split != std::string_view::npos) {
          push(start, apos_split);
          push(apos_split, word_end);
        } else {
          push(start, word_end);
        }
        p = word_end;
      } else {
        // Punctuation/symbol run.
        std::size_t punct_end = q;
        while (punct_end < chunk_end) {
          std::size_t k = punct_end;
          char32_t c2 = text::decode(sentence, k);
          if (text::is_letter(c2) || text::is_digit(c2)) break;
          punct_end = k;
        }
        push(start, punct_end);
        p = punct_end;
      }
    }
    i = chunk_end;
  }
  return tokens;
}

// ---------------------------------------------------------------------------
// Sentence splitting

namespace detail {

inline const text::StringMap<bool>& abbreviations() {
  static const text::StringMap<bool> set = [] {
    text::StringMap<bool> m;
    for (const char* a :
         {"bzw", "etc", "ca", "vgl", "resp", "dr", "prof", "nr", "st", "mme",
          "mlle", "abs", "art", "tel", "inkl", "evtl", "ggf", "bspw", "sog",
          "jh", "hr", "mio", "mrd", "num", "vol", "op", "no"})
      m[a] = true;
    return m;
  }();
  return set;
}

inline bool opens_sentence(char32_t cp) {
  return text::is_upper(cp) || cp == U'"' || cp == U'\'' || cp == 0x00AB ||
         cp == 0x201E || cp == 0x201C || cp == 0x2018 || cp == 0x2019 ||
         cp == 0x00BB;
}

// The word (letter run) immediately before byte position `pos`.
inline std::string word_before(std::string_view s, std::size_t pos) {
  std::vector<std::pair<std::size_t, char32_t>> cps;
  // Walk from a bounded window start to pos, keeping letter tail.
  std::size_t window = pos > 48 ? pos - 48 : 0;
  // Re-sync to a codepoint boundary.
  while (window > 0 && (static_cast<unsigned char>(s[window]) & 0xC0) == 0x80)
    --window;
  std::size_t i = window;
  while (i < pos) {
    std::size_t at = i;
    char32_t cp = text::decode(s, i);
    cps.emplace_back(at, cp);
  }
  std::string out;
  for (auto it = cps.rbegin(); it != cps.rend(); ++it) {
    if (text::is_letter(it->second)) {
      std::string tmp;
      text::append_utf8(tmp, it->second);
      out.insert(0, tmp);
    } else {
      break;
    }
  }
  return out;
}

}  // namespace detail

// Splits body text on sentence-final punctuation (. ! ?) followed by
// whitespace and an uppercase letter or quote. Single-letter words and a
// small abbreviation list guard against false splits ("z.B.", "Dr.").
inline std::vector<std::string> split_sentences(std::string_view body) {
  std::vector<std::string> out;
  std::size_t sent_begin = 0;
  std::size_t i = 0;
  const std::size_t n = body.size();

  auto flush = [&](std::size_t end) {
    std::string_view slice = text::trim(body.substr(sent_begin, end - sent_begin));
    if (!slice.empty()) out.emplace_back(slice);
    sent_begin = end;
  };

  while (i < n) {
    std::size_t at = i;
    char32_t cp = text::decode(body, i);
    if (cp != U'.' && cp != U'!' && cp != U'?') continue;

    // Swallow the whole terminator run plus closing quotes/brackets.
    std::size_t run_end = i;
    while (run_end < n) {
      std::size_t k = run_end;
      char32_t c2 = text::decode(body, k);
      if (c2 == U'.' || c2 == U'!' || c2 == U'?' || c2 == U')' || c2 == U']' ||
          c2 == U'"' || c2 == 0x00BB || c2 == 0x201C || c2 == 0x201D ||
          c2 == 0x2019) {
        run_end = k;
      } else {
        break;
      }
    }

    if (cp == U'.') {
      std::string before = detail::word_before(body, at);
      if (before.size() == 1 ||
          (text::decode_all(before).size() == 1 && !before.empty())) {
        i = run_end;
        continue;  // initial such as "z." or "B."
      }
      if (!before.empty() &&
          detail::abbreviations().contains(text::fold_case(before))) {
        i = run_end;
        continue;
      }
    }

    // Require whitespace then an uppercase/quote opener.
    std::size_t k = run_end;
    bool saw_space = false;
    char32_t next = 0;
    while (k < n) {
      char32_t c2 = text::decode(body, k);
      if (text::is_space(c2) || text::is_control(c2)) {
        saw_space = true;
        continue;
      }
      next = c2;
      break;
    }
    if (k >= n) {
      i = run_end;
      continue;  // terminator at end of text; final flush handles it
    }
    if (saw_space && detail::opens_sentence(next)) {
      flush(run_end);
      i = run_end;
    } else {
      i = run_end;
    }
  }
  flush(n);
  return out;
}

/// Segments raw body text into tokenized sentences.
inline std::vector<Sentence> segment(std::string_view body) {
  std::vector<Sentence> sentences;
  for (auto& st : split_sentences(body)) {
    Sentence s;
    s.tokens = tokenize(st);
    s.text = std::move(st);
    sentences.push_back(std::move(s));
  }
  return sentences;
}

// ---------------------------------------------------------------------------
// JSON serialization (annotated corpus format)

inline nlohmann::json to_json(const Token& t) {
  nlohmann::json j{{"surface", t.surface}, {"normalized", t.normalized},
                   {"begin", t.begin},     {"end", t.end},
                   {"lang", to_string(t.lang)}, {"loan", to_string(t.loan)},
                   {"role", to_string(t.role)}};
  if (!t.pattern.empty()) j["pattern"] = t.pattern;
  return j;
}

inline nlohmann::json to_json(const Sentence& s) {
  nlohmann::json toks = nlohmann::json::array();
  for (const auto& t : s.tokens) toks.push_back(to_json(t));
  return nlohmann::json{{"text", s.text},
                        {"lang", to_string(s.lang)},
                        {"posterior", s.posterior},
                        {"gate", to_string(s.gate)},
                        {"tokens", std::move(toks)}};
}

inline nlohmann::json to_json(const Document& d) {
  nlohmann::json sents = nlohmann::json::array();
  for (const auto& s : d.sentences) sents.push_back(to_json(s));
  return nlohmann::json{{"id", d.id},
                        {"date", d.date.iso()},
                        {"section", d.section},
                        {"token_count", d.token_count},
                        {"sentences", std::move(sents)}};
}

inline Document document_from_json(const nlohmann::json& j) {
  Document d;
  d.id = j.at("id").get<std::string>();
  auto date = parse_date(j.at("date").get<std::string>());
  if (!date) throw ParseError("invalid date '" + j.at("date").get<std::string>() + "'", 0);
  d.date = *date;
  d.section = j.value("section", std::string{});
  for (const auto& js : j.at("sentences")) {
    Sentence s;
    s.text = js.at("text").get<std::string>();
    s.lang = lang_from(js.at("lang").get<std::string>()).value_or(Lang::OTHER);
    s.posterior = js.at("posterior").get<double>();
    s.gate = gate_from(js.at("gate").get<std::string>()).value_or(GateDecision::UNSET);
    for (const auto& jt : js.at("tokens")) {
      Token t;
      t.surface = jt.at("surface").get<std::string>();
      t.normalized = jt.at("normalized").get<std::string>();
      t.begin = jt.at("begin").get<std::size_t>();
      t.end = jt.at("end").get<std::size_t>();
      t.lang = lang_from(jt.at("lang").get<std::string>()).value_or(Lang::OTHER);
      t.loan = loan_from(jt.at("loan").get<std::string>()).value_or(LoanLabel::UNSET);
      t.role = role_from(jt.at("role").get<std::string>()).value_or(MixingRole::UNSET);
      t.pattern = jt.value("pattern", std::string{});
      s.tokens.push_back(std::move(t));
    }
    d.sentences.push_back(std::move(s));
  }
  d.token_count = j.value("token_count", std::size_t{0});
  return d;
}

// ---------------------------------------------------------------------------
// Ingestion

enum class CorpusFormat { RawJsonl, AnnotatedJsonl };

struct IngestStats {
  std::uint64_t records = 0;
  std::uint64_t documents = 0;
  std::uint64_t errors = 0;
};

/// Builds a Document from one raw record {id, date, section, text}.
/// Returns nullopt (and logs) on malformed records.
inline std::optional<Document> document_from_record(std::string_view line,
                                                    IngestStats& stats) {
  ++stats.records;
  nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    ++stats.errors;
    log::warn("skipping malformed record " + std::to_string(stats.records));
    return std::nullopt;
  }
  if (!j.contains("id") || !j.contains("date") || !j.contains("text")) {
    ++stats.errors;
    log::warn("record " + std::to_string(stats.records) + " missing id/date/text");
    return std::nullopt;
  }
  auto date = parse_date(j["date"].is_string() ? j["date"].get<std::string>() : "");
  if (!date) {
    ++stats.errors;
    log::warn("record " + std::to_string(stats.records) + " has unparseable date");
    return std::nullopt;
  }
  Document d;
  d.id = j["id"].is_string() ? j["id"].get<std::string>() : j["id"].dump();
  d.date = *date;
  d.section = j.value("section", std::string{});
  d.sentences = segment(j["text"].get<std::string>());
  for (const auto& s : d.sentences) d.token_count += s.tokens.size();
  ++stats.documents;
  return d;
}

// Single-reader stream over a JSON-lines corpus file. Documents are
// immutable after construction and safe to hand to parallel workers.
class CorpusReader {
 public:
  CorpusReader(const std::string& path, CorpusFormat format)
      : in_(path), format_(format) {
    if (!in_) throw ConfigError("cannot open corpus file: " + path);
  }

  bool next(Document& doc) {
    std::string line;
    while (std::getline(in_, line)) {
      if (text::trim(line).empty()) continue;
      if (format_ == CorpusFormat::RawJsonl) {
        auto d = document_from_record(line, stats_);
        if (!d) continue;
        doc = std::move(*d);
        return true;
      }
      ++stats_.records;
      nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_discarded()) {
        ++stats_.errors;
        log::warn("skipping malformed annotated record " +
                  std::to_string(stats_.records));
        continue;
      }
      try {
        doc = document_from_json(j);
      } catch (const std::exception& e) {
        ++stats_.errors;
        log::warn(std::string("skipping annotated record: ") + e.what());
        continue;
      }
      ++stats_.documents;
      return true;
    }
    return false;
  }

  const IngestStats& stats() const { return stats_; }

 private:
  std::ifstream in_;
  CorpusFormat format_;
  IngestStats stats_;
};

}  // namespace borrowkit
