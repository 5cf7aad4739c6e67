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

#include <algorithm>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "borrowkit/corpus.hpp"
#include "borrowkit/log.hpp"
#include "borrowkit/text.hpp"

// Donor -> recipient adaptation patterns: a small affix-rewrite engine.
//
// A pattern is a list of edits applied to the donor word. The anchor suffix
// edit (longest donor affix) rewrites the word end, further suffix edits
// rewrite every occurrence inside the remaining stem (collection ->
// Kollektioun changes both c's), prefix edits rewrite the word start.
// Comparison is case-folded and accent-tolerant, except that prefix edits
// must reproduce the recipient affix exactly (E- for É>E). Words are handled
// as codepoint sequences so folding never breaks affix alignment.

namespace borrowkit {

enum class PatternClass : std::uint8_t { MORPHOLOGICAL, ORTHOGRAPHIC, LEXICAL };
enum class AffixPos : std::uint8_t { SUFFIX, PREFIX };

inline std::string_view to_string(PatternClass k) {
  switch (k) {
    case PatternClass::MORPHOLOGICAL: return "MORPHOLOGICAL";
    case PatternClass::ORTHOGRAPHIC: return "ORTHOGRAPHIC";
    case PatternClass::LEXICAL: return "LEXICAL";
  }
  return "MORPHOLOGICAL";
}

inline std::optional<PatternClass> pattern_class_from(std::string_view s) {
  if (s == "MORPHOLOGICAL") return PatternClass::MORPHOLOGICAL;
  if (s == "ORTHOGRAPHIC") return PatternClass::ORTHOGRAPHIC;
  if (s == "LEXICAL") return PatternClass::LEXICAL;
  return std::nullopt;
}

struct Edit {
  AffixPos pos = AffixPos::SUFFIX;
  std::string donor_affix;
  std::string recipient_affix;

  bool operator==(const Edit&) const = default;
};

struct AdaptationPattern {
  std::string id;
  std::vector<Edit> edits;  // empty <=> LEXICAL ("exact")
  PatternClass klass = PatternClass::MORPHOLOGICAL;
  std::vector<Lang> donor_langs;

  bool lexical() const { return edits.empty(); }
  bool allows_donor(Lang lang) const {
    return std::find(donor_langs.begin(), donor_langs.end(), lang) !=
           donor_langs.end();
  }
};

// ---------------------------------------------------------------------------
// Pattern DSL:  `exact`  |  edit ('+' edit)*
// edit: ['^'] donor '>' recipient     ('^' marks PREFIX, default SUFFIX)
//       ['^'] '-' donor               (deletion: empty recipient)

inline AdaptationPattern parse_pattern(std::string_view spec) {
  AdaptationPattern p;
  p.id.assign(spec);
  std::string_view body = text::trim(spec);
  if (body.empty()) throw ParseError("empty pattern spec", 0);
  if (body == "exact") {
    p.klass = PatternClass::LEXICAL;
    return p;
  }

  std::size_t pos = 0;
  while (pos <= body.size()) {
    std::size_t plus = body.find('+', pos);
    std::string_view item = body.substr(
        pos, plus == std::string_view::npos ? std::string_view::npos : plus - pos);
    if (item.empty()) throw ParseError("empty edit in pattern spec", pos);

    Edit e;
    std::size_t at = pos;
    if (item.front() == '^') {
      e.pos = AffixPos::PREFIX;
      item.remove_prefix(1);
      ++at;
      if (item.empty()) throw ParseError("dangling '^' in pattern spec", at);
    }
    if (item.front() == '-') {
      e.donor_affix.assign(item.substr(1));
      if (e.donor_affix.empty())
        throw ParseError("deletion edit needs a donor affix", at);
      if (e.donor_affix.find('>') != std::string::npos)
        throw ParseError("deletion edit cannot contain '>'", at);
    } else {
      std::size_t gt = item.find('>');
      if (gt == std::string_view::npos)
        throw ParseError("edit is missing '>'", at);
      e.donor_affix.assign(item.substr(0, gt));
      e.recipient_affix.assign(item.substr(gt + 1));
      if (e.donor_affix.empty() && e.recipient_affix.empty())
        throw ParseError("edit with empty donor and recipient", at);
    }
    if (e.donor_affix == e.recipient_affix)
      throw ParseError("vacuous edit '" + std::string(item) + "'", at);
    p.edits.push_back(std::move(e));

    if (plus == std::string_view::npos) break;
    pos = plus + 1;
    if (pos >= body.size()) throw ParseError("trailing '+' in pattern spec", plus);
  }
  return p;
}

// ---------------------------------------------------------------------------
// Matching

namespace pattern_detail {

using CpString = std::vector<char32_t>;

inline CpString cps(std::string_view s) { return text::decode_all(s); }

inline std::string encode(const CpString& w) {
  std::string out;
  out.reserve(w.size() * 2);
  for (char32_t cp : w) text::append_utf8(out, cp);
  return out;
}

inline bool eq_fold(char32_t a, char32_t b) {
  return text::to_lower(a) == text::to_lower(b);
}

inline bool eq_strip(char32_t a, char32_t b) {
  return text::strip_diacritic(text::to_lower(a)) ==
         text::strip_diacritic(text::to_lower(b));
}

template <typename Eq>
inline bool region_equal(const CpString& w, std::size_t at, const CpString& affix,
                         Eq eq) {
  if (at + affix.size() > w.size()) return false;
  for (std::size_t i = 0; i < affix.size(); ++i)
    if (!eq(w[at + i], affix[i])) return false;
  return true;
}

template <typename Eq>
inline bool ends_with(const CpString& w, const CpString& affix, Eq eq) {
  return affix.size() <= w.size() &&
         region_equal(w, w.size() - affix.size(), affix, eq);
}

inline bool strip_equal(const CpString& a, const CpString& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!eq_strip(a[i], b[i])) return false;
  return true;
}

// Splices `repl` over [at, at+len) in w.
inline void splice(CpString& w, std::size_t at, std::size_t len,
                   const CpString& repl) {
  CpString out;
  out.reserve(w.size() - len + repl.size());
  out.insert(out.end(), w.begin(), w.begin() + at);
  out.insert(out.end(), repl.begin(), repl.end());
  out.insert(out.end(), w.begin() + at + len, w.end());
  w = std::move(out);
}

// Index of the anchor suffix edit: longest donor affix, earliest on ties.
inline std::size_t anchor_suffix(const std::vector<Edit>& edits) {
  std::size_t best = edits.size();
  std::size_t best_len = 0;
  for (std::size_t i = 0; i < edits.size(); ++i) {
    if (edits[i].pos != AffixPos::SUFFIX) continue;
    std::size_t len = cps(edits[i].donor_affix).size();
    if (best == edits.size() || len > best_len) {
      best = i;
      best_len = len;
    }
  }
  return best;
}

}  // namespace pattern_detail

/// True iff applying every edit of `pattern` to donor_word yields lu_word.
/// Case-folded and accent-tolerant overall; prefix edits are case-sensitive
/// on the rewritten characters; LEXICAL is plain case-folded equality.
inline bool matches(const AdaptationPattern& pattern, std::string_view lu_word,
                    std::string_view donor_word) {
  namespace pd = pattern_detail;
  if (lu_word.empty() || donor_word.empty()) return false;
  if (pattern.lexical()) return text::equal_folded(lu_word, donor_word);

  pd::CpString w = pd::cps(donor_word);
  const pd::CpString lu = pd::cps(lu_word);
  const std::size_t anchor = pd::anchor_suffix(pattern.edits);
  std::size_t stem_len = w.size();  // codepoints before the rewritten suffix

  if (anchor != pattern.edits.size()) {
    const Edit& e = pattern.edits[anchor];
    pd::CpString donor = pd::cps(e.donor_affix);
    pd::CpString recip = pd::cps(e.recipient_affix);
    if (!pd::ends_with(w, donor, pd::eq_fold)) return false;
    std::size_t at = w.size() - donor.size();
    pd::splice(w, at, donor.size(), recip);
    stem_len = at;
  }

  for (std::size_t i = 0; i < pattern.edits.size(); ++i) {
    if (i == anchor) continue;
    const Edit& e = pattern.edits[i];
    pd::CpString donor = pd::cps(e.donor_affix);
    pd::CpString recip = pd::cps(e.recipient_affix);
    if (e.pos == AffixPos::PREFIX) {
      if (!pd::region_equal(w, 0, donor, pd::eq_fold)) return false;
      pd::splice(w, 0, donor.size(), recip);
      if (stem_len >= donor.size())
        stem_len += recip.size() - donor.size();
      // The rewritten prefix must appear in lu_word exactly.
      if (!pd::region_equal(lu, 0, recip, [](char32_t a, char32_t b) { return a == b; }))
        return false;
    } else {
      // Secondary suffix edit: rewrite every occurrence inside the stem.
      if (donor.empty()) return false;
      bool replaced = false;
      std::size_t at = 0;
      while (at + donor.size() <= stem_len) {
        if (pd::region_equal(w, at, donor, pd::eq_fold)) {
          pd::splice(w, at, donor.size(), recip);
          stem_len += recip.size() - donor.size();
          at += recip.size();
          replaced = true;
        } else {
          ++at;
        }
      }
      if (!replaced) return false;
    }
  }
  return pd::strip_equal(w, lu);
}

/// Inverts the pattern on lu_word: every donor form whose adaptation yields
/// lu_word. Empty when the recipient affixes are absent.
inline std::vector<std::string> donor_candidates(const AdaptationPattern& pattern,
                                                 std::string_view lu_word) {
  namespace pd = pattern_detail;
  std::vector<std::string> out;
  if (lu_word.empty()) return out;
  if (pattern.lexical()) {
    out.emplace_back(lu_word);
    return out;
  }

  pd::CpString w = pd::cps(lu_word);
  const std::size_t anchor = pd::anchor_suffix(pattern.edits);
  std::size_t stem_len = w.size();

  // Prefix edits first: lu must carry the recipient prefix exactly.
  for (std::size_t i = 0; i < pattern.edits.size(); ++i) {
    const Edit& e = pattern.edits[i];
    if (e.pos != AffixPos::PREFIX) continue;
    pd::CpString donor = pd::cps(e.donor_affix);
    pd::CpString recip = pd::cps(e.recipient_affix);
    if (!pd::region_equal(w, 0, recip, [](char32_t a, char32_t b) { return a == b; }))
      return out;
    pd::splice(w, 0, recip.size(), donor);
  }

  if (anchor != pattern.edits.size()) {
    const Edit& e = pattern.edits[anchor];
    pd::CpString donor = pd::cps(e.donor_affix);
    pd::CpString recip = pd::cps(e.recipient_affix);
    if (!pd::ends_with(w, recip, pd::eq_strip)) return out;
    std::size_t at = w.size() - recip.size();
    pd::splice(w, at, recip.size(), donor);
    stem_len = at;
  }

  // Secondary suffix edits: each rewritten site may originally have been the
  // donor affix; enumerate the non-empty subsets of occurrence sites.
  std::vector<pd::CpString> forms{w};
  for (std::size_t i = 0; i < pattern.edits.size(); ++i) {
    if (i == anchor || pattern.edits[i].pos == AffixPos::PREFIX) continue;
    const Edit& e = pattern.edits[i];
    pd::CpString donor = pd::cps(e.donor_affix);
    pd::CpString recip = pd::cps(e.recipient_affix);
    std::vector<pd::CpString> next;
    for (const auto& form : forms) {
      std::vector<std::size_t> sites;
      if (!recip.empty()) {
        std::size_t at = 0;
        while (at + recip.size() <= std::min(stem_len, form.size())) {
          if (pd::region_equal(form, at, recip, pd::eq_strip)) {
            sites.push_back(at);
            at += recip.size();
          } else {
            ++at;
          }
        }
      }
      if (sites.empty() || sites.size() > 10) continue;  // cap subset blowup
      for (std::size_t mask = 1; mask < (1u << sites.size()); ++mask) {
        pd::CpString candidate = form;
        for (std::size_t b = sites.size(); b-- > 0;) {
          if (mask & (1u << b))
            pd::splice(candidate, sites[b], recip.size(), donor);
        }
        next.push_back(std::move(candidate));
      }
    }
    forms = std::move(next);
  }

  std::set<std::string> seen;
  for (const auto& form : forms) {
    std::string enc = pd::encode(form);
    // Keep only true preimages.
    if (matches(pattern, lu_word, enc) && seen.insert(enc).second)
      out.push_back(std::move(enc));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Compiled affix index

// Affix-keyed candidate retrieval: for any word, the candidate list is a
// superset of the patterns that can match it (no false negatives). Keys are
// accent-stripped, case-folded affixes of the anchor edit; LEXICAL patterns
// and empty-recipient anchors land in an always-candidate bucket.
class PatternIndex {
 public:
  PatternIndex() = default;

  explicit PatternIndex(std::vector<AdaptationPattern> patterns)
      : patterns_(std::move(patterns)) {
    std::set<std::string> ids;
    for (const auto& p : patterns_)
      if (!ids.insert(p.id).second)
        throw ConfigError("duplicate pattern id: " + p.id);
    for (std::size_t i = 0; i < patterns_.size(); ++i) {
      const auto& p = patterns_[i];
      if (p.lexical()) {
        always_.push_back(i);
        donor_always_.push_back(i);
        continue;
      }
      std::size_t anchor = pattern_detail::anchor_suffix(p.edits);
      const Edit& e = anchor != p.edits.size() ? p.edits[anchor] : p.edits.front();
      add_key(recipient_suffix_, recipient_prefix_, always_, e,
              text::fold_strip(e.recipient_affix), i);
      add_key(donor_suffix_, donor_prefix_, donor_always_, e,
              text::fold_strip(e.donor_affix), i);
    }
    for (auto& [k, v] : recipient_suffix_) rec_suffix_lens_.insert(cps_len(k));
    for (auto& [k, v] : recipient_prefix_) rec_prefix_lens_.insert(cps_len(k));
    for (auto& [k, v] : donor_suffix_) don_suffix_lens_.insert(cps_len(k));
    for (auto& [k, v] : donor_prefix_) don_prefix_lens_.insert(cps_len(k));
  }

  const std::vector<AdaptationPattern>& patterns() const { return patterns_; }
  bool empty() const { return patterns_.empty(); }

  /// Patterns that may map some donor form onto lu_word (registry order).
  std::vector<const AdaptationPattern*> lookup_recipient(std::string_view lu_word) const {
    return lookup(lu_word, recipient_suffix_, recipient_prefix_, always_,
                  rec_suffix_lens_, rec_prefix_lens_);
  }

  /// Patterns that may map donor_word onto some LU form (registry order).
  std::vector<const AdaptationPattern*> lookup_donor(std::string_view donor_word) const {
    return lookup(donor_word, donor_suffix_, donor_prefix_, donor_always_,
                  don_suffix_lens_, don_prefix_lens_);
  }

 private:
  static std::size_t cps_len(std::string_view s) {
    return text::decode_all(s).size();
  }

  static void add_key(text::StringMap<std::vector<std::size_t>>& suffix_map,
                      text::StringMap<std::vector<std::size_t>>& prefix_map,
                      std::vector<std::size_t>& always, const Edit& e,
                      std::string key, std::size_t idx) {
    if (key.empty()) {
      always.push_back(idx);
      return;
    }
    auto& map = e.pos == AffixPos::SUFFIX ? suffix_map : prefix_map;
    map[std::move(key)].push_back(idx);
  }

  std::vector<const AdaptationPattern*> lookup(
      std::string_view word,
      const text::StringMap<std::vector<std::size_t>>& suffix_map,
      const text::StringMap<std::vector<std::size_t>>& prefix_map,
      const std::vector<std::size_t>& always,
      const std::set<std::size_t>& suffix_lens,
      const std::set<std::size_t>& prefix_lens) const {
    std::vector<std::size_t> hits(always);
    auto w = text::decode_all(text::fold_strip(word));
    std::string key;
    for (std::size_t len : suffix_lens) {
      if (len > w.size()) break;
      key.clear();
      for (std::size_t i = w.size() - len; i < w.size(); ++i)
        text::append_utf8(key, w[i]);
      if (auto it = suffix_map.find(key); it != suffix_map.end())
        hits.insert(hits.end(), it->second.begin(), it->second.end());
    }
    for (std::size_t len : prefix_lens) {
      if (len > w.size()) break;
      key.clear();
      for (std::size_t i = 0; i < len; ++i) text::append_utf8(key, w[i]);
      if (auto it = prefix_map.find(key); it != prefix_map.end())
        hits.insert(hits.end(), it->second.begin(), it->second.end());
    }
    std::sort(hits.begin(), hits.end());
    hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
    std::vector<const AdaptationPattern*> out;
    out.reserve(hits.size());
    for (std::size_t i : hits) out.push_back(&patterns_[i]);
    return out;
  }

  std::vector<AdaptationPattern> patterns_;
  text::StringMap<std::vector<std::size_t>> recipient_suffix_, recipient_prefix_;
  text::StringMap<std::vector<std::size_t>> donor_suffix_, donor_prefix_;
  std::vector<std::size_t> always_, donor_always_;
  std::set<std::size_t> rec_suffix_lens_, rec_prefix_lens_;
  std::set<std::size_t> don_suffix_lens_, don_prefix_lens_;
};

inline PatternIndex compile_index(std::vector<AdaptationPattern> patterns) {
  return PatternIndex(std::move(patterns));
}

// ---------------------------------------------------------------------------
// Registry file: TSV with columns id, spec, klass, donor_langs

inline std::vector<AdaptationPattern> load_registry(std::istream& in) {
  std::vector<AdaptationPattern> out;
  std::string line;
  bool header = true;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv = text::trim(line);
    if (sv.empty() || sv.front() == '#') continue;
    if (header) {
      header = false;
      if (sv.rfind("id\t", 0) == 0) continue;  // header row
    }
    std::vector<std::string_view> cols;
    std::size_t pos = 0;
    while (true) {
      std::size_t tab = sv.find('\t', pos);
      cols.push_back(sv.substr(pos, tab == std::string_view::npos
                                        ? std::string_view::npos
                                        : tab - pos));
      if (tab == std::string_view::npos) break;
      pos = tab + 1;
    }
    if (cols.size() != 4)
      throw ParseError("registry row needs 4 tab-separated columns", lineno);
    AdaptationPattern p = parse_pattern(cols[1]);
    p.id.assign(cols[0]);
    auto klass = pattern_class_from(cols[2]);
    if (!klass) throw ParseError("unknown pattern class '" + std::string(cols[2]) + "'", lineno);
    if ((*klass == PatternClass::LEXICAL) != p.lexical())
      throw ConfigError("pattern '" + p.id + "': LEXICAL class requires the exact spec");
    p.klass = *klass;
    std::string_view langs = cols[3];
    std::size_t lp = 0;
    while (lp <= langs.size() && !langs.empty()) {
      std::size_t bar = langs.find('|', lp);
      std::string_view code = langs.substr(
          lp, bar == std::string_view::npos ? std::string_view::npos : bar - lp);
      auto lang = lang_from(code);
      if (!lang || (*lang != Lang::DE && *lang != Lang::FR && *lang != Lang::EN))
        throw ParseError("bad donor language '" + std::string(code) + "'", lineno);
      p.donor_langs.push_back(*lang);
      if (bar == std::string_view::npos) break;
      lp = bar + 1;
    }
    if (p.donor_langs.empty())
      throw ParseError("pattern '" + p.id + "' has no donor languages", lineno);
    out.push_back(std::move(p));
  }
  return out;
}

inline std::vector<AdaptationPattern> load_registry_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open pattern registry: " + path);
  return load_registry(in);
}

}  // namespace borrowkit
