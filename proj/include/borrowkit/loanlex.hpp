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

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "borrowkit/corpus.hpp"
#include "borrowkit/log.hpp"
#include "borrowkit/pattern.hpp"
#include "borrowkit/text.hpp"

// Loanword lexicon induction from a bilingual dictionary dump: POS filter,
// pattern matching against DE/FR/EN translations, parallel-borrowing
// resolution through chain lists, the shared-inheritance filter for DE
// lookalikes, and line-oriented human overrides. The result is a donor-tagged
// lexicon with bidirectional lookup indexes.

namespace borrowkit {

enum class Pos : std::uint8_t { NOUN, VERB, ADJ, OTHER };
enum class Provenance : std::uint8_t { AUTO, HUMAN_ADDED, HUMAN_EDITED };

inline std::string_view to_string(Pos p) {
  switch (p) {
    case Pos::NOUN: return "NOUN";
    case Pos::VERB: return "VERB";
    case Pos::ADJ: return "ADJ";
    case Pos::OTHER: return "OTHER";
  }
  return "OTHER";
}

inline std::optional<Pos> pos_from(std::string_view s) {
  if (s == "NOUN") return Pos::NOUN;
  if (s == "VERB") return Pos::VERB;
  if (s == "ADJ") return Pos::ADJ;
  if (s == "OTHER") return Pos::OTHER;
  return std::nullopt;
}

inline std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::AUTO: return "AUTO";
    case Provenance::HUMAN_ADDED: return "HUMAN_ADDED";
    case Provenance::HUMAN_EDITED: return "HUMAN_EDITED";
  }
  return "AUTO";
}

inline std::optional<Provenance> provenance_from(std::string_view s) {
  if (s == "AUTO") return Provenance::AUTO;
  if (s == "HUMAN_ADDED") return Provenance::HUMAN_ADDED;
  if (s == "HUMAN_EDITED") return Provenance::HUMAN_EDITED;
  return std::nullopt;
}

struct DictionaryEntry {
  std::string headword;
  Pos pos = Pos::OTHER;
  bool proper_noun = false;
  std::map<Lang, std::vector<std::string>> translations;  // DE, FR, EN
  std::vector<std::string> variants;
};

struct LexiconEntry {
  std::string lu_form;
  std::vector<std::string> variants;
  Lang donor = Lang::FR;
  std::string source_form;
  std::string pattern_id;
  Pos pos = Pos::OTHER;
  Provenance provenance = Provenance::AUTO;

  bool operator==(const LexiconEntry&) const = default;
};

// ---------------------------------------------------------------------------
// External word lists

// Known borrowing chains between the donor languages; membership decides
// whether an apparent two-donor match is really a secondary borrowing.
struct DonorChains {
  std::unordered_set<std::string> en_from_fr;
  std::unordered_set<std::string> fr_from_en;
  std::unordered_set<std::string> de_from_fr;
  std::unordered_set<std::string> de_from_en;

  static void load_list(const std::string& path, std::unordered_set<std::string>& into) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open chain list: " + path);
    std::string line;
    while (std::getline(in, line)) {
      std::string_view w = text::trim(line);
      if (w.empty() || w.front() == '#') continue;
      into.insert(text::fold_case(w));
    }
  }
};

// DE lemmas traceable to Old High German; DE-donor candidates whose source
// form appears here are reclassified as native.
struct InheritanceList {
  std::unordered_set<std::string> words;

  static InheritanceList load(const std::string& path) {
    InheritanceList list;
    DonorChains::load_list(path, list.words);
    return list;
  }
  bool contains(std::string_view word) const {
    return words.count(text::fold_case(word)) > 0;
  }
};

// ---------------------------------------------------------------------------
// Induction stages

/// POS and proper-noun filter: only nouns, verbs, and adjectives that are not
/// proper nouns enter the pipeline.
inline bool filter_candidate(const DictionaryEntry& entry) {
  if (entry.proper_noun) return false;
  return entry.pos == Pos::NOUN || entry.pos == Pos::VERB || entry.pos == Pos::ADJ;
}

struct PatternMatch {
  std::string pattern_id;
  std::string source_form;

  bool operator==(const PatternMatch&) const = default;
};

/// All pattern matches between the headword and its translations, per donor
/// language, ordered by registry rank then translation rank.
inline std::map<Lang, std::vector<PatternMatch>> match_entry(
    const DictionaryEntry& entry, const PatternIndex& index) {
  std::map<Lang, std::vector<PatternMatch>> out;
  auto candidates = index.lookup_recipient(entry.headword);
  for (Lang donor : {Lang::DE, Lang::FR, Lang::EN}) {
    auto it = entry.translations.find(donor);
    if (it == entry.translations.end()) continue;
    std::vector<PatternMatch> found;
    for (const AdaptationPattern* p : candidates) {
      if (!p->allows_donor(donor)) continue;
      for (const std::string& translation : it->second) {
        if (translation.empty()) continue;
        if (matches(*p, entry.headword, translation))
          found.push_back({p->id, translation});
      }
    }
    if (!found.empty()) out.emplace(donor, std::move(found));
  }
  return out;
}

enum class ResolutionKind : std::uint8_t { SINGLE, CHAINED, PARALLEL };

struct Resolution {
  ResolutionKind kind = ResolutionKind::PARALLEL;
  Lang donor = Lang::OTHER;  // the (original) donor for SINGLE / CHAINED
};

// Resolves multi-donor matches. Exactly one donor: SINGLE. Two donors where a
// chain list marks one matched form as itself borrowed from the other donor:
// CHAINED(original donor). Everything else is a parallel borrowing and is
// excluded.
inline Resolution resolve_parallel(
    const std::map<Lang, std::vector<PatternMatch>>& matches,
    const DonorChains& chains) {
  std::vector<Lang> donors;
  for (const auto& [lang, list] : matches)
    if (!list.empty()) donors.push_back(lang);
  if (donors.empty()) return {ResolutionKind::PARALLEL, Lang::OTHER};
  if (donors.size() == 1) return {ResolutionKind::SINGLE, donors.front()};
  if (donors.size() > 2) return {ResolutionKind::PARALLEL, Lang::OTHER};

  auto form = [&](Lang lang) {
    return text::fold_case(matches.at(lang).front().source_form);
  };
  Lang a = donors[0], b = donors[1];
  auto chained = [&](Lang derived, Lang origin) -> bool {
    if (derived == Lang::EN && origin == Lang::FR)
      return chains.en_from_fr.count(form(Lang::EN)) > 0;
    if (derived == Lang::FR && origin == Lang::EN)
      return chains.fr_from_en.count(form(Lang::FR)) > 0;
    if (derived == Lang::DE && origin == Lang::FR)
      return chains.de_from_fr.count(form(Lang::DE)) > 0;
    if (derived == Lang::DE && origin == Lang::EN)
      return chains.de_from_en.count(form(Lang::DE)) > 0;
    return false;
  };
  bool a_from_b = chained(a, b);
  bool b_from_a = chained(b, a);
  if (a_from_b == b_from_a) return {ResolutionKind::PARALLEL, Lang::OTHER};
  return {ResolutionKind::CHAINED, a_from_b ? b : a};
}

/// Shared-inheritance check for DE-donor candidates: true means the candidate
/// is reclassified as native (dropped from the lexicon).
inline bool inheritance_reclassifies(Lang donor, std::string_view source_form,
                                     const InheritanceList& inheritance) {
  return donor == Lang::DE && inheritance.contains(source_form);
}

// ---------------------------------------------------------------------------
// Induction report

struct InductionReport {
  std::uint64_t entries_read = 0;
  std::uint64_t candidates = 0;       // survived the POS / proper-noun filter
  std::uint64_t matched = 0;          // >= 1 donor with a pattern match
  std::uint64_t unmatched = 0;
  std::uint64_t emitted_auto = 0;     // matched - parallel - inheritance - dupes
  std::uint64_t parallel_excluded = 0;
  std::uint64_t chain_resolved = 0;
  std::uint64_t inheritance_reclassified = 0;
  std::uint64_t duplicates_skipped = 0;
  std::uint64_t alternate_matches = 0;
  std::uint64_t human_added = 0;
  std::uint64_t human_removed = 0;
  std::uint64_t variants_added = 0;
  std::uint64_t override_noops = 0;
  std::map<std::string, std::uint64_t> per_donor;  // final lexicon, by donor
  std::uint64_t entries_total = 0;
  std::uint64_t forms_total = 0;      // entries plus documented variants

  nlohmann::json to_json() const {
    return nlohmann::json{
        {"entries_read", entries_read},
        {"candidates", candidates},
        {"matched", matched},
        {"unmatched", unmatched},
        {"emitted_auto", emitted_auto},
        {"parallel_excluded", parallel_excluded},
        {"chain_resolved", chain_resolved},
        {"inheritance_reclassified", inheritance_reclassified},
        {"duplicates_skipped", duplicates_skipped},
        {"alternate_matches", alternate_matches},
        {"human_added", human_added},
        {"human_removed", human_removed},
        {"variants_added", variants_added},
        {"override_noops", override_noops},
        {"per_donor", per_donor},
        {"entries_total", entries_total},
        {"forms_total", forms_total}};
  }
};

// ---------------------------------------------------------------------------
// Human overrides: line-oriented commands, applied in file order.
//   ADD <lu_form> <donor> <source_form> <pattern_id> <pos> [variants|joined]
//   REMOVE <lu_form> <donor>
//   ADD_VARIANT <lu_form> <variant>
// Fields are tab-separated.

inline void apply_overrides(std::vector<LexiconEntry>& lexicon, std::istream& in,
                            InductionReport& report) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv = text::trim(line);
    if (sv.empty() || sv.front() == '#') continue;
    std::vector<std::string> cols;
    std::size_t pos = 0;
    std::string_view raw = line;
    while (true) {
      std::size_t tab = raw.find('\t', pos);
      cols.emplace_back(text::trim(raw.substr(
          pos, tab == std::string_view::npos ? std::string_view::npos : tab - pos)));
      if (tab == std::string_view::npos) break;
      pos = tab + 1;
    }
    const std::string& op = cols[0];
    if (op == "ADD") {
      if (cols.size() < 6) throw ParseError("ADD needs 5 arguments", lineno);
      auto donor = lang_from(cols[2]);
      auto pos_tag = pos_from(cols[5]);
      if (!donor || !pos_tag)
        throw ParseError("ADD has a bad donor or POS field", lineno);
      LexiconEntry e;
      e.lu_form = cols[1];
      e.donor = *donor;
      e.source_form = cols[3];
      e.pattern_id = cols[4];
      e.pos = *pos_tag;
      e.provenance = Provenance::HUMAN_ADDED;
      if (cols.size() > 6 && !cols[6].empty()) {
        std::stringstream vs(cols[6]);
        std::string v;
        while (std::getline(vs, v, '|'))
          if (!v.empty()) e.variants.push_back(v);
      }
      bool dup = false;
      for (const auto& existing : lexicon)
        if (existing.lu_form == e.lu_form && existing.donor == e.donor) dup = true;
      if (dup) {
        ++report.override_noops;
        log::warn("override ADD duplicates (" + e.lu_form + ", " +
                  std::string(to_string(e.donor)) + "); skipped");
        continue;
      }
      lexicon.push_back(std::move(e));
      ++report.human_added;
    } else if (op == "REMOVE") {
      if (cols.size() < 3) throw ParseError("REMOVE needs 2 arguments", lineno);
      auto donor = lang_from(cols[2]);
      if (!donor) throw ParseError("REMOVE has a bad donor field", lineno);
      bool removed = false;
      for (auto it = lexicon.begin(); it != lexicon.end(); ++it) {
        if (it->lu_form == cols[1] && it->donor == *donor) {
          lexicon.erase(it);
          removed = true;
          break;
        }
      }
      if (removed) {
        ++report.human_removed;
      } else {
        ++report.override_noops;
        log::warn("override REMOVE of missing entry (" + cols[1] + ", " +
                  cols[2] + "); no-op");
      }
    } else if (op == "ADD_VARIANT") {
      if (cols.size() < 3) throw ParseError("ADD_VARIANT needs 2 arguments", lineno);
      bool applied = false;
      for (auto& e : lexicon) {
        if (e.lu_form != cols[1]) continue;
        if (std::find(e.variants.begin(), e.variants.end(), cols[2]) ==
            e.variants.end()) {
          e.variants.push_back(cols[2]);
          if (e.provenance == Provenance::AUTO)
            e.provenance = Provenance::HUMAN_EDITED;
          ++report.variants_added;
        }
        applied = true;
      }
      if (!applied) {
        ++report.override_noops;
        log::warn("override ADD_VARIANT for missing entry " + cols[1] + "; no-op");
      }
    } else {
      throw ParseError("unknown override op '" + op + "'", lineno);
    }
  }
}

// ---------------------------------------------------------------------------
// Full pipeline

struct InductionResult {
  std::vector<LexiconEntry> lexicon;
  InductionReport report;
};

inline InductionResult induce(const std::vector<DictionaryEntry>& dictionary,
                              const PatternIndex& index,
                              const DonorChains& chains,
                              const InheritanceList& inheritance,
                              std::istream* overrides = nullptr) {
  InductionResult result;
  auto& report = result.report;
  std::set<std::pair<std::string, Lang>> seen;

  for (const auto& entry : dictionary) {
    ++report.entries_read;
    if (!filter_candidate(entry)) continue;
    ++report.candidates;

    auto matches_by_donor = match_entry(entry, index);
    if (matches_by_donor.empty()) {
      ++report.unmatched;
      continue;
    }
    ++report.matched;
    for (const auto& [donor, list] : matches_by_donor)
      report.alternate_matches += list.size() - 1;

    Resolution res = resolve_parallel(matches_by_donor, chains);
    if (res.kind == ResolutionKind::PARALLEL) {
      ++report.parallel_excluded;
      continue;
    }
    if (res.kind == ResolutionKind::CHAINED) ++report.chain_resolved;

    const PatternMatch& chosen = matches_by_donor.at(res.donor).front();
    if (inheritance_reclassifies(res.donor, chosen.source_form, inheritance)) {
      ++report.inheritance_reclassified;
      continue;
    }
    if (!seen.insert({entry.headword, res.donor}).second) {
      ++report.duplicates_skipped;
      log::warn("duplicate lexicon entry (" + entry.headword + ", " +
                std::string(to_string(res.donor)) + "); keeping first");
      continue;
    }
    LexiconEntry e;
    e.lu_form = entry.headword;
    e.variants = entry.variants;
    e.donor = res.donor;
    e.source_form = chosen.source_form;
    e.pattern_id = chosen.pattern_id;
    e.pos = entry.pos;
    e.provenance = Provenance::AUTO;
    result.lexicon.push_back(std::move(e));
    ++report.emitted_auto;
  }

  if (overrides) apply_overrides(result.lexicon, *overrides, report);

  for (const auto& e : result.lexicon) {
    ++report.per_donor[std::string(to_string(e.donor))];
    ++report.entries_total;
    report.forms_total += 1 + e.variants.size();
  }
  return result;
}

// ---------------------------------------------------------------------------
// Lexicon serialization: UTF-8 TSV with a fixed header.

inline constexpr std::string_view kLexiconHeader =
    "lu_form\tvariants\tdonor\tsource_form\tpattern_id\tpos\tprovenance";

inline std::string serialize_lexicon(const std::vector<LexiconEntry>& lexicon) {
  std::string out;
  out.append(kLexiconHeader);
  out.push_back('\n');
  for (const auto& e : lexicon) {
    out.append(e.lu_form);
    out.push_back('\t');
    for (std::size_t i = 0; i < e.variants.size(); ++i) {
      if (i) out.push_back('|');
      out.append(e.variants[i]);
    }
    out.push_back('\t');
    out.append(to_string(e.donor));
    out.push_back('\t');
    out.append(e.source_form);
    out.push_back('\t');
    out.append(e.pattern_id);
    out.push_back('\t');
    out.append(to_string(e.pos));
    out.push_back('\t');
    out.append(to_string(e.provenance));
    out.push_back('\n');
  }
  return out;
}

inline std::vector<LexiconEntry> parse_lexicon(std::istream& in) {
  std::vector<LexiconEntry> out;
  std::string line;
  std::size_t lineno = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv = line;
    if (text::trim(sv).empty() || sv.front() == '#') continue;
    if (!saw_header) {
      saw_header = true;
      if (sv.rfind("lu_form\t", 0) == 0) continue;
    }
    std::vector<std::string> cols;
    std::size_t pos = 0;
    while (true) {
      std::size_t tab = sv.find('\t', pos);
      cols.emplace_back(sv.substr(
          pos, tab == std::string_view::npos ? std::string_view::npos : tab - pos));
      if (tab == std::string_view::npos) break;
      pos = tab + 1;
    }
    if (cols.size() != 7) throw ParseError("lexicon row needs 7 columns", lineno);
    LexiconEntry e;
    e.lu_form = cols[0];
    if (!cols[1].empty()) {
      std::stringstream vs(cols[1]);
      std::string v;
      while (std::getline(vs, v, '|'))
        if (!v.empty()) e.variants.push_back(v);
    }
    auto donor = lang_from(cols[2]);
    auto pos_tag = pos_from(cols[5]);
    auto prov = provenance_from(cols[6]);
    if (!donor || !pos_tag || !prov)
      throw ParseError("lexicon row has a bad enum field", lineno);
    e.donor = *donor;
    e.source_form = cols[3];
    e.pattern_id = cols[4];
    e.pos = *pos_tag;
    e.provenance = *prov;
    out.push_back(std::move(e));
  }
  return out;
}

inline std::vector<LexiconEntry> load_lexicon_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open lexicon: " + path);
  return parse_lexicon(in);
}

// ---------------------------------------------------------------------------
// Bidirectional lookup index

// LU-side keys cover the lemma and every variant; donor-side keys cover the
// source forms. Keys are case-folded; lookups are exact matches on the
// normalized form.
class LexiconIndex {
 public:
  LexiconIndex() = default;

  explicit LexiconIndex(std::vector<LexiconEntry> entries)
      : entries_(std::move(entries)) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const auto& e = entries_[i];
      lu_side_[text::fold_case(e.lu_form)].push_back(i);
      for (const auto& v : e.variants) lu_side_[text::fold_case(v)].push_back(i);
      donor_side_[text::fold_case(e.source_form)].push_back(i);
    }
  }

  const std::vector<LexiconEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  std::vector<const LexiconEntry*> lookup_lu(std::string_view form) const {
    return find(lu_side_, text::fold_case(form));
  }
  std::vector<const LexiconEntry*> lookup_donor(std::string_view form) const {
    return find(donor_side_, text::fold_case(form));
  }

  /// First LU-side entry for an already case-folded form; nullptr if absent.
  const LexiconEntry* first_lu_normalized(std::string_view folded) const {
    auto it = lu_side_.find(folded);
    return it == lu_side_.end() ? nullptr : &entries_[it->second.front()];
  }
  /// First donor-side entry for an already case-folded form.
  const LexiconEntry* first_donor_normalized(std::string_view folded) const {
    auto it = donor_side_.find(folded);
    return it == donor_side_.end() ? nullptr : &entries_[it->second.front()];
  }

 private:
  std::vector<const LexiconEntry*> find(
      const text::StringMap<std::vector<std::size_t>>& map,
      const std::string& key) const {
    std::vector<const LexiconEntry*> out;
    if (auto it = map.find(key); it != map.end())
      for (std::size_t i : it->second) out.push_back(&entries_[i]);
    return out;
  }

  std::vector<LexiconEntry> entries_;
  text::StringMap<std::vector<std::size_t>> lu_side_;
  text::StringMap<std::vector<std::size_t>> donor_side_;
};

inline LexiconIndex build_index(std::vector<LexiconEntry> lexicon) {
  return LexiconIndex(std::move(lexicon));
}

// ---------------------------------------------------------------------------
// Dictionary dump loading (JSON-lines, one entry per line)

inline std::vector<DictionaryEntry> load_dictionary_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dictionary: " + path);
  std::vector<DictionaryEntry> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("headword")) {
      log::warn("skipping malformed dictionary record at line " +
                std::to_string(lineno));
      continue;
    }
    DictionaryEntry e;
    e.headword = j["headword"].get<std::string>();
    e.pos = pos_from(j.value("pos", std::string{"OTHER"})).value_or(Pos::OTHER);
    e.proper_noun = j.value("proper_noun", false);
    if (j.contains("translations") && j["translations"].is_object()) {
      for (auto& [key, val] : j["translations"].items()) {
        auto lang = lang_from(key);
        if (!lang || !val.is_array()) continue;
        std::vector<std::string> list;
        for (auto& t : val)
          if (t.is_string() && !t.get<std::string>().empty())
            list.push_back(t.get<std::string>());
        if (!list.empty()) e.translations[*lang] = std::move(list);
      }
    }
    if (j.contains("variants") && j["variants"].is_array())
      for (auto& v : j["variants"])
        if (v.is_string()) e.variants.push_back(v.get<std::string>());
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace borrowkit
