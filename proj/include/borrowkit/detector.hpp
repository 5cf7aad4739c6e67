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
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "borrowkit/corpus.hpp"
#include "borrowkit/lid.hpp"
#include "borrowkit/loanlex.hpp"
#include "borrowkit/log.hpp"

// Token-level borrowing detection inside gated LU sentences: loan labels from
// the lexicon, foreign-run extraction, and the borrowing / code-switch /
// ambiguous decision from run length and local LU density.

namespace borrowkit {

struct DetectorConfig {
  std::size_t window = 3;          // tokens each side for the LU ratio
  std::size_t max_borrow_run = 2;  // runs up to this length may be borrowings
  std::size_t min_cs_run = 4;      // runs at/above this length are code-switches
  double min_lu_ratio = 0.5;

  void validate() const {
    if (window < 1) throw ConfigError("detector window must be >= 1");
    if (!(1 <= max_borrow_run && max_borrow_run < min_cs_run))
      throw ConfigError("need 1 <= max_borrow_run < min_cs_run");
    if (!(0 < min_lu_ratio && min_lu_ratio <= 1))
      throw ConfigError("min_lu_ratio must be in (0, 1]");
  }
};

// Everything the annotation pipeline reads from the versioned config file.
struct PipelineConfig {
  GateConfig gate;
  DetectorConfig detector;
  double token_fallback = 0.4;  // token_lid sentence-language fallback

  void validate() const {
    gate.validate();
    detector.validate();
    if (!(0 <= token_fallback && token_fallback <= 1))
      throw ConfigError("token_fallback must be in [0, 1]");
  }
};

/// Reads `key = value` lines; unknown keys are errors so typos fail loudly.
inline PipelineConfig load_pipeline_config(std::istream& in) {
  PipelineConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv = text::trim(line);
    if (sv.empty() || sv.front() == '#') continue;
    auto eq = sv.find('=');
    if (eq == std::string_view::npos)
      throw ParseError("config line is missing '='", lineno);
    std::string key(text::trim(sv.substr(0, eq)));
    std::string value(text::trim(sv.substr(eq + 1)));
    try {
      if (key == "window") cfg.detector.window = std::stoul(value);
      else if (key == "max_borrow_run") cfg.detector.max_borrow_run = std::stoul(value);
      else if (key == "min_cs_run") cfg.detector.min_cs_run = std::stoul(value);
      else if (key == "min_lu_ratio") cfg.detector.min_lu_ratio = std::stod(value);
      else if (key == "base_threshold") cfg.gate.base_threshold = std::stod(value);
      else if (key == "max_threshold") cfg.gate.max_threshold = std::stod(value);
      else if (key == "short_len") cfg.gate.short_len = std::stoul(value);
      else if (key == "long_len") cfg.gate.long_len = std::stoul(value);
      else if (key == "token_fallback") cfg.token_fallback = std::stod(value);
      else throw ParseError("unknown config key '" + key + "'", lineno);
    } catch (const std::invalid_argument&) {
      throw ParseError("bad value for config key '" + key + "'", lineno);
    } catch (const std::out_of_range&) {
      throw ParseError("value out of range for config key '" + key + "'", lineno);
    }
  }
  cfg.validate();
  return cfg;
}

inline PipelineConfig load_pipeline_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return load_pipeline_config(in);
}

// ---------------------------------------------------------------------------
// Normalization

// Surface normalizer ahead of lexicon lookup. Must be idempotent.
class Normalizer {
 public:
  virtual ~Normalizer() = default;
  virtual std::string normalize(std::string_view surface) const = 0;
};

/// Case-folds; lexicon keys are case-folded so this covers the
/// surface/capitalized/lowercased trials in one lookup.
class DefaultNormalizer : public Normalizer {
 public:
  std::string normalize(std::string_view surface) const override {
    return text::fold_case(surface);
  }
};

// Lexicon trial: normalized form first, then the Eifeler-rule variant with
// the final n removed.
inline const LexiconEntry* lookup_lu_entry(const LexiconIndex& lexicon,
                                           std::string_view normalized) {
  if (const LexiconEntry* e = lexicon.first_lu_normalized(normalized)) return e;
  if (normalized.size() > 1 && normalized.back() == 'n')
    return lexicon.first_lu_normalized(normalized.substr(0, normalized.size() - 1));
  return nullptr;
}

// ---------------------------------------------------------------------------
// Loan labels

/// Assigns NATIVE or a donor loan label to every non-NEUTRAL token from the
/// LU-side lexicon lookup; records the matched pattern id.
inline void label_tokens(Sentence& sentence, const LexiconIndex& lexicon,
                         const Normalizer& normalizer) {
  for (Token& t : sentence.tokens) {
    if (t.neutral()) continue;
    const LexiconEntry* e =
        lookup_lu_entry(lexicon, normalizer.normalize(t.surface));
    if (e) {
      t.loan = loan_label_for(e->donor);
      t.pattern = e->pattern_id;
    } else {
      t.loan = LoanLabel::NATIVE;
    }
  }
}

// ---------------------------------------------------------------------------
// Foreign runs

struct ForeignRun {
  std::size_t begin = 0;   // token index of the first foreign token
  std::size_t end = 0;     // one past the last foreign token
  std::size_t length = 0;  // foreign tokens only; embedded NEUTRALs don't count
  Lang lang = Lang::OTHER;
};

inline bool foreign_token(const Token& t) {
  return t.lang != Lang::LU && t.lang != Lang::NEUTRAL;
}

/// Maximal spans of foreign-tagged tokens. NEUTRAL tokens inside a span are
/// transparent: they neither break it nor count toward its length. Span
/// language is the majority language, ties toward the first token.
inline std::vector<ForeignRun> foreign_runs(const Sentence& sentence) {
  std::vector<ForeignRun> runs;
  const auto& toks = sentence.tokens;
  std::size_t i = 0;
  while (i < toks.size()) {
    if (!foreign_token(toks[i])) {
      ++i;
      continue;
    }
    ForeignRun run;
    run.begin = i;
    std::vector<std::size_t> members;
    std::size_t j = i;
    std::size_t last_foreign = i;
    while (j < toks.size()) {
      if (foreign_token(toks[j])) {
        members.push_back(j);
        last_foreign = j;
        ++j;
      } else if (toks[j].neutral()) {
        ++j;  // transparent; only joins if another foreign token follows
      } else {
        break;
      }
    }
    run.end = last_foreign + 1;
    run.length = members.size();
    // Majority language, first token breaking ties.
    std::array<std::size_t, 6> votes{};
    for (std::size_t m : members) ++votes[static_cast<std::size_t>(toks[m].lang)];
    Lang best = toks[members.front()].lang;
    std::size_t best_votes = votes[static_cast<std::size_t>(best)];
    for (std::size_t m : members) {
      Lang lang = toks[m].lang;
      if (votes[static_cast<std::size_t>(lang)] > best_votes) {
        best = lang;
        best_votes = votes[static_cast<std::size_t>(lang)];
      }
    }
    run.lang = best;
    runs.push_back(run);
    i = j;
  }
  return runs;
}

/// Fraction of LU tokens among the non-NEUTRAL neighbors within +-window
/// positions of token_index (the token itself excluded). Empty neighborhoods
/// default to 1.0.
inline double local_lu_ratio(const Sentence& sentence, std::size_t token_index,
                             std::size_t window) {
  const auto& toks = sentence.tokens;
  std::size_t from = token_index > window ? token_index - window : 0;
  std::size_t to = std::min(toks.size(), token_index + window + 1);
  std::size_t total = 0, lu = 0;
  for (std::size_t j = from; j < to; ++j) {
    if (j == token_index || toks[j].neutral()) continue;
    ++total;
    if (toks[j].lang == Lang::LU) ++lu;
  }
  return total == 0 ? 1.0 : static_cast<double>(lu) / static_cast<double>(total);
}

// ---------------------------------------------------------------------------
// Mixing roles

// Per token: LU -> MATRIX, NEUTRAL -> NEUTRAL. Foreign tokens in a short run
// (<= max_borrow_run) become BORROWING when the neighborhood is LU-dominant
// and the token is lexicon-backed; runs of length >= min_cs_run become
// CODE_SWITCH wholesale; everything left is AMBIGUOUS.
inline void classify_mixing(Sentence& sentence, const DetectorConfig& config,
                            const LexiconIndex* lexicon = nullptr) {
  for (Token& t : sentence.tokens) {
    if (t.neutral()) {
      t.role = MixingRole::NEUTRAL;
    } else if (t.lang == Lang::LU) {
      t.role = MixingRole::MATRIX;
    } else {
      t.role = MixingRole::AMBIGUOUS;
    }
  }
  for (const ForeignRun& run : foreign_runs(sentence)) {
    if (run.length >= config.min_cs_run) {
      for (std::size_t j = run.begin; j < run.end; ++j)
        if (foreign_token(sentence.tokens[j]))
          sentence.tokens[j].role = MixingRole::CODE_SWITCH;
      continue;
    }
    if (run.length > config.max_borrow_run) continue;  // ambiguous band
    for (std::size_t j = run.begin; j < run.end; ++j) {
      Token& t = sentence.tokens[j];
      if (!foreign_token(t)) continue;
      bool lexicon_backed = t.loan == LoanLabel::FR_LOAN ||
                            t.loan == LoanLabel::DE_LOAN ||
                            t.loan == LoanLabel::EN_LOAN;
      if (!lexicon_backed && lexicon && !lexicon->empty())
        lexicon_backed = lexicon->first_donor_normalized(t.normalized) != nullptr ||
                         lookup_lu_entry(*lexicon, t.normalized) != nullptr;
      if (lexicon_backed &&
          local_lu_ratio(sentence, j, config.window) >= config.min_lu_ratio)
        t.role = MixingRole::BORROWING;
    }
  }
}

// ---------------------------------------------------------------------------
// Document pipeline

// Gates every sentence. PROCESS sentences get token-level language
// refinement, loan labels, and mixing roles; ROUTE_OTHER sentences get token
// language tags only (for the document-level metrics) and their roles stay
// UNSET (NEUTRAL tokens keep NEUTRAL).
inline void annotate_document(Document& doc, const CharNgramModel& model,
                              const PipelineConfig& config,
                              const LexiconIndex& lexicon,
                              const Normalizer& normalizer) {
  for (Sentence& s : doc.sentences) {
    try {
      gate(model, config.gate, s);
      for (Token& t : s.tokens)
        t.lang = token_lid(model, lexicon, t, s.lang, config.token_fallback);
      if (s.gate == GateDecision::PROCESS) {
        label_tokens(s, lexicon, normalizer);
        classify_mixing(s, config.detector, &lexicon);
      }
    } catch (const std::exception& e) {
      log::warn("sentence skipped in document " + doc.id + ": " + e.what());
    }
  }
}

}  // namespace borrowkit
