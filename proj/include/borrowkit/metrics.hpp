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
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>

#include "borrowkit/corpus.hpp"

// Per-document code-mixing indices (CMI, Shannon entropy, M-index, scope)
// and borrowing-first diagnostics (borrowed token/type rates, donor entropy,
// assimilation ratio). All functions here are pure.

namespace borrowkit {

// The four-language inventory, in fixed order.
inline constexpr std::array<Lang, 4> kInventory = {Lang::LU, Lang::DE, Lang::FR,
                                                   Lang::EN};

struct LangDistribution {
  std::array<std::uint64_t, 4> counts{};  // LU, DE, FR, EN
  std::uint64_t total = 0;                // non-NEUTRAL, non-OTHER tokens

  std::array<double, 4> proportions() const {
    std::array<double, 4> p{};
    if (total == 0) return p;
    for (std::size_t i = 0; i < 4; ++i)
      p[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
    return p;
  }
};

/// Token-level language distribution over {LU, DE, FR, EN}; NEUTRAL and
/// OTHER tokens are excluded from the denominator.
inline LangDistribution lang_distribution(const Document& doc) {
  LangDistribution d;
  for (const auto& s : doc.sentences) {
    for (const auto& t : s.tokens) {
      switch (t.lang) {
        case Lang::LU: ++d.counts[0]; break;
        case Lang::DE: ++d.counts[1]; break;
        case Lang::FR: ++d.counts[2]; break;
        case Lang::EN: ++d.counts[3]; break;
        default: continue;
      }
      ++d.total;
    }
  }
  return d;
}

/// Code-mixing index on the 0..100 scale: 100 * (N - max_lang) / N.
inline double cmi(const LangDistribution& d) {
  if (d.total == 0) return 0.0;
  std::uint64_t most = 0;
  for (auto c : d.counts) most = std::max(most, c);
  return 100.0 * static_cast<double>(d.total - most) / static_cast<double>(d.total);
}

/// Shannon entropy of the language proportions, in bits by default.
inline double entropy(const LangDistribution& d, double base = 2.0) {
  if (d.total == 0) return 0.0;
  double h = 0.0;
  for (auto c : d.counts) {
    if (c == 0) continue;
    double p = static_cast<double>(c) / static_cast<double>(d.total);
    h -= p * std::log(p);
  }
  return h / std::log(base);
}

/// Multilingualism index in [0,1] over a fixed k-language inventory:
/// (1 - sum p^2) / ((k-1) * sum p^2). 0 monolingual, 1 uniform.
inline double m_index(const LangDistribution& d, std::size_t k = 4) {
  if (d.total == 0 || k < 2) return 0.0;
  double s = 0.0;
  for (auto c : d.counts) {
    double p = static_cast<double>(c) / static_cast<double>(d.total);
    s += p * p;
  }
  if (s <= 0.0) return 0.0;
  return (1.0 - s) / (static_cast<double>(k - 1) * s);
}

enum class MixScope : std::uint8_t { LU_ONLY, LU_PLUS_1, LU_PLUS_2, LU_PLUS_3 };

inline std::string_view to_string(MixScope s) {
  switch (s) {
    case MixScope::LU_ONLY: return "LU_ONLY";
    case MixScope::LU_PLUS_1: return "LU_PLUS_1";
    case MixScope::LU_PLUS_2: return "LU_PLUS_2";
    case MixScope::LU_PLUS_3: return "LU_PLUS_3";
  }
  return "LU_ONLY";
}

struct ScopeCombo {
  MixScope scope = MixScope::LU_ONLY;
  std::string combo_key;       // '+'-joined sorted language codes present
  bool matrix_anomaly = false; // tokens present but none tagged LU
};

/// Document scope (number of co-present non-LU languages) and the sorted
/// language-combination key. A document with foreign tokens but no LU tokens
/// violates the matrix assumption and is flagged, not dropped.
inline ScopeCombo scope_and_combo(const LangDistribution& d) {
  ScopeCombo sc;
  std::size_t extra = 0;
  bool has_lu = d.counts[0] > 0;
  // Codes sorted alphabetically: DE < EN < FR < LU.
  std::vector<std::string_view> present;
  if (d.counts[1] > 0) present.push_back("DE");
  if (d.counts[3] > 0) present.push_back("EN");
  if (d.counts[2] > 0) present.push_back("FR");
  if (has_lu || d.total == 0) present.push_back("LU");
  extra = present.size() - ((has_lu || d.total == 0) ? 1 : 0);
  if (!has_lu && d.total > 0) {
    sc.matrix_anomaly = true;
    extra = present.size();
  }
  switch (std::min<std::size_t>(extra, 3)) {
    case 0: sc.scope = MixScope::LU_ONLY; break;
    case 1: sc.scope = MixScope::LU_PLUS_1; break;
    case 2: sc.scope = MixScope::LU_PLUS_2; break;
    default: sc.scope = MixScope::LU_PLUS_3; break;
  }
  for (std::size_t i = 0; i < present.size(); ++i) {
    if (i) sc.combo_key.push_back('+');
    sc.combo_key.append(present[i]);
  }
  return sc;
}

/// Fraction of non-NEUTRAL tokens tagged with any non-LU language.
inline double cs_rate(const Document& doc) {
  std::uint64_t total = 0, foreign = 0;
  for (const auto& s : doc.sentences) {
    for (const auto& t : s.tokens) {
      if (t.neutral()) continue;
      ++total;
      if (t.lang != Lang::LU) ++foreign;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(foreign) / static_cast<double>(total);
}

struct MixingMetrics {
  double cmi = 0.0;
  double entropy = 0.0;
  double m_index = 0.0;
  MixScope scope = MixScope::LU_ONLY;
  std::string combo_key = "LU";
  double cs_rate = 0.0;
  bool matrix_anomaly = false;
};

inline MixingMetrics compute_mixing_metrics(const Document& doc,
                                            double entropy_base = 2.0,
                                            std::size_t inventory_k = 4) {
  MixingMetrics m;
  LangDistribution d = lang_distribution(doc);
  m.cmi = cmi(d);
  m.entropy = entropy(d, entropy_base);
  m.m_index = m_index(d, inventory_k);
  ScopeCombo sc = scope_and_combo(d);
  m.scope = sc.scope;
  m.combo_key = std::move(sc.combo_key);
  m.matrix_anomaly = sc.matrix_anomaly;
  m.cs_rate = cs_rate(doc);
  return m;
}

// ---------------------------------------------------------------------------
// Borrowing-first diagnostics

struct BorrowingDiagnostics {
  std::uint64_t borrowed_tokens = 0;
  double borrowed_token_rate = 0.0;
  double borrowed_type_rate = 0.0;
  double donor_entropy = 0.0;       // bits, over the per-donor distribution
  double assimilation_ratio = 0.0;  // share with a non-LEXICAL pattern
  double borrowing_share = 0.0;     // borrowed / (borrowed + CS + ambiguous)
  std::uint64_t donor_fr = 0, donor_de = 0, donor_en = 0;
  std::uint64_t code_switch_tokens = 0;
  std::uint64_t ambiguous_tokens = 0;
  std::map<std::string, std::uint64_t> per_pattern;
};

// A borrowed token is one with a donor loan label, or a BORROWING-role token
// whose language tag names the donor. `is_lexical_pattern` decides which
// matched patterns count as unadapted; by default only the "exact" id.
inline BorrowingDiagnostics borrowing_diagnostics(
    const Document& doc,
    const std::function<bool(std::string_view)>& is_lexical_pattern =
        [](std::string_view id) { return id == "exact"; }) {
  BorrowingDiagnostics b;
  std::uint64_t non_neutral = 0;
  std::uint64_t adapted = 0;
  std::unordered_set<std::string> all_types, borrowed_types;

  for (const auto& s : doc.sentences) {
    for (const auto& t : s.tokens) {
      if (t.neutral()) continue;
      ++non_neutral;
      all_types.insert(t.normalized);
      if (t.role == MixingRole::CODE_SWITCH) ++b.code_switch_tokens;
      if (t.role == MixingRole::AMBIGUOUS) ++b.ambiguous_tokens;

      Lang donor = donor_of(t.loan);
      if (donor == Lang::OTHER && t.role == MixingRole::BORROWING &&
          (t.lang == Lang::FR || t.lang == Lang::DE || t.lang == Lang::EN))
        donor = t.lang;
      if (donor == Lang::OTHER) continue;

      ++b.borrowed_tokens;
      borrowed_types.insert(t.normalized);
      if (donor == Lang::FR) ++b.donor_fr;
      if (donor == Lang::DE) ++b.donor_de;
      if (donor == Lang::EN) ++b.donor_en;
      if (!t.pattern.empty()) {
        ++b.per_pattern[t.pattern];
        if (!is_lexical_pattern(t.pattern)) ++adapted;
      }
    }
  }

  if (non_neutral > 0)
    b.borrowed_token_rate =
        static_cast<double>(b.borrowed_tokens) / static_cast<double>(non_neutral);
  if (!all_types.empty())
    b.borrowed_type_rate = static_cast<double>(borrowed_types.size()) /
                           static_cast<double>(all_types.size());
  if (b.borrowed_tokens > 0) {
    for (std::uint64_t c : {b.donor_fr, b.donor_de, b.donor_en}) {
      if (c == 0) continue;
      double p = static_cast<double>(c) / static_cast<double>(b.borrowed_tokens);
      b.donor_entropy -= p * std::log2(p);
    }
    b.assimilation_ratio =
        static_cast<double>(adapted) / static_cast<double>(b.borrowed_tokens);
  }
  std::uint64_t mixing_total =
      b.borrowed_tokens + b.code_switch_tokens + b.ambiguous_tokens;
  if (mixing_total > 0)
    b.borrowing_share =
        static_cast<double>(b.borrowed_tokens) / static_cast<double>(mixing_total);
  return b;
}

}  // namespace borrowkit
