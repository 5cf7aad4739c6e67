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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "borrowkit/corpus.hpp"
#include "borrowkit/log.hpp"
#include "borrowkit/metrics.hpp"

// Grouping of per-document metrics by period and section, scope/combination
// summaries, and monthly series for diachronic tracking. The aggregator is a
// mergeable accumulator: partial aggregation over chunks followed by an
// in-order merge gives the same rows as one pass.

namespace borrowkit {

// ---------------------------------------------------------------------------
// Period schemes

struct PeriodScheme {
  struct Interval {
    std::string label;
    Date start;
    Date end;  // inclusive
  };
  std::string name;
  std::vector<Interval> intervals;

  void validate() const {
    for (std::size_t i = 0; i < intervals.size(); ++i) {
      if (intervals[i].end < intervals[i].start)
        throw ConfigError("period '" + intervals[i].label + "' ends before it starts");
      if (i > 0 && !(intervals[i - 1].end < intervals[i].start))
        throw ConfigError("period intervals overlap or are out of order");
    }
  }
};

/// The six socio-historical buckets used throughout the reports.
inline const PeriodScheme& six_period_scheme() {
  static const PeriodScheme scheme{
      "six",
      {{"1999-2007", {1999, 1, 1}, {2007, 12, 31}},
       {"2008-2011", {2008, 1, 1}, {2011, 12, 31}},
       {"2012-2019", {2012, 1, 1}, {2019, 12, 31}},
       {"2020", {2020, 1, 1}, {2020, 12, 31}},
       {"2021", {2021, 1, 1}, {2021, 12, 31}},
       {"2022-2025", {2022, 1, 1}, {2025, 12, 31}}}};
  return scheme;
}

/// Five-year analytical intervals for diachronic comparisons.
inline const PeriodScheme& five_year_scheme() {
  static const PeriodScheme scheme{
      "five",
      {{"1999-2004", {1999, 1, 1}, {2004, 12, 31}},
       {"2005-2009", {2005, 1, 1}, {2009, 12, 31}},
       {"2010-2014", {2010, 1, 1}, {2014, 12, 31}},
       {"2015-2019", {2015, 1, 1}, {2019, 12, 31}},
       {"2020-2025", {2020, 1, 1}, {2025, 12, 31}}}};
  return scheme;
}

inline const PeriodScheme* builtin_scheme(std::string_view name) {
  if (name == "six") return &six_period_scheme();
  if (name == "five") return &five_year_scheme();
  return nullptr;
}

inline constexpr std::string_view kOutOfSpanBucket = "OTHER";

/// Label of the interval containing `date`; out-of-span dates go to the
/// OTHER bucket with a warning.
inline std::string bucket(const PeriodScheme& scheme, const Date& date) {
  for (const auto& iv : scheme.intervals)
    if (!(date < iv.start) && !(iv.end < date)) return iv.label;
  log::warn("date " + date.iso() + " is outside scheme '" + scheme.name +
            "'; bucketed as OTHER");
  return std::string(kOutOfSpanBucket);
}

// ---------------------------------------------------------------------------
// Aggregation

enum class GroupBy { Period, Section, PeriodSection };

inline std::optional<GroupBy> group_by_from(std::string_view s) {
  if (s == "period") return GroupBy::Period;
  if (s == "section") return GroupBy::Section;
  if (s == "period-section" || s == "period_section" || s == "periodxsection")
    return GroupBy::PeriodSection;
  return std::nullopt;
}

// Group means are document-weighted by default (each document counts once);
// token weighting is available for consumers that want large articles to
// dominate.
enum class MeanWeight { Document, Token };

inline std::optional<MeanWeight> mean_weight_from(std::string_view s) {
  if (s == "document") return MeanWeight::Document;
  if (s == "token") return MeanWeight::Token;
  return std::nullopt;
}

// Everything the aggregator consumes per document.
struct DocumentStats {
  Date date;
  std::string section;
  std::uint64_t tokens = 0;
  MixingMetrics metrics;
  BorrowingDiagnostics diagnostics;
};

inline DocumentStats document_stats(const Document& doc, double entropy_base = 2.0,
                                    std::size_t inventory_k = 4) {
  DocumentStats s;
  s.date = doc.date;
  s.section = doc.section;
  s.tokens = doc.token_count;
  s.metrics = compute_mixing_metrics(doc, entropy_base, inventory_k);
  s.diagnostics = borrowing_diagnostics(doc);
  return s;
}

struct AggregateRow {
  std::string group;
  std::uint64_t articles = 0;
  std::uint64_t tokens = 0;
  double cmi_mean = 0, cmi_median = 0, cmi_iqr_lo = 0, cmi_iqr_hi = 0;
  double entropy_mean = 0;
  double m_index_mean = 0;
  double cs_rate_mean = 0;
  std::uint64_t borrowed_tokens = 0;
  double borrowing_share = 0;
  std::uint64_t donor_fr = 0, donor_de = 0, donor_en = 0;
  bool small_sample = false;
};

struct MonthlyRow {
  std::string month;  // YYYY-MM
  std::uint64_t articles = 0;
  std::uint64_t tokens = 0;
  double cs_rate_mean = 0;
  std::uint64_t borrowed_tokens = 0;
  double borrowing_share = 0;
  std::uint64_t donor_fr = 0, donor_de = 0, donor_en = 0;
};

struct ScopeRow {
  std::string scope;
  std::uint64_t articles = 0;
  double share = 0;
  double cmi_median = 0, cmi_iqr_lo = 0, cmi_iqr_hi = 0;
};

struct ComboRow {
  std::string combo;
  std::uint64_t articles = 0;
  double share_all = 0;
  double share_multilingual = 0;
};

namespace detail {

// Linear-interpolation quantile (type 7) over a sorted vector.
inline double quantile_sorted(const std::vector<double>& v, double q) {
  if (v.empty()) return 0.0;
  if (v.size() == 1) return v.front();
  double h = q * static_cast<double>(v.size() - 1);
  std::size_t lo = static_cast<std::size_t>(h);
  std::size_t hi = std::min(lo + 1, v.size() - 1);
  double frac = h - static_cast<double>(lo);
  return v[lo] + (v[hi] - v[lo]) * frac;
}

struct GroupAccumulator {
  // Per-document values in insertion order, so chunked merges reproduce the
  // single-pass result bit for bit.
  std::vector<double> cmi_values;
  double cmi_sum = 0, entropy_sum = 0, m_index_sum = 0, cs_rate_sum = 0;
  double cmi_wsum = 0, entropy_wsum = 0, m_index_wsum = 0, cs_rate_wsum = 0;
  std::uint64_t articles = 0, tokens = 0;
  std::uint64_t borrowed = 0, cs_tokens = 0, ambiguous = 0;
  std::uint64_t donor_fr = 0, donor_de = 0, donor_en = 0;

  void add(const DocumentStats& d) {
    ++articles;
    tokens += d.tokens;
    cmi_values.push_back(d.metrics.cmi);
    cmi_sum += d.metrics.cmi;
    entropy_sum += d.metrics.entropy;
    m_index_sum += d.metrics.m_index;
    cs_rate_sum += d.metrics.cs_rate;
    const double w = static_cast<double>(d.tokens);
    cmi_wsum += d.metrics.cmi * w;
    entropy_wsum += d.metrics.entropy * w;
    m_index_wsum += d.metrics.m_index * w;
    cs_rate_wsum += d.metrics.cs_rate * w;
    borrowed += d.diagnostics.borrowed_tokens;
    cs_tokens += d.diagnostics.code_switch_tokens;
    ambiguous += d.diagnostics.ambiguous_tokens;
    donor_fr += d.diagnostics.donor_fr;
    donor_de += d.diagnostics.donor_de;
    donor_en += d.diagnostics.donor_en;
  }

  void merge(const GroupAccumulator& o) {
    cmi_values.insert(cmi_values.end(), o.cmi_values.begin(), o.cmi_values.end());
    cmi_sum += o.cmi_sum;
    entropy_sum += o.entropy_sum;
    m_index_sum += o.m_index_sum;
    cs_rate_sum += o.cs_rate_sum;
    cmi_wsum += o.cmi_wsum;
    entropy_wsum += o.entropy_wsum;
    m_index_wsum += o.m_index_wsum;
    cs_rate_wsum += o.cs_rate_wsum;
    articles += o.articles;
    tokens += o.tokens;
    borrowed += o.borrowed;
    cs_tokens += o.cs_tokens;
    ambiguous += o.ambiguous;
    donor_fr += o.donor_fr;
    donor_de += o.donor_de;
    donor_en += o.donor_en;
  }
};

}  // namespace detail

class Aggregator {
 public:
  Aggregator(const PeriodScheme& scheme, GroupBy group_by,
             MeanWeight weighting = MeanWeight::Document,
             std::uint64_t small_sample_max = 3)
      : scheme_(&scheme),
        group_by_(group_by),
        weighting_(weighting),
        small_sample_max_(small_sample_max) {}

  void add(const DocumentStats& d) {
    groups_[group_key(d)].add(d);
    scopes_[std::string(to_string(d.metrics.scope))].add(d);
    ++combos_[d.metrics.combo_key];
    months_[d.date.month_key()].add(d);
    for (const auto& [pattern, count] : d.diagnostics.per_pattern)
      patterns_[pattern] += count;
    ++documents_;
    if (d.metrics.scope != MixScope::LU_ONLY) ++multilingual_;
  }

  /// Merges another aggregator built over the same scheme/grouping. Chunks
  /// must be merged in document order to reproduce the one-pass result.
  void merge(const Aggregator& o) {
    for (const auto& [k, acc] : o.groups_) groups_[k].merge(acc);
    for (const auto& [k, acc] : o.scopes_) scopes_[k].merge(acc);
    for (const auto& [k, n] : o.combos_) combos_[k] += n;
    for (const auto& [k, acc] : o.months_) months_[k].merge(acc);
    for (const auto& [k, n] : o.patterns_) patterns_[k] += n;
    documents_ += o.documents_;
    multilingual_ += o.multilingual_;
  }

  std::uint64_t documents() const { return documents_; }
  std::uint64_t multilingual_documents() const { return multilingual_; }
  const std::map<std::string, std::uint64_t>& pattern_counts() const {
    return patterns_;
  }

  std::vector<AggregateRow> rows() const {
    std::vector<AggregateRow> out;
    out.reserve(groups_.size());
    for (const auto& [key, acc] : groups_) {
      AggregateRow r;
      r.group = key;
      fill_common(r, acc);
      r.small_sample = acc.articles <= small_sample_max_;
      out.push_back(std::move(r));
    }
    return out;  // std::map keeps keys sorted
  }

  std::vector<ScopeRow> scope_rows() const {
    std::vector<ScopeRow> out;
    for (const auto& [key, acc] : scopes_) {
      ScopeRow r;
      r.scope = key;
      r.articles = acc.articles;
      r.share = documents_ ? static_cast<double>(acc.articles) /
                                 static_cast<double>(documents_)
                           : 0.0;
      std::vector<double> sorted = acc.cmi_values;
      std::sort(sorted.begin(), sorted.end());
      r.cmi_median = detail::quantile_sorted(sorted, 0.5);
      r.cmi_iqr_lo = detail::quantile_sorted(sorted, 0.25);
      r.cmi_iqr_hi = detail::quantile_sorted(sorted, 0.75);
      out.push_back(std::move(r));
    }
    return out;
  }

  std::vector<ComboRow> combo_rows() const {
    std::vector<ComboRow> out;
    for (const auto& [key, n] : combos_) {
      ComboRow r;
      r.combo = key;
      r.articles = n;
      r.share_all =
          documents_ ? static_cast<double>(n) / static_cast<double>(documents_) : 0.0;
      bool multilingual = key != "LU";
      r.share_multilingual =
          multilingual && multilingual_
              ? static_cast<double>(n) / static_cast<double>(multilingual_)
              : 0.0;
      out.push_back(std::move(r));
    }
    return out;
  }

  std::vector<MonthlyRow> monthly_rows() const {
    std::vector<MonthlyRow> out;
    for (const auto& [key, acc] : months_) {
      MonthlyRow r;
      r.month = key;
      r.articles = acc.articles;
      r.tokens = acc.tokens;
      r.cs_rate_mean =
          acc.articles ? acc.cs_rate_sum / static_cast<double>(acc.articles) : 0.0;
      r.borrowed_tokens = acc.borrowed;
      std::uint64_t denom = acc.borrowed + acc.cs_tokens + acc.ambiguous;
      r.borrowing_share =
          denom ? static_cast<double>(acc.borrowed) / static_cast<double>(denom) : 0.0;
      r.donor_fr = acc.donor_fr;
      r.donor_de = acc.donor_de;
      r.donor_en = acc.donor_en;
      out.push_back(std::move(r));
    }
    return out;  // month keys ascend strictly: YYYY-MM sorts lexicographically
  }

 private:
  std::string group_key(const DocumentStats& d) const {
    switch (group_by_) {
      case GroupBy::Period: return bucket(*scheme_, d.date);
      case GroupBy::Section: return d.section;
      case GroupBy::PeriodSection:
        return bucket(*scheme_, d.date) + "|" + d.section;
    }
    return {};
  }

  void fill_common(AggregateRow& r, const detail::GroupAccumulator& acc) const {
    r.articles = acc.articles;
    r.tokens = acc.tokens;
    if (weighting_ == MeanWeight::Token && acc.tokens > 0) {
      const double w = static_cast<double>(acc.tokens);
      r.cmi_mean = acc.cmi_wsum / w;
      r.entropy_mean = acc.entropy_wsum / w;
      r.m_index_mean = acc.m_index_wsum / w;
      r.cs_rate_mean = acc.cs_rate_wsum / w;
    } else if (acc.articles > 0) {
      const double n = static_cast<double>(acc.articles);
      r.cmi_mean = acc.cmi_sum / n;
      r.entropy_mean = acc.entropy_sum / n;
      r.m_index_mean = acc.m_index_sum / n;
      r.cs_rate_mean = acc.cs_rate_sum / n;
    }
    std::vector<double> sorted = acc.cmi_values;
    std::sort(sorted.begin(), sorted.end());
    r.cmi_median = detail::quantile_sorted(sorted, 0.5);
    r.cmi_iqr_lo = detail::quantile_sorted(sorted, 0.25);
    r.cmi_iqr_hi = detail::quantile_sorted(sorted, 0.75);
    r.borrowed_tokens = acc.borrowed;
    std::uint64_t denom = acc.borrowed + acc.cs_tokens + acc.ambiguous;
    r.borrowing_share =
        denom ? static_cast<double>(acc.borrowed) / static_cast<double>(denom) : 0.0;
    r.donor_fr = acc.donor_fr;
    r.donor_de = acc.donor_de;
    r.donor_en = acc.donor_en;
  }

  const PeriodScheme* scheme_;
  GroupBy group_by_;
  MeanWeight weighting_;
  std::uint64_t small_sample_max_;
  std::map<std::string, detail::GroupAccumulator> groups_;
  std::map<std::string, detail::GroupAccumulator> scopes_;
  std::map<std::string, std::uint64_t> combos_;
  std::map<std::string, detail::GroupAccumulator> months_;
  std::map<std::string, std::uint64_t> patterns_;
  std::uint64_t documents_ = 0;
  std::uint64_t multilingual_ = 0;
};

}  // namespace borrowkit
