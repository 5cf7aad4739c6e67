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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "borrowkit/aggregate.hpp"
#include "borrowkit/log.hpp"
#include "borrowkit/text.hpp"

// Report emission: RFC-4180 CSV and JSON outputs, written atomically
// (temp file + rename), plus the per-run manifest. Identical inputs give
// byte-identical files.

namespace borrowkit {

inline constexpr std::string_view kAggregatesHeader =
    "group,articles,tokens,cmi_mean,cmi_median,cmi_iqr_lo,cmi_iqr_hi,"
    "entropy_mean,m_index_mean,cs_rate_mean,borrowed_tokens,borrowing_share,"
    "donor_FR,donor_DE,donor_EN,small_sample";

inline constexpr std::string_view kMonthlyHeader =
    "month,articles,tokens,cs_rate_mean,borrowed_tokens,borrowing_share,"
    "donor_FR,donor_DE,donor_EN";

inline constexpr std::string_view kScopeHeader =
    "scope,articles,share,cmi_median,cmi_iqr_lo,cmi_iqr_hi";

inline constexpr std::string_view kComboHeader =
    "combo,articles,share_all,share_multilingual";

namespace csv {

inline std::string field(std::string_view v) {
  bool needs_quote = v.find_first_of(",\"\n\r") != std::string_view::npos;
  if (!needs_quote) return std::string(v);
  std::string out = "\"";
  for (char c : v) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace csv

/// Writes content to path via a temp file and atomic rename, so a failed run
/// never leaves a partial file behind.
inline void atomic_write(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write file: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw ConfigError("short write to: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// CSV renderers

inline std::string aggregates_csv(const std::vector<AggregateRow>& rows) {
  std::string out(kAggregatesHeader);
  out.push_back('\n');
  for (const auto& r : rows) {
    out += csv::field(r.group) + "," + std::to_string(r.articles) + "," +
           std::to_string(r.tokens) + "," + csv::num(r.cmi_mean) + "," +
           csv::num(r.cmi_median) + "," + csv::num(r.cmi_iqr_lo) + "," +
           csv::num(r.cmi_iqr_hi) + "," + csv::num(r.entropy_mean) + "," +
           csv::num(r.m_index_mean) + "," + csv::num(r.cs_rate_mean) + "," +
           std::to_string(r.borrowed_tokens) + "," + csv::num(r.borrowing_share) +
           "," + std::to_string(r.donor_fr) + "," + std::to_string(r.donor_de) +
           "," + std::to_string(r.donor_en) + "," +
           (r.small_sample ? "true" : "false") + "\n";
  }
  return out;
}

inline std::string monthly_csv(const std::vector<MonthlyRow>& rows) {
  std::string out(kMonthlyHeader);
  out.push_back('\n');
  for (const auto& r : rows) {
    out += csv::field(r.month) + "," + std::to_string(r.articles) + "," +
           std::to_string(r.tokens) + "," + csv::num(r.cs_rate_mean) + "," +
           std::to_string(r.borrowed_tokens) + "," + csv::num(r.borrowing_share) +
           "," + std::to_string(r.donor_fr) + "," + std::to_string(r.donor_de) +
           "," + std::to_string(r.donor_en) + "\n";
  }
  return out;
}

inline std::string scope_csv(const std::vector<ScopeRow>& rows) {
  std::string out(kScopeHeader);
  out.push_back('\n');
  for (const auto& r : rows) {
    out += csv::field(r.scope) + "," + std::to_string(r.articles) + "," +
           csv::num(r.share) + "," + csv::num(r.cmi_median) + "," +
           csv::num(r.cmi_iqr_lo) + "," + csv::num(r.cmi_iqr_hi) + "\n";
  }
  return out;
}

inline std::string combo_csv(const std::vector<ComboRow>& rows) {
  std::string out(kComboHeader);
  out.push_back('\n');
  for (const auto& r : rows) {
    out += csv::field(r.combo) + "," + std::to_string(r.articles) + "," +
           csv::num(r.share_all) + "," + csv::num(r.share_multilingual) + "\n";
  }
  return out;
}

/// Two-column x,y plot-data series.
inline std::string series_csv(std::string_view x_name, std::string_view y_name,
                              const std::vector<std::pair<std::string, std::string>>& xy) {
  std::string out;
  out += csv::field(x_name);
  out.push_back(',');
  out += csv::field(y_name);
  out.push_back('\n');
  for (const auto& [x, y] : xy) {
    out += csv::field(x) + "," + csv::field(y) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON mirrors

inline nlohmann::json to_json(const AggregateRow& r) {
  return nlohmann::json{{"group", r.group},
                        {"articles", r.articles},
                        {"tokens", r.tokens},
                        {"cmi_mean", r.cmi_mean},
                        {"cmi_median", r.cmi_median},
                        {"cmi_iqr_lo", r.cmi_iqr_lo},
                        {"cmi_iqr_hi", r.cmi_iqr_hi},
                        {"entropy_mean", r.entropy_mean},
                        {"m_index_mean", r.m_index_mean},
                        {"cs_rate_mean", r.cs_rate_mean},
                        {"borrowed_tokens", r.borrowed_tokens},
                        {"borrowing_share", r.borrowing_share},
                        {"donor_FR", r.donor_fr},
                        {"donor_DE", r.donor_de},
                        {"donor_EN", r.donor_en},
                        {"small_sample", r.small_sample}};
}

inline nlohmann::json to_json(const MonthlyRow& r) {
  return nlohmann::json{{"month", r.month},
                        {"articles", r.articles},
                        {"tokens", r.tokens},
                        {"cs_rate_mean", r.cs_rate_mean},
                        {"borrowed_tokens", r.borrowed_tokens},
                        {"borrowing_share", r.borrowing_share},
                        {"donor_FR", r.donor_fr},
                        {"donor_DE", r.donor_de},
                        {"donor_EN", r.donor_en}};
}

// ---------------------------------------------------------------------------
// Report bundle

enum class ReportFormat { Csv, Json };

struct ReportInputs {
  std::string scheme_name;
  std::vector<AggregateRow> rows;
  std::vector<MonthlyRow> monthly;
  std::vector<ScopeRow> scopes;
  std::vector<ComboRow> combos;
  std::map<std::string, std::uint64_t> pattern_counts;
};

/// Writes the aggregate CSVs, the scope/combination summaries, the monthly
/// series, and the per-figure-family plot-data files into out_dir.
inline std::vector<std::filesystem::path> emit_reports(
    const ReportInputs& in, const std::filesystem::path& out_dir,
    ReportFormat format = ReportFormat::Csv) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& name, std::string_view content) {
    std::filesystem::path p = out_dir / name;
    atomic_write(p, content);
    written.push_back(p);
  };

  emit("aggregates_" + in.scheme_name + ".csv", aggregates_csv(in.rows));
  emit("monthly_series.csv", monthly_csv(in.monthly));
  emit("scope_summary.csv", scope_csv(in.scopes));
  emit("combo_summary.csv", combo_csv(in.combos));

  // Plot-data: x,y series per figure family.
  std::vector<std::pair<std::string, std::string>> xy;
  for (const auto& r : in.monthly) xy.emplace_back(r.month, std::to_string(r.articles));
  emit("series_article_volume.csv", series_csv("month", "articles", xy));
  xy.clear();
  for (const auto& r : in.monthly) xy.emplace_back(r.month, csv::num(r.cs_rate_mean));
  emit("series_cs_rate.csv", series_csv("month", "cs_rate", xy));
  xy.clear();
  for (const auto& r : in.monthly)
    xy.emplace_back(r.month, csv::num(r.borrowing_share));
  emit("series_borrowing_share.csv", series_csv("month", "borrowing_share", xy));
  xy.clear();
  for (const auto& [pattern, count] : in.pattern_counts)
    xy.emplace_back(pattern, std::to_string(count));
  emit("series_pattern_counts.csv", series_csv("pattern", "count", xy));

  if (format == ReportFormat::Json) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : in.rows) rows.push_back(to_json(r));
    emit("aggregates_" + in.scheme_name + ".json", rows.dump(2) + "\n");
    nlohmann::json months = nlohmann::json::array();
    for (const auto& r : in.monthly) months.push_back(to_json(r));
    emit("monthly_series.json", months.dump(2) + "\n");
  }
  return written;
}

// ---------------------------------------------------------------------------
// Run manifest

// One per output directory: tool version, content digests of every input,
// and the run timestamp (the only field allowed to differ between reruns).
struct RunManifest {
  std::string tool_version;
  std::string command;
  std::string timestamp;  // ISO-8601 UTC
  std::map<std::string, std::string> input_digests;
  std::map<std::string, std::string> parameters;

  nlohmann::json to_json() const {
    return nlohmann::json{{"tool_version", tool_version},
                          {"command", command},
                          {"timestamp", timestamp},
                          {"inputs", input_digests},
                          {"parameters", parameters}};
  }
};

inline std::string digest_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot digest input: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(text::fnv1a64(ss.str())));
  return std::string("fnv1a64:") + buf;
}

inline void write_manifest(const RunManifest& m, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  atomic_write(out_dir / "manifest.json", m.to_json().dump(2) + "\n");
}

}  // namespace borrowkit
