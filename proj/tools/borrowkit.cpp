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

// borrowkit CLI: staged batch pipeline over files.
//   induce    build the donor-tagged loanword lexicon from a dictionary dump
//   train-lid train the character n-gram language model
//   annotate  gate + token LID + borrowing detection over a corpus
//   report    per-document metrics, grouped aggregates, monthly series
//
// Exit codes: 0 success, 2 usage/configuration error, 1 internal failure.

#include <algorithm>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "borrowkit/aggregate.hpp"
#include "borrowkit/corpus.hpp"
#include "borrowkit/detector.hpp"
#include "borrowkit/lid.hpp"
#include "borrowkit/loanlex.hpp"
#include "borrowkit/metrics.hpp"
#include "borrowkit/pattern.hpp"
#include "borrowkit/report.hpp"
#include "borrowkit/version.hpp"

namespace bk = borrowkit;
namespace fs = std::filesystem;

namespace {

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void require_readable(const std::string& path) {
  if (!fs::exists(path)) throw bk::ConfigError("input file not found: " + path);
}

bk::RunManifest make_manifest(const std::string& command,
                              const std::vector<std::string>& inputs,
                              std::map<std::string, std::string> parameters) {
  bk::RunManifest m;
  m.tool_version = bk::kVersion;
  m.command = command;
  m.timestamp = utc_timestamp();
  m.parameters = std::move(parameters);
  for (const auto& p : inputs) m.input_digests[p] = bk::digest_file(p);
  return m;
}

std::vector<std::pair<std::string, bk::Lang>> load_labeled_sentences(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw bk::ConfigError("cannot open training file: " + path);
  std::vector<std::pair<std::string, bk::Lang>> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (bk::text::trim(line).empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("text") || !j.contains("lang")) {
      bk::log::warn("skipping malformed training record at line " +
                    std::to_string(lineno));
      continue;
    }
    auto lang = bk::lang_from(j["lang"].get<std::string>());
    if (!lang) {
      bk::log::warn("skipping unknown language at line " + std::to_string(lineno));
      continue;
    }
    out.emplace_back(j["text"].get<std::string>(), *lang);
  }
  return out;
}

// ---------------------------------------------------------------------------

int cmd_induce(const std::string& dict, const std::string& patterns,
               const std::string& chains_en_fr, const std::string& chains_fr_en,
               const std::string& chains_de_fr, const std::string& chains_de_en,
               const std::string& inheritance, const std::string& overrides,
               const std::string& out_dir) {
  for (const auto& p : {dict, patterns, chains_en_fr, chains_fr_en, chains_de_fr,
                        chains_de_en, inheritance})
    require_readable(p);
  if (!overrides.empty()) require_readable(overrides);

  bk::PatternIndex index(bk::load_registry_file(patterns));
  bk::DonorChains chains;
  bk::DonorChains::load_list(chains_en_fr, chains.en_from_fr);
  bk::DonorChains::load_list(chains_fr_en, chains.fr_from_en);
  bk::DonorChains::load_list(chains_de_fr, chains.de_from_fr);
  bk::DonorChains::load_list(chains_de_en, chains.de_from_en);
  bk::InheritanceList inherit = bk::InheritanceList::load(inheritance);
  auto dictionary = bk::load_dictionary_file(dict);

  bk::InductionResult result;
  if (overrides.empty()) {
    result = bk::induce(dictionary, index, chains, inherit, nullptr);
  } else {
    std::ifstream ov(overrides);
    result = bk::induce(dictionary, index, chains, inherit, &ov);
  }

  fs::create_directories(out_dir);
  bk::atomic_write(fs::path(out_dir) / "lexicon.tsv",
                   bk::serialize_lexicon(result.lexicon));
  bk::atomic_write(fs::path(out_dir) / "induction_report.json",
                   result.report.to_json().dump(2) + "\n");

  std::vector<std::string> inputs{dict,         patterns,    chains_en_fr,
                                  chains_fr_en, chains_de_fr, chains_de_en,
                                  inheritance};
  if (!overrides.empty()) inputs.push_back(overrides);
  bk::write_manifest(make_manifest("induce", inputs, {}), out_dir);

  std::cout << "lexicon entries: " << result.report.entries_total << " (";
  bool first = true;
  for (const auto& [donor, n] : result.report.per_donor) {
    if (!first) std::cout << ", ";
    std::cout << donor << " " << n;
    first = false;
  }
  std::cout << ")\n";
  return 0;
}

// ---------------------------------------------------------------------------

int cmd_train_lid(const std::string& train_file, const std::string& out_dir,
                  unsigned seed, double holdout) {
  require_readable(train_file);
  auto sentences = load_labeled_sentences(train_file);

  // Held-out accuracy from a split model; the released model uses all data.
  // The split is stratified per class and never drops a class below the
  // training minimum.
  std::mt19937 rng(seed);
  std::map<bk::Lang, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < sentences.size(); ++i)
    by_class[sentences[i].second].push_back(i);
  std::vector<std::pair<std::string, bk::Lang>> train_part, held_part;
  for (auto& [lang, indices] : by_class) {
    std::shuffle(indices.begin(), indices.end(), rng);
    std::size_t want = static_cast<std::size_t>(
        static_cast<double>(indices.size()) * holdout);
    std::size_t spare =
        indices.size() > bk::CharNgramModel::kMinSentencesPerClass
            ? indices.size() - bk::CharNgramModel::kMinSentencesPerClass
            : 0;
    std::size_t held = std::min(want, spare);
    for (std::size_t i = 0; i < indices.size(); ++i)
      (i < held ? held_part : train_part).push_back(sentences[indices[i]]);
  }

  double accuracy = 0.0;
  if (!held_part.empty()) {
    try {
      auto split_model = bk::CharNgramModel::train(train_part);
      std::size_t ok = 0;
      for (const auto& [txt, lang] : held_part)
        if (split_model.classify(txt).lang == lang) ++ok;
      accuracy = static_cast<double>(ok) / static_cast<double>(held_part.size());
    } catch (const bk::ConfigError&) {
      bk::log::warn("split model not trainable; reporting accuracy on all data");
    }
  }

  auto model = bk::CharNgramModel::train(sentences);
  fs::create_directories(out_dir);
  fs::path model_path = fs::path(out_dir) / "lid_model.bklid";
  bk::atomic_write(model_path, model.serialize());
  bk::write_manifest(make_manifest("train-lid", {train_file},
                                   {{"seed", std::to_string(seed)},
                                    {"holdout", std::to_string(holdout)}}),
                     out_dir);
  std::cout << "model: " << model_path.string() << "\n";
  std::cout << "held-out accuracy: " << accuracy << " (n=" << held_part.size()
            << ", seed=" << seed << ")\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct AnnotateSummary {
  std::uint64_t documents = 0;
  std::uint64_t sentences_process = 0;
  std::uint64_t sentences_route_other = 0;
  std::uint64_t tokens = 0;
  std::uint64_t errors = 0;
  std::map<std::string, std::uint64_t> labels;
  std::map<std::string, std::uint64_t> roles;

  void absorb(const bk::Document& doc) {
    ++documents;
    tokens += doc.token_count;
    for (const auto& s : doc.sentences) {
      if (s.gate == bk::GateDecision::PROCESS) ++sentences_process;
      else ++sentences_route_other;
      for (const auto& t : s.tokens) {
        ++labels[std::string(bk::to_string(t.loan))];
        ++roles[std::string(bk::to_string(t.role))];
      }
    }
  }

  nlohmann::json to_json() const {
    return nlohmann::json{{"documents", documents},
                          {"sentences_process", sentences_process},
                          {"sentences_route_other", sentences_route_other},
                          {"tokens", tokens},
                          {"errors", errors},
                          {"labels", labels},
                          {"roles", roles}};
  }
};

int cmd_annotate(const std::string& corpus, const std::string& model_path,
                 const std::string& lexicon_path, const std::string& config_path,
                 const std::string& out_dir, unsigned jobs) {
  require_readable(corpus);
  require_readable(model_path);
  require_readable(lexicon_path);
  if (!config_path.empty()) require_readable(config_path);

  auto model = bk::CharNgramModel::load(model_path);
  bk::LexiconIndex lexicon(bk::load_lexicon_file(lexicon_path));
  bk::PipelineConfig config;
  if (!config_path.empty()) config = bk::load_pipeline_config_file(config_path);
  bk::DefaultNormalizer normalizer;

  fs::create_directories(out_dir);
  fs::path out_path = fs::path(out_dir) / "annotated.jsonl";
  fs::path tmp_path = out_path;
  tmp_path += ".tmp";
  std::ofstream out(tmp_path, std::ios::binary | std::ios::trunc);
  if (!out) throw bk::ConfigError("cannot write: " + tmp_path.string());

  bk::CorpusReader reader(corpus, bk::CorpusFormat::RawJsonl);
  AnnotateSummary summary;
  const std::size_t batch_size = jobs <= 1 ? 256 : jobs * 64;

  std::vector<bk::Document> batch;
  batch.reserve(batch_size);
  std::vector<std::string> encoded;
  bool more = true;
  while (more) {
    batch.clear();
    bk::Document doc;
    while (batch.size() < batch_size && (more = reader.next(doc)))
      batch.push_back(std::move(doc));
    if (batch.empty()) break;

    encoded.assign(batch.size(), {});
    auto work = [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        bk::annotate_document(batch[i], model, config, lexicon, normalizer);
        encoded[i] = bk::to_json(batch[i]).dump();
        encoded[i].push_back('\n');
      }
    };
    if (jobs <= 1) {
      work(0, batch.size());
    } else {
      std::vector<std::thread> pool;
      std::size_t stride = (batch.size() + jobs - 1) / jobs;
      for (unsigned w = 0; w < jobs; ++w) {
        std::size_t b = w * stride;
        std::size_t e = std::min(batch.size(), b + stride);
        if (b < e) pool.emplace_back(work, b, e);
      }
      for (auto& t : pool) t.join();
    }
    // Outputs are written in input order regardless of completion order.
    for (std::size_t i = 0; i < batch.size(); ++i) {
      out << encoded[i];
      summary.absorb(batch[i]);
    }
  }
  out.close();
  fs::rename(tmp_path, out_path);
  summary.errors = reader.stats().errors;

  bk::atomic_write(fs::path(out_dir) / "annotate_summary.json",
                   summary.to_json().dump(2) + "\n");
  std::vector<std::string> inputs{corpus, model_path, lexicon_path};
  if (!config_path.empty()) inputs.push_back(config_path);
  bk::write_manifest(
      make_manifest("annotate", inputs, {{"jobs", std::to_string(jobs)}}), out_dir);

  std::cout << summary.to_json().dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

int cmd_report(const std::string& annotated, const std::string& scheme_name,
               const std::string& group_by_name, const std::string& out_dir,
               const std::string& format_name, const std::string& weighting_name,
               double entropy_base, unsigned inventory_k) {
  require_readable(annotated);
  const bk::PeriodScheme* scheme = bk::builtin_scheme(scheme_name);
  if (!scheme)
    throw bk::ConfigError("unknown scheme '" + scheme_name +
                          "'; built-ins: six, five");
  auto group_by = bk::group_by_from(group_by_name);
  if (!group_by)
    throw bk::ConfigError("unknown group-by '" + group_by_name +
                          "'; use period, section, or period-section");
  auto weighting = bk::mean_weight_from(weighting_name);
  if (!weighting)
    throw bk::ConfigError("unknown weighting '" + weighting_name +
                          "'; use document or token");
  bk::ReportFormat format = bk::ReportFormat::Csv;
  if (format_name == "json") format = bk::ReportFormat::Json;
  else if (format_name != "csv")
    throw bk::ConfigError("unknown format '" + format_name + "'; use csv or json");
  if (!(entropy_base > 1.0))
    throw bk::ConfigError("entropy base must be greater than 1");
  if (inventory_k < 2)
    throw bk::ConfigError("language inventory size must be at least 2");

  bk::Aggregator agg(*scheme, *group_by, *weighting);
  bk::CorpusReader reader(annotated, bk::CorpusFormat::AnnotatedJsonl);
  bk::Document doc;
  while (reader.next(doc))
    agg.add(bk::document_stats(doc, entropy_base, inventory_k));

  bk::ReportInputs inputs;
  inputs.scheme_name = scheme->name;
  inputs.rows = agg.rows();
  inputs.monthly = agg.monthly_rows();
  inputs.scopes = agg.scope_rows();
  inputs.combos = agg.combo_rows();
  inputs.pattern_counts = agg.pattern_counts();
  auto written = bk::emit_reports(inputs, out_dir, format);

  bk::write_manifest(make_manifest("report", {annotated},
                                   {{"scheme", scheme_name},
                                    {"group_by", group_by_name},
                                    {"format", format_name},
                                    {"weighting", weighting_name},
                                    {"entropy_base", std::to_string(entropy_base)},
                                    {"m_index_k", std::to_string(inventory_k)}}),
                     out_dir);
  std::cout << "documents: " << agg.documents() << ", groups: " << inputs.rows.size()
            << ", files: " << written.size() + 1 << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"borrowing-aware multilingual text analysis toolkit"};
  app.set_version_flag("--version", std::string(bk::kVersion));
  app.require_subcommand(1);

  // induce
  auto* induce = app.add_subcommand("induce", "induce the loanword lexicon");
  std::string dict, patterns, c_en_fr, c_fr_en, c_de_fr, c_de_en, inherit_path,
      overrides, out_dir;
  induce->add_option("--dict", dict, "dictionary dump (JSON-lines)")->required();
  induce->add_option("--patterns", patterns, "pattern registry TSV")->required();
  induce->add_option("--chains-en-from-fr", c_en_fr, "EN-from-FR chain list")->required();
  induce->add_option("--chains-fr-from-en", c_fr_en, "FR-from-EN chain list")->required();
  induce->add_option("--chains-de-from-fr", c_de_fr, "DE-from-FR chain list")->required();
  induce->add_option("--chains-de-from-en", c_de_en, "DE-from-EN chain list")->required();
  induce->add_option("--inheritance", inherit_path, "Old High German lemma list")->required();
  induce->add_option("--overrides", overrides, "override command file");
  induce->add_option("--out", out_dir, "output directory")->required();

  // train-lid
  auto* train = app.add_subcommand("train-lid", "train the sentence LID model");
  std::string train_file, train_out;
  unsigned seed = 42;
  double holdout = 0.1;
  train->add_option("--train", train_file, "labeled sentences (JSON-lines)")->required();
  train->add_option("--out", train_out, "output directory")->required();
  train->add_option("--seed", seed, "RNG seed for the held-out split");
  train->add_option("--holdout", holdout, "held-out fraction")
      ->check(CLI::Range(0.0, 0.5));

  // annotate
  auto* annotate = app.add_subcommand("annotate", "annotate a corpus");
  std::string corpus, model_path, lexicon_path, config_path, annotate_out;
  unsigned jobs = 1;
  annotate->add_option("--corpus", corpus, "raw corpus (JSON-lines)")->required();
  annotate->add_option("--model", model_path, "trained LID model")->required();
  annotate->add_option("--lexicon", lexicon_path, "loanword lexicon TSV")->required();
  annotate->add_option("--config", config_path, "pipeline config (key = value)");
  annotate->add_option("--out", annotate_out, "output directory")->required();
  annotate->add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1u, 64u));

  // report
  auto* report = app.add_subcommand("report", "aggregate metrics and emit reports");
  std::string annotated, scheme_name = "six", group_by_name = "period",
              report_out, format_name = "csv", weighting_name = "document";
  double entropy_base = 2.0;
  unsigned inventory_k = 4;
  report->add_option("--annotated", annotated, "annotated corpus (JSON-lines)")->required();
  report->add_option("--scheme", scheme_name, "period scheme: six or five");
  report->add_option("--group-by", group_by_name,
                     "grouping: period, section, period-section");
  report->add_option("--format", format_name, "csv or json");
  report->add_option("--weighting", weighting_name,
                     "group means: document or token");
  report->add_option("--entropy-base", entropy_base, "entropy logarithm base");
  report->add_option("--m-index-k", inventory_k, "language inventory size");
  report->add_option("--out", report_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*induce)
      return cmd_induce(dict, patterns, c_en_fr, c_fr_en, c_de_fr, c_de_en,
                        inherit_path, overrides, out_dir);
    if (*train) return cmd_train_lid(train_file, train_out, seed, holdout);
    if (*annotate)
      return cmd_annotate(corpus, model_path, lexicon_path, config_path,
                          annotate_out, jobs);
    if (*report)
      return cmd_report(annotated, scheme_name, group_by_name, report_out,
                        format_name, weighting_name, entropy_base, inventory_k);
  } catch (const bk::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const bk::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
