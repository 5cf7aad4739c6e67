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

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "borrowkit/detector.hpp"
#include "test_util.hpp"

using namespace borrowkit;

namespace {

Sentence sentence_with_tags(const std::vector<std::pair<std::string, Lang>>& spec) {
  Sentence s;
  std::size_t offset = 0;
  for (const auto& [surface, lang] : spec) {
    Token t;
    t.surface = surface;
    t.normalized = text::fold_case(surface);
    t.begin = offset;
    t.end = offset + surface.size();
    offset = t.end + 1;
    t.lang = lang;
    if (t.neutral()) t.role = MixingRole::NEUTRAL;
    s.text += surface;
    s.text += ' ';
    s.tokens.push_back(std::move(t));
  }
  s.gate = GateDecision::PROCESS;
  s.lang = Lang::LU;
  return s;
}

LexiconIndex detector_lexicon() {
  return LexiconIndex(load_lexicon_file(bktest::test_data("detector_lexicon.tsv")));
}

}  // namespace

TEST_CASE("normalizer is idempotent") {
  DefaultNormalizer n;
  for (const char* w : {"Malentendu", "STROOSS", "Bäcker", "d'Buch"}) {
    auto once = n.normalize(w);
    CHECK(n.normalize(once) == once);
  }
}

TEST_CASE("label_tokens marks lexicon hits and leaves the rest native") {
  auto lex = detector_lexicon();
  DefaultNormalizer norm;
  Sentence s = sentence_with_tags({{"De", Lang::LU},
                                   {"Malentendu", Lang::FR},
                                   {"war", Lang::LU},
                                   {"kloer", Lang::LU},
                                   {".", Lang::NEUTRAL}});
  label_tokens(s, lex, norm);
  CHECK(s.tokens[1].loan == LoanLabel::FR_LOAN);
  CHECK(s.tokens[1].pattern == "exact");
  CHECK(s.tokens[0].loan == LoanLabel::NATIVE);
  CHECK(s.tokens[2].loan == LoanLabel::NATIVE);
  CHECK(s.tokens[4].loan == LoanLabel::UNSET);  // NEUTRAL untouched

  // variant and Eifeler final-n lookups resolve
  Sentence v = sentence_with_tags({{"Motivatiounen", Lang::LU}});
  label_tokens(v, lex, norm);
  CHECK(v.tokens[0].loan == LoanLabel::FR_LOAN);
  Sentence eifeler = sentence_with_tags({{"Rapportern", Lang::LU}});
  label_tokens(eifeler, lex, norm);
  CHECK(eifeler.tokens[0].loan == LoanLabel::FR_LOAN);
}

TEST_CASE("foreign runs respect neutral transparency") {
  auto runs1 = foreign_runs(sentence_with_tags(
      {{"a", Lang::LU}, {"b", Lang::FR}, {"c", Lang::LU}}));
  REQUIRE(runs1.size() == 1);
  CHECK(runs1[0].length == 1);
  CHECK(runs1[0].lang == Lang::FR);

  auto runs2 = foreign_runs(sentence_with_tags({{"a", Lang::LU},
                                                {"b", Lang::FR},
                                                {",", Lang::NEUTRAL},
                                                {"c", Lang::FR},
                                                {"d", Lang::LU}}));
  REQUIRE(runs2.size() == 1);
  CHECK(runs2[0].length == 2);
  CHECK(runs2[0].begin == 1);
  CHECK(runs2[0].end == 4);

  CHECK(foreign_runs(sentence_with_tags({{"a", Lang::LU}, {"b", Lang::LU}})).empty());

  // trailing neutral does not extend a run
  auto runs3 = foreign_runs(sentence_with_tags(
      {{"x", Lang::FR}, {".", Lang::NEUTRAL}}));
  REQUIRE(runs3.size() == 1);
  CHECK(runs3[0].end == 1);

  // majority language with tie toward the first token
  auto runs4 = foreign_runs(sentence_with_tags(
      {{"x", Lang::FR}, {"y", Lang::DE}, {"z", Lang::DE}}));
  CHECK(runs4[0].lang == Lang::DE);
  auto runs5 = foreign_runs(sentence_with_tags({{"x", Lang::FR}, {"y", Lang::DE}}));
  CHECK(runs5[0].lang == Lang::FR);
}

TEST_CASE("local LU ratio over the token window") {
  Sentence s = sentence_with_tags({{"a", Lang::LU},
                                   {"b", Lang::LU},
                                   {"c", Lang::LU},
                                   {"x", Lang::FR},
                                   {"d", Lang::LU},
                                   {"e", Lang::LU},
                                   {"f", Lang::LU}});
  CHECK(local_lu_ratio(s, 3, 3) == 1.0);

  Sentence half = sentence_with_tags({{"a", Lang::LU},
                                      {"b", Lang::FR},
                                      {"c", Lang::LU},
                                      {"x", Lang::FR},
                                      {"d", Lang::FR},
                                      {"e", Lang::LU},
                                      {"f", Lang::FR}});
  CHECK(local_lu_ratio(half, 3, 3) == 0.5);

  Sentence lone = sentence_with_tags({{"x", Lang::FR}});
  CHECK(local_lu_ratio(lone, 0, 3) == 1.0);  // empty neighborhood default

  // neutrals are excluded from the ratio
  Sentence neut = sentence_with_tags(
      {{",", Lang::NEUTRAL}, {"x", Lang::FR}, {"d", Lang::LU}});
  CHECK(local_lu_ratio(neut, 1, 3) == 1.0);
}

TEST_CASE("classify_mixing assigns the documented roles") {
  auto lex = detector_lexicon();
  DetectorConfig cfg;
  cfg.validate();

  // short lexicon-backed run in an LU context -> BORROWING
  Sentence borrow = sentence_with_tags({{"De", Lang::LU},
                                        {"Sträit", Lang::LU},
                                        {"Malentendu", Lang::FR},
                                        {"war", Lang::LU},
                                        {"kloer", Lang::LU}});
  DefaultNormalizer norm;
  label_tokens(borrow, lex, norm);
  classify_mixing(borrow, cfg, &lex);
  CHECK(borrow.tokens[2].role == MixingRole::BORROWING);
  CHECK(borrow.tokens[0].role == MixingRole::MATRIX);

  // run of length >= 4 -> CODE_SWITCH for every token in the run
  Sentence cs = sentence_with_tags({{"ça", Lang::FR},
                                    {"n'a", Lang::FR},
                                    {"rien", Lang::FR},
                                    {"à", Lang::FR},
                                    {"voir", Lang::FR},
                                    {"mat", Lang::LU}});
  label_tokens(cs, lex, norm);
  classify_mixing(cs, cfg, &lex);
  for (std::size_t i = 0; i < 5; ++i)
    CHECK(cs.tokens[i].role == MixingRole::CODE_SWITCH);
  CHECK(cs.tokens[5].role == MixingRole::MATRIX);

  // lone foreign token without lexicon backing in a weak LU context -> AMBIGUOUS
  Sentence amb = sentence_with_tags({{"unknownwordx", Lang::FR},
                                     {"autre", Lang::FR},
                                     {"mot", Lang::FR},
                                     {"hei", Lang::LU}});
  label_tokens(amb, lex, norm);
  classify_mixing(amb, cfg, &lex);
  CHECK(amb.tokens[0].role == MixingRole::AMBIGUOUS);

  // length-3 runs sit in the ambiguous band by construction
  Sentence band = sentence_with_tags({{"a", Lang::LU},
                                      {"Malentendu", Lang::FR},
                                      {"deux", Lang::FR},
                                      {"trois", Lang::FR},
                                      {"b", Lang::LU}});
  label_tokens(band, lex, norm);
  classify_mixing(band, cfg, &lex);
  CHECK(band.tokens[1].role == MixingRole::AMBIGUOUS);
  CHECK(band.tokens[2].role == MixingRole::AMBIGUOUS);
  CHECK(band.tokens[3].role == MixingRole::AMBIGUOUS);
}

TEST_CASE("role partition and run exclusivity hold under fuzzing") {
  auto lex = detector_lexicon();
  DetectorConfig cfg;
  DefaultNormalizer norm;
  std::mt19937 rng(4242);
  std::uniform_int_distribution<int> n_tokens(1, 20);
  std::uniform_int_distribution<int> tag(0, 5);
  std::vector<std::string> surfaces = {"wuert", "Malentendu", "mot", ",",
                                       "word", "dag", "motivation"};
  std::uniform_int_distribution<std::size_t> pick(0, surfaces.size() - 1);

  for (int iter = 0; iter < 400; ++iter) {
    std::vector<std::pair<std::string, Lang>> spec;
    for (int i = 0, n = n_tokens(rng); i < n; ++i) {
      Lang lang = static_cast<Lang>(tag(rng));
      std::string surface = surfaces[pick(rng)];
      if (surface == ",")
        lang = Lang::NEUTRAL;
      else if (lang == Lang::NEUTRAL)
        lang = Lang::LU;
      spec.emplace_back(surface, lang);
    }
    Sentence s = sentence_with_tags(spec);
    label_tokens(s, lex, norm);
    classify_mixing(s, cfg, &lex);

    for (const auto& t : s.tokens) {
      // exactly one role, NEUTRAL iff NEUTRAL lang
      CHECK((t.role == MixingRole::NEUTRAL) == t.neutral());
      if (t.lang == Lang::LU) CHECK(t.role == MixingRole::MATRIX);
    }
    for (const auto& run : foreign_runs(s)) {
      bool has_borrowing = false, has_cs = false;
      for (std::size_t i = run.begin; i < run.end; ++i) {
        if (s.tokens[i].role == MixingRole::BORROWING) has_borrowing = true;
        if (s.tokens[i].role == MixingRole::CODE_SWITCH) has_cs = true;
      }
      CHECK_FALSE((has_borrowing && has_cs));
      if (run.length >= cfg.min_cs_run) CHECK_FALSE(has_borrowing);
    }
    // all-LU sentences produce no mixing roles
    bool any_foreign = false;
    for (const auto& t : s.tokens) any_foreign |= foreign_token(t);
    if (!any_foreign) {
      for (const auto& t : s.tokens) {
        CHECK(t.role != MixingRole::BORROWING);
        CHECK(t.role != MixingRole::CODE_SWITCH);
        CHECK(t.role != MixingRole::AMBIGUOUS);
      }
    }
  }
}

TEST_CASE("lengthening a run never turns code-switch into borrowing") {
  auto lex = detector_lexicon();
  DetectorConfig cfg;
  DefaultNormalizer norm;
  for (std::size_t run_len = 1; run_len <= 8; ++run_len) {
    std::vector<std::pair<std::string, Lang>> spec;
    spec.emplace_back("ufank", Lang::LU);
    for (std::size_t i = 0; i < run_len; ++i)
      spec.emplace_back("Malentendu", Lang::FR);
    spec.emplace_back("enn", Lang::LU);
    Sentence s = sentence_with_tags(spec);
    label_tokens(s, lex, norm);
    classify_mixing(s, cfg, &lex);
    if (run_len >= cfg.min_cs_run)
      for (std::size_t i = 1; i <= run_len; ++i)
        CHECK(s.tokens[i].role == MixingRole::CODE_SWITCH);
  }
}

TEST_CASE("annotate_document applies the gate contract") {
  const auto& model = bktest::seed_model();
  auto lex = detector_lexicon();
  PipelineConfig cfg;
  DefaultNormalizer norm;

  IngestStats stats;
  auto doc = document_from_record(
      R"({"id":"d1","date":"2020-05-01","section":"National","text":"De Sträit ass duerch e Malentendu entstan. Bonjour tout le monde, comment allez-vous aujourd'hui ?"})",
      stats);
  REQUIRE(doc.has_value());
  annotate_document(*doc, model, cfg, lex, norm);
  REQUIRE(doc->sentences.size() == 2);

  const Sentence& lu = doc->sentences[0];
  CHECK(lu.gate == GateDecision::PROCESS);
  int borrowing = 0;
  for (const auto& t : lu.tokens)
    if (t.role == MixingRole::BORROWING) ++borrowing;
  CHECK(borrowing == 1);

  const Sentence& fr = doc->sentences[1];
  CHECK(fr.gate == GateDecision::ROUTE_OTHER);
  for (const auto& t : fr.tokens) {
    if (t.neutral()) {
      CHECK(t.role == MixingRole::NEUTRAL);
    } else {
      CHECK(t.role == MixingRole::UNSET);
      CHECK(t.loan == LoanLabel::UNSET);
      CHECK(t.lang != Lang::NEUTRAL);  // still tagged for document metrics
    }
  }

  Document empty;
  empty.id = "e";
  empty.date = {2020, 1, 1};
  annotate_document(empty, model, cfg, lex, norm);
  CHECK(empty.sentences.empty());
}

TEST_CASE("pipeline config file parsing") {
  std::istringstream good(
      "# detector\nwindow = 3\nmax_borrow_run = 2\nmin_cs_run = 4\n"
      "min_lu_ratio = 0.5\nbase_threshold = 0.5\nmax_threshold = 0.8\n"
      "short_len = 3\nlong_len = 15\ntoken_fallback = 0.4\n");
  auto cfg = load_pipeline_config(good);
  CHECK(cfg.detector.window == 3);
  CHECK(cfg.gate.long_len == 15);

  std::istringstream bad_key("frobnicate = 1\n");
  CHECK_THROWS_AS(load_pipeline_config(bad_key), ParseError);
  std::istringstream bad_value("window = banana\n");
  CHECK_THROWS_AS(load_pipeline_config(bad_value), ParseError);
  std::istringstream bad_ranges("max_borrow_run = 9\nmin_cs_run = 4\n");
  CHECK_THROWS_AS(load_pipeline_config(bad_ranges), ConfigError);

  // the shipped config file mirrors the built-in defaults
  auto shipped = load_pipeline_config_file(bktest::shipped_data("pipeline.conf"));
  PipelineConfig defaults;
  CHECK(shipped.detector.window == defaults.detector.window);
  CHECK(shipped.detector.max_borrow_run == defaults.detector.max_borrow_run);
  CHECK(shipped.detector.min_cs_run == defaults.detector.min_cs_run);
  CHECK(shipped.detector.min_lu_ratio == defaults.detector.min_lu_ratio);
  CHECK(shipped.gate.base_threshold == defaults.gate.base_threshold);
  CHECK(shipped.gate.max_threshold == defaults.gate.max_threshold);
  CHECK(shipped.token_fallback == defaults.token_fallback);
}
