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

#include "borrowkit/lid.hpp"
#include "test_util.hpp"

using namespace borrowkit;

TEST_CASE("training requires two classes with enough sentences") {
  std::vector<std::pair<std::string, Lang>> single;
  for (int i = 0; i < 60; ++i) single.emplace_back("Moien Lëtzebuerg " + std::to_string(i), Lang::LU);
  CHECK_THROWS_AS(CharNgramModel::train(single), ConfigError);

  auto mixed = single;
  for (int i = 0; i < 20; ++i) mixed.emplace_back("Bonjour " + std::to_string(i), Lang::FR);
  CHECK_THROWS_AS(CharNgramModel::train(mixed), ConfigError);  // FR below minimum
  CHECK_THROWS_AS(CharNgramModel::train({}), ConfigError);
}

TEST_CASE("seed model classifies its own training data almost perfectly") {
  const auto& model = bktest::seed_model();
  auto data = bktest::load_seed_sentences();
  std::size_t ok = 0;
  for (const auto& [txt, lang] : data)
    if (model.classify(txt).lang == lang) ++ok;
  CHECK(static_cast<double>(ok) / static_cast<double>(data.size()) >= 0.95);
}

TEST_CASE("500+500 duplicated corpus keeps per-sentence argmax") {
  auto data = bktest::load_seed_sentences();
  std::vector<std::pair<std::string, Lang>> lu_fr;
  for (const auto& [txt, lang] : data)
    if (lang == Lang::LU || lang == Lang::FR) lu_fr.emplace_back(txt, lang);
  // tile to ~500 sentences per class
  std::vector<std::pair<std::string, Lang>> big;
  while (big.size() < 1000) big.insert(big.end(), lu_fr.begin(), lu_fr.end());
  auto model = CharNgramModel::train(big);
  std::size_t ok = 0;
  for (const auto& [txt, lang] : big)
    if (model.classify(txt).lang == lang) ++ok;
  CHECK(static_cast<double>(ok) / static_cast<double>(big.size()) >= 0.95);

  auto doubled = big;
  doubled.insert(doubled.end(), big.begin(), big.end());
  auto model2 = CharNgramModel::train(doubled);
  for (const auto& [txt, lang] : lu_fr)
    CHECK(model.classify(txt).lang == model2.classify(txt).lang);
}

TEST_CASE("classify handles empty input and held-out French") {
  const auto& model = bktest::seed_model();
  auto empty = model.classify("");
  CHECK(empty.lang == Lang::OTHER);
  CHECK(empty.posterior == 0.0);
  auto ws = model.classify("   \t  ");
  CHECK(ws.lang == Lang::OTHER);

  auto fr = model.classify("Bonjour tout le monde, comment allez-vous aujourd'hui");
  CHECK(fr.lang == Lang::FR);
  CHECK(fr.posterior >= 0.5);
}

TEST_CASE("posteriors are a proper distribution") {
  const auto& model = bktest::seed_model();
  for (const char* s : {"Moien alleguer", "x", "Die Regierung tagt heute",
                        "á é í ó ú", "12345", "D'Land ass kleng."}) {
    auto post = model.posteriors(s);
    REQUIRE(!post.empty());
    double sum = 0;
    for (const auto& [lang, p] : post) {
      CHECK(std::isfinite(p));
      CHECK(p >= 0.0);
      sum += p;
    }
    CHECK_THAT(sum, Catch::Matchers::WithinAbs(1.0, 1e-9));
  }
}

TEST_CASE("posterior is invariant under trailing whitespace") {
  const auto& model = bktest::seed_model();
  auto a = model.classify("Moien Lëtzebuerg");
  auto b = model.classify("Moien Lëtzebuerg   \t ");
  auto c = model.classify("  Moien Lëtzebuerg\n");
  CHECK(a.lang == b.lang);
  CHECK(a.posterior == b.posterior);
  CHECK(a.posterior == c.posterior);
}

TEST_CASE("model serialization round-trips byte-identically") {
  const auto& model = bktest::seed_model();
  std::string bytes = model.serialize();
  CHECK(bytes.rfind("BKLID1\n", 0) == 0);
  std::istringstream in(bytes);
  auto reloaded = CharNgramModel::deserialize(in);
  CHECK(reloaded.serialize() == bytes);
  auto a = model.classify("De Sträit ass grouss.");
  auto b = reloaded.classify("De Sträit ass grouss.");
  CHECK(a.lang == b.lang);
  CHECK(a.posterior == b.posterior);

  std::istringstream bad("NOTMAGIC\n{}");
  CHECK_THROWS_AS(CharNgramModel::deserialize(bad), ConfigError);
  std::istringstream truncated("BKLID1\n{\"alpha\": 0.1}");
  CHECK_THROWS_AS(CharNgramModel::deserialize(truncated), ConfigError);
  std::istringstream garbage("BKLID1\nnot json at all");
  CHECK_THROWS_AS(CharNgramModel::deserialize(garbage), ConfigError);
}

TEST_CASE("gate_threshold endpoints and interpolation") {
  GateConfig cfg;
  cfg.validate();
  CHECK(gate_threshold(cfg, 0) == 0.80);
  CHECK(gate_threshold(cfg, 2) == 0.80);
  CHECK(gate_threshold(cfg, 3) == 0.80);
  CHECK(gate_threshold(cfg, 15) == 0.50);
  CHECK(gate_threshold(cfg, 40) == 0.50);
  CHECK_THAT(gate_threshold(cfg, 9), Catch::Matchers::WithinAbs(0.65, 1e-12));

  GateConfig bad;
  bad.base_threshold = 0.9;
  bad.max_threshold = 0.8;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("gate_threshold is monotone non-increasing and bounded") {
  GateConfig cfg;
  double prev = 1.0;
  for (std::size_t n = 0; n < 100; ++n) {
    double t = gate_threshold(cfg, n);
    CHECK(t >= cfg.base_threshold);
    CHECK(t <= cfg.max_threshold);
    CHECK(t <= prev);
    prev = t;
  }
}

TEST_CASE("gate decisions follow the documented examples") {
  const auto& model = bktest::seed_model();
  GateConfig cfg;

  Sentence lu;
  lu.text = "D'Regierung huet e neie Gesetzprojet an der Chamber virgestallt.";
  lu.tokens = tokenize(lu.text);
  CHECK(gate(model, cfg, lu) == GateDecision::PROCESS);
  CHECK(lu.lang == Lang::LU);
  CHECK(lu.posterior >= gate_threshold(cfg, lu.tokens.size()));

  Sentence fr;
  fr.text = "Bonjour tout le monde, comment allez-vous aujourd'hui ?";
  fr.tokens = tokenize(fr.text);
  CHECK(gate(model, cfg, fr) == GateDecision::ROUTE_OTHER);

  // Short LU input needs the raised threshold.
  Sentence shorty;
  shorty.text = "Moien Dag";
  shorty.tokens = tokenize(shorty.text);
  gate(model, cfg, shorty);
  if (shorty.lang == Lang::LU && shorty.posterior < 0.80)
    CHECK(shorty.gate == GateDecision::ROUTE_OTHER);
}

TEST_CASE("gate never processes a non-LU argmax") {
  const auto& model = bktest::seed_model();
  GateConfig cfg;
  auto data = bktest::load_seed_sentences();
  for (const auto& [txt, lang] : data) {
    Sentence s;
    s.text = txt;
    s.tokens = tokenize(txt);
    gate(model, cfg, s);
    if (s.gate == GateDecision::PROCESS) CHECK(s.lang == Lang::LU);
  }
}

TEST_CASE("token_lid prefers the lexicon, then n-grams, then the sentence") {
  const auto& model = bktest::seed_model();
  std::vector<LexiconEntry> entries;
  entries.push_back({"Motivatioun", {}, Lang::FR, "motivation", "on>oun",
                     Pos::NOUN, Provenance::AUTO});
  entries.push_back({"Malentendu", {}, Lang::FR, "malentendu", "exact",
                     Pos::NOUN, Provenance::AUTO});
  LexiconIndex lex(entries);

  Token comma;
  comma.surface = ",";
  comma.normalized = ",";
  comma.lang = Lang::NEUTRAL;
  CHECK(token_lid(model, lex, comma, Lang::LU) == Lang::NEUTRAL);

  auto make = [](std::string s) {
    Token t;
    t.surface = s;
    t.normalized = text::fold_case(s);
    t.lang = Lang::OTHER;
    return t;
  };
  // LU-form index hit fixes LU
  CHECK(token_lid(model, lex, make("Motivatioun"), Lang::LU) == Lang::LU);
  // donor-form index hit fixes the donor language (wins on dual hits)
  CHECK(token_lid(model, lex, make("motivation"), Lang::LU) == Lang::FR);
  CHECK(token_lid(model, lex, make("Malentendu"), Lang::LU) == Lang::FR);
  // n-gram route
  CHECK(token_lid(model, lex, make("ça"), Lang::LU) == Lang::FR);
  // low-confidence fallback to the sentence language
  CHECK(token_lid(model, lex, make("e"), Lang::LU) == Lang::LU);
  CHECK(token_lid(model, lex, make("e"), Lang::DE) == Lang::DE);
}

TEST_CASE("token_lid assigns NEUTRAL exactly to NEUTRAL tokens") {
  const auto& model = bktest::seed_model();
  LexiconIndex lex{std::vector<LexiconEntry>{}};
  Sentence s;
  s.text = "Moien, d'Welt ass 100% flott.";
  s.tokens = tokenize(s.text);
  for (auto& t : s.tokens) {
    Lang lang = token_lid(model, lex, t, Lang::LU);
    CHECK((lang == Lang::NEUTRAL) == t.neutral());
  }
}
