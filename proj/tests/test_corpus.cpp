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

#include "borrowkit/corpus.hpp"
#include "test_util.hpp"

using namespace borrowkit;

TEST_CASE("ingesting a two-sentence record") {
  IngestStats stats;
  auto doc = document_from_record(
      R"({"id":"a1","date":"2020-03-01","section":"National","text":"Moien. Et reent."})",
      stats);
  REQUIRE(doc.has_value());
  CHECK(doc->id == "a1");
  CHECK(doc->date == Date{2020, 3, 1});
  CHECK(doc->section == "National");
  REQUIRE(doc->sentences.size() == 2);
  std::size_t non_neutral = 0;
  for (const auto& s : doc->sentences)
    for (const auto& t : s.tokens)
      if (!t.neutral()) ++non_neutral;
  // Word tokens Moien/Et/reent plus the two sentence-final periods.
  CHECK(non_neutral == 3);
  CHECK(doc->token_count == 5);
  CHECK(stats.errors == 0);
}

TEST_CASE("malformed records are skipped, never fatal") {
  IngestStats stats;
  CHECK_FALSE(document_from_record(
      R"({"id":"a2","date":"not-a-date","section":"x","text":"Moien."})", stats));
  CHECK_FALSE(document_from_record("{broken json", stats));
  CHECK_FALSE(document_from_record(R"({"date":"2020-01-01","text":"x"})", stats));
  CHECK(stats.errors == 3);
  // dates outside the supported span are record-level errors as well
  CHECK_FALSE(document_from_record(
      R"({"id":"a3","date":"1889-05-01","section":"x","text":"Moien."})", stats));
  CHECK(stats.errors == 4);
}

TEST_CASE("empty text gives an empty document") {
  IngestStats stats;
  auto doc = document_from_record(
      R"({"id":"a4","date":"2020-01-02","section":"x","text":""})", stats);
  REQUIRE(doc.has_value());
  CHECK(doc->sentences.empty());
  CHECK(doc->token_count == 0);
}

TEST_CASE("date parsing validates the Gregorian calendar") {
  CHECK(parse_date("2020-02-29").has_value());   // leap year
  CHECK_FALSE(parse_date("2021-02-29").has_value());
  CHECK_FALSE(parse_date("2020-13-01").has_value());
  CHECK_FALSE(parse_date("2020-00-10").has_value());
  CHECK_FALSE(parse_date("2101-01-01").has_value());
  CHECK_FALSE(parse_date("20-01-01").has_value());
  CHECK(parse_date("1990-01-01").has_value());
  CHECK(parse_date("2100-12-31")->month_key() == "2100-12");
}

TEST_CASE("tokenizer splits clitics and keeps compounds together") {
  auto toks = tokenize("D'Buch, ça n'a rien à voir mat dem Film.");
  std::vector<std::string> surfaces;
  for (const auto& t : toks) surfaces.push_back(t.surface);
  CHECK(surfaces == std::vector<std::string>{"D'", "Buch", ",", "ça", "n'a",
                                             "rien", "à", "voir", "mat", "dem",
                                             "Film", "."});
  auto hyph = tokenize("entre-temps war hien do");
  CHECK(hyph.front().surface == "entre-temps");
}

TEST_CASE("neutral assignment covers punctuation, digits, URLs, and emails") {
  CHECK(neutral_surface(","));
  CHECK(neutral_surface("..."));
  CHECK(neutral_surface("1984"));
  CHECK(neutral_surface("3,5"));
  CHECK(neutral_surface("§12"));
  CHECK(neutral_surface("https://www.news.lu/news"));
  CHECK(neutral_surface("www.news.lu"));
  CHECK(neutral_surface("info@news.lu"));
  CHECK_FALSE(neutral_surface("Moien"));
  CHECK_FALSE(neutral_surface("d'"));
  CHECK_FALSE(neutral_surface("COVID-19"));

  for (const auto& t : tokenize("Schreift op info@news.lu w.e.g."))
    if (t.surface == "info@news.lu") CHECK(t.lang == Lang::NEUTRAL);
}

TEST_CASE("sentence splitting honors the abbreviation guard") {
  auto sents = split_sentences("Den Dr. Muller war do. Hien ass frou.");
  REQUIRE(sents.size() == 2);
  CHECK(sents[0] == "Den Dr. Muller war do.");

  auto initials = split_sentences("De Projet z.B. war deier. En Dag duerno koum d'Decisioun.");
  REQUIRE(initials.size() == 2);

  auto quotes = split_sentences("Hie sot et. \"Mir maachen dat.\"");
  CHECK(quotes.size() == 2);

  auto nosplit = split_sentences("Et war ca. 20 Grad waarm.");
  CHECK(nosplit.size() == 1);
}

TEST_CASE("offset fidelity: tokens with gaps reconstruct the sentence") {
  std::mt19937 rng(99);
  std::vector<std::string> words = {"Moien",  "d'Land", "ça",    "entre-temps",
                                    "1984",   "www.x.lu", "Café", "...",
                                    "Bäcker", "«zitat»"};
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  std::uniform_int_distribution<int> n_words(1, 12);
  std::uniform_int_distribution<int> spaces(1, 3);

  for (int iter = 0; iter < 200; ++iter) {
    std::string sentence;
    for (int i = 0, n = n_words(rng); i < n; ++i) {
      if (i) sentence.append(static_cast<std::size_t>(spaces(rng)), ' ');
      sentence += words[pick(rng)];
    }
    auto toks = tokenize(sentence);
    std::string rebuilt;
    std::size_t cursor = 0;
    for (const auto& t : toks) {
      REQUIRE(t.begin >= cursor);                    // ordered, non-overlapping
      REQUIRE(t.end <= sentence.size());
      rebuilt += sentence.substr(cursor, t.begin - cursor);
      CHECK(sentence.substr(t.begin, t.end - t.begin) == t.surface);
      rebuilt += t.surface;
      cursor = t.end;
    }
    rebuilt += sentence.substr(cursor);
    CHECK(rebuilt == sentence);
  }
}

TEST_CASE("document JSON round trip is identity") {
  IngestStats stats;
  auto doc = document_from_record(
      R"({"id":"r1","date":"2019-11-30","section":"Sport","text":"D'Ekipp huet gewonnen! Si feieren haut den Owend. Kuckt op www.news.lu."})",
      stats);
  REQUIRE(doc.has_value());
  // decorate to exercise every field
  doc->sentences[0].lang = Lang::LU;
  doc->sentences[0].posterior = 0.987654321;
  doc->sentences[0].gate = GateDecision::PROCESS;
  doc->sentences[0].tokens[0].lang = Lang::LU;
  doc->sentences[0].tokens[0].loan = LoanLabel::NATIVE;
  doc->sentences[0].tokens[0].role = MixingRole::MATRIX;
  doc->sentences[0].tokens[1].loan = LoanLabel::FR_LOAN;
  doc->sentences[0].tokens[1].pattern = "on>oun";

  auto j1 = to_json(*doc);
  Document back = document_from_json(j1);
  CHECK(back == *doc);
  CHECK(to_json(back).dump() == j1.dump());
}

TEST_CASE("corpus reader streams documents in file order and counts errors") {
  auto path = std::filesystem::temp_directory_path() / "bk_corpus_test.jsonl";
  {
    std::ofstream out(path);
    out << R"({"id":"1","date":"2001-05-01","section":"a","text":"Moien."})" << "\n";
    out << "not json\n";
    out << R"({"id":"2","date":"2002-05-01","section":"b","text":"Addi."})" << "\n";
  }
  CorpusReader reader(path.string(), CorpusFormat::RawJsonl);
  Document doc;
  std::vector<std::string> ids;
  while (reader.next(doc)) ids.push_back(doc.id);
  CHECK(ids == std::vector<std::string>{"1", "2"});
  CHECK(reader.stats().errors == 1);
  CHECK(reader.stats().documents == 2);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(CorpusReader("/nonexistent/file.jsonl", CorpusFormat::RawJsonl),
                  ConfigError);
}
