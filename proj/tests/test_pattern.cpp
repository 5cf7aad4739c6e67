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

#include "borrowkit/pattern.hpp"
#include "test_util.hpp"

using namespace borrowkit;

static std::vector<AdaptationPattern> registry() {
  return load_registry_file(bktest::shipped_data("patterns.tsv"));
}

TEST_CASE("pattern DSL parses the documented grammar") {
  auto p = parse_pattern("eur>er");
  REQUIRE(p.edits.size() == 1);
  CHECK(p.edits[0].pos == AffixPos::SUFFIX);
  CHECK(p.edits[0].donor_affix == "eur");
  CHECK(p.edits[0].recipient_affix == "er");

  auto compound = parse_pattern("on>oun+c>k");
  REQUIRE(compound.edits.size() == 2);
  CHECK(compound.edits[0].donor_affix == "on");
  CHECK(compound.edits[1].donor_affix == "c");

  auto exact = parse_pattern("exact");
  CHECK(exact.lexical());
  CHECK(exact.klass == PatternClass::LEXICAL);

  auto deletion = parse_pattern("-e");
  REQUIRE(deletion.edits.size() == 1);
  CHECK(deletion.edits[0].donor_affix == "e");
  CHECK(deletion.edits[0].recipient_affix.empty());

  auto prefix = parse_pattern("^é>E");
  REQUIRE(prefix.edits.size() == 1);
  CHECK(prefix.edits[0].pos == AffixPos::PREFIX);
}

TEST_CASE("pattern DSL rejects malformed specs with positions") {
  CHECK_THROWS_AS(parse_pattern(""), ParseError);
  CHECK_THROWS_AS(parse_pattern("eur"), ParseError);     // missing '>'
  CHECK_THROWS_AS(parse_pattern("a>a"), ParseError);     // vacuous
  CHECK_THROWS_AS(parse_pattern("on>oun+"), ParseError); // trailing '+'
  CHECK_THROWS_AS(parse_pattern("^"), ParseError);
  CHECK_THROWS_AS(parse_pattern("-"), ParseError);
  try {
    parse_pattern("on>oun+x");
  } catch (const ParseError& e) {
    CHECK(e.position() == 7);
  }
}

TEST_CASE("golden adaptation pairs match exactly their own pattern") {
  auto patterns = registry();
  text::StringMap<const AdaptationPattern*> by_id;
  for (const auto& p : patterns) by_id[p.id] = &p;
  auto pairs = bktest::load_golden_pairs();
  REQUIRE(pairs.size() == 46);

  for (const auto& pair : pairs) {
    INFO(pair.pattern_id << ": " << pair.lu << " / " << pair.source);
    auto it = by_id.find(pair.pattern_id);
    REQUIRE(it != by_id.end());
    CHECK(matches(*it->second, pair.lu, pair.source));
    for (const auto& other : patterns) {
      if (other.id == pair.pattern_id) continue;
      INFO("unexpected overlap with " << other.id);
      CHECK_FALSE(matches(other, pair.lu, pair.source));
    }
  }
}

TEST_CASE("matches handles the documented counter-examples") {
  auto patterns = registry();
  text::StringMap<const AdaptationPattern*> by_id;
  for (const auto& p : patterns) by_id[p.id] = &p;

  CHECK_FALSE(matches(*by_id["eur>er"], "Motivatioun", "motivation"));
  CHECK_FALSE(matches(*by_id["eur>er"], "Haus", "haus"));
  CHECK(matches(*by_id["-e"], "Karwoch", "Karwoche"));
  // empty words never match
  CHECK_FALSE(matches(*by_id["eur>er"], "", "rapporteur"));
  CHECK_FALSE(matches(*by_id["exact"], "Vignette", ""));
  // lexical equality is case-folded but accent-sensitive
  CHECK(matches(*by_id["exact"], "Vignette", "vignette"));
  CHECK_FALSE(matches(*by_id["exact"], "Eclat", "éclat"));
}

TEST_CASE("donor_candidates inverts the documented examples") {
  auto patterns = registry();
  text::StringMap<const AdaptationPattern*> by_id;
  for (const auto& p : patterns) by_id[p.id] = &p;

  auto inv = donor_candidates(*by_id["on>oun"], "Motivatioun");
  REQUIRE(inv.size() == 1);
  CHECK(text::fold_case(inv[0]) == "motivation");

  auto exact = donor_candidates(*by_id["exact"], "Vignette");
  REQUIRE(exact.size() == 1);
  CHECK(exact[0] == "Vignette");

  CHECK(donor_candidates(*by_id["eur>er"], "Haus").empty());

  // The compound pattern enumerates every consistent preimage.
  auto fik = donor_candidates(*by_id["on>oun+c>k"], "Fiktioun");
  bool found = false;
  for (const auto& c : fik)
    if (text::fold_strip(c) == "fiction") found = true;
  CHECK(found);
}

TEST_CASE("inversion consistency on golden pairs and fuzzed affix words") {
  auto patterns = registry();
  text::StringMap<const AdaptationPattern*> by_id;
  for (const auto& p : patterns) by_id[p.id] = &p;

  for (const auto& pair : bktest::load_golden_pairs()) {
    auto cands = donor_candidates(*by_id[pair.pattern_id], pair.lu);
    bool found = false;
    for (const auto& c : cands)
      if (text::fold_strip(c) == text::fold_strip(pair.source)) found = true;
    INFO(pair.pattern_id << " " << pair.lu);
    CHECK(found);
  }

  // Fuzz: build donors by appending donor affixes to random stems, apply the
  // pattern forward via matches' own transform, and require inversion.
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> len(3, 8);
  std::uniform_int_distribution<int> ch(0, 25);
  for (int iter = 0; iter < 500; ++iter) {
    std::string stem;
    for (int i = 0, n = len(rng); i < n; ++i)
      stem.push_back(static_cast<char>('a' + ch(rng)));
    for (const auto& p : patterns) {
      if (p.lexical() || p.edits[0].pos == AffixPos::PREFIX) continue;
      if (p.edits.size() > 1) continue;  // compound needs the inner site too
      std::string donor = stem + p.edits[0].donor_affix;
      std::string lu = stem + p.edits[0].recipient_affix;
      if (matches(p, lu, donor)) {
        auto cands = donor_candidates(p, lu);
        bool found = false;
        for (const auto& c : cands)
          if (text::fold_strip(c) == text::fold_strip(donor)) found = true;
        INFO(p.id << " stem=" << stem);
        CHECK(found);
      }
    }
  }
}

TEST_CASE("compiled index has no false negatives") {
  auto patterns = registry();
  PatternIndex index(patterns);
  auto pairs = bktest::load_golden_pairs();

  for (const auto& pair : pairs) {
    bool in_recipient = false, in_donor = false;
    for (const auto* p : index.lookup_recipient(pair.lu))
      if (p->id == pair.pattern_id) in_recipient = true;
    for (const auto* p : index.lookup_donor(pair.source))
      if (p->id == pair.pattern_id) in_donor = true;
    INFO(pair.pattern_id << " " << pair.lu);
    CHECK(in_recipient);
    CHECK(in_donor);
  }

  // Fuzzed completeness: any true match must appear in both lookups.
  std::mt19937 rng(13);
  std::uniform_int_distribution<int> len(2, 9);
  std::uniform_int_distribution<int> ch(0, 25);
  for (int iter = 0; iter < 1000; ++iter) {
    std::string stem;
    for (int i = 0, n = len(rng); i < n; ++i)
      stem.push_back(static_cast<char>('a' + ch(rng)));
    for (const auto& p : patterns) {
      if (p.lexical()) continue;
      const Edit& anchor = p.edits[0];
      std::string donor, lu;
      if (anchor.pos == AffixPos::PREFIX) {
        donor = anchor.donor_affix + stem;
        lu = anchor.recipient_affix + stem;
      } else if (p.edits.size() == 1) {
        donor = stem + anchor.donor_affix;
        lu = stem + anchor.recipient_affix;
      } else {
        donor = stem + p.edits[1].donor_affix + "ti" + anchor.donor_affix;
        lu = stem + p.edits[1].recipient_affix + "ti" + anchor.recipient_affix;
      }
      if (!matches(p, lu, donor)) continue;
      bool in_recipient = false, in_donor = false;
      for (const auto* q : index.lookup_recipient(lu))
        if (q->id == p.id) in_recipient = true;
      for (const auto* q : index.lookup_donor(donor))
        if (q->id == p.id) in_donor = true;
      INFO(p.id << " lu=" << lu << " donor=" << donor);
      REQUIRE(in_recipient);
      REQUIRE(in_donor);
    }
  }
}

TEST_CASE("every registry pattern is reachable from both index sides") {
  auto patterns = registry();
  PatternIndex index(patterns);
  for (const auto& p : patterns) {
    std::string lu = "stemm", donor = "stemm";
    if (!p.lexical()) {
      const Edit& anchor = p.edits[0];
      if (anchor.pos == AffixPos::PREFIX) {
        lu = anchor.recipient_affix + lu;
        donor = anchor.donor_affix + donor;
      } else {
        lu += anchor.recipient_affix;
        donor += anchor.donor_affix;
      }
    }
    bool in_recipient = false, in_donor = false;
    for (const auto* q : index.lookup_recipient(lu))
      if (q->id == p.id) in_recipient = true;
    for (const auto* q : index.lookup_donor(donor))
      if (q->id == p.id) in_donor = true;
    INFO(p.id);
    CHECK(in_recipient);
    CHECK(in_donor);
  }
}

TEST_CASE("index construction validates ids and degenerate inputs") {
  CHECK(compile_index({}).lookup_recipient("Motivatioun").empty());
  auto p1 = parse_pattern("on>oun");
  auto p2 = parse_pattern("eur>er");
  p1.id = "dup";
  p2.id = "dup";
  p1.donor_langs = {Lang::FR};
  p2.donor_langs = {Lang::FR};
  CHECK_THROWS_AS(PatternIndex({p1, p2}), ConfigError);
}

TEST_CASE("registry ships the decided class assignment") {
  auto patterns = registry();
  std::set<std::string> ortho, lexical;
  for (const auto& p : patterns) {
    if (p.klass == PatternClass::ORTHOGRAPHIC) ortho.insert(p.id);
    if (p.klass == PatternClass::LEXICAL) lexical.insert(p.id);
  }
  CHECK(ortho == std::set<std::string>{"on>oun", "le>el", "que>ck", "É>E"});
  CHECK(lexical == std::set<std::string>{"exact"});
}

TEST_CASE("registry rows validate class against the pattern shape") {
  std::istringstream bad("id\tspec\tklass\tdonor_langs\nexact\texact\tMORPHOLOGICAL\tFR\n");
  CHECK_THROWS_AS(load_registry(bad), ConfigError);
  std::istringstream bad2("x\ty>z\tNOPE\tFR\n");
  CHECK_THROWS_AS(load_registry(bad2), ParseError);
  std::istringstream bad3("x\ty>z\tMORPHOLOGICAL\tXX\n");
  CHECK_THROWS_AS(load_registry(bad3), ParseError);
}
