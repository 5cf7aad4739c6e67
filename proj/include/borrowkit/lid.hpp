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
#include <fstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "borrowkit/corpus.hpp"
#include "borrowkit/loanlex.hpp"
#include "borrowkit/log.hpp"
#include "borrowkit/text.hpp"

// Sentence-level language identification with a length-adaptive gate, plus
// token-level refinement with lexicon fallback.
//
// The classifier is a multinomial model over character 1..4-grams with
// additive smoothing. It is a dependency-free stand-in for an external
// sentence classifier and sits behind SentenceClassifier so one can be
// swapped in.

namespace borrowkit {

struct Classification {
  Lang lang = Lang::OTHER;
  double posterior = 0.0;
};

// Pluggable sentence classifier interface.
class SentenceClassifier {
 public:
  virtual ~SentenceClassifier() = default;
  virtual Classification classify(std::string_view sentence) const = 0;
};

class CharNgramModel final : public SentenceClassifier {
 public:
  static constexpr int kMinOrder = 1;
  static constexpr int kMaxOrder = 4;
  static constexpr std::size_t kMinSentencesPerClass = 50;
  static constexpr char kMagic[] = "BKLID1";

  CharNgramModel() = default;

  /// Trains from (text, label) pairs. Deterministic: counts only.
  /// Requires at least two classes with kMinSentencesPerClass sentences each.
  static CharNgramModel train(
      const std::vector<std::pair<std::string, Lang>>& sentences,
      double alpha = 0.1) {
    if (alpha <= 0) throw ConfigError("smoothing constant must be positive");
    CharNgramModel m;
    m.alpha_ = alpha;

    std::array<std::uint64_t, 6> class_sentences{};
    for (const auto& [txt, lang] : sentences)
      ++class_sentences[static_cast<std::size_t>(lang)];
    for (Lang lang : {Lang::LU, Lang::DE, Lang::FR, Lang::EN, Lang::OTHER}) {
      auto n = class_sentences[static_cast<std::size_t>(lang)];
      if (n == 0) continue;
      if (n < kMinSentencesPerClass)
        throw ConfigError("class " + std::string(to_string(lang)) + " has only " +
                          std::to_string(n) + " sentences (need " +
                          std::to_string(kMinSentencesPerClass) + ")");
      m.classes_.push_back(lang);
    }
    if (m.classes_.size() < 2)
      throw ConfigError("training data must contain at least two classes");

    for (const auto& [txt, lang] : sentences) {
      std::size_t c = m.class_slot(lang);
      ++m.sentence_counts_[c];
      std::string norm = text::collapse_ws(txt);
      for_each_gram(norm, [&](std::string_view gram) {
        auto [it, inserted] = m.counts_.try_emplace(std::string(gram));
        it->second[c] += 1;
      });
    }
    m.finalize();
    return m;
  }

  Classification classify(std::string_view sentence) const override {
    std::string norm = text::collapse_ws(sentence);
    if (norm.empty()) return {Lang::OTHER, 0.0};
    return classify_normalized(norm, false);
  }

  /// Full posterior distribution over the model's classes.
  std::vector<std::pair<Lang, double>> posteriors(std::string_view sentence) const {
    std::vector<std::pair<Lang, double>> out;
    std::string norm = text::collapse_ws(sentence);
    if (norm.empty()) return out;
    std::array<double, kMaxClasses> score{};
    for (std::size_t c = 0; c < classes_.size(); ++c) score[c] = log_priors_[c];
    for_each_gram(norm, [&](std::string_view gram) {
      auto it = scores_.find(gram);
      for (std::size_t c = 0; c < classes_.size(); ++c)
        score[c] += it == scores_.end() ? default_log_[c] : it->second[c];
    });
    double max_score = *std::max_element(score.begin(), score.begin() + classes_.size());
    double z = 0.0;
    for (std::size_t c = 0; c < classes_.size(); ++c)
      z += std::exp(score[c] - max_score);
    for (std::size_t c = 0; c < classes_.size(); ++c)
      out.emplace_back(classes_[c], std::exp(score[c] - max_score) / z);
    return out;
  }

  /// Token-level classification restricted to {LU, DE, FR, EN}.
  Classification classify_token(std::string_view token) const {
    std::string norm = text::collapse_ws(token);
    if (norm.empty()) return {Lang::OTHER, 0.0};
    return classify_normalized(norm, true);
  }

  const std::vector<Lang>& classes() const { return classes_; }
  double alpha() const { return alpha_; }

  // -- serialization: magic line followed by a JSON body (counts, so a
  //    save/load round trip is exact and files are byte-stable).

  std::string serialize() const {
    nlohmann::json grams;
    for (const auto& [gram, counts] : counts_) {
      nlohmann::json row = nlohmann::json::array();
      for (std::size_t c = 0; c < classes_.size(); ++c) row.push_back(counts[c]);
      grams[gram] = std::move(row);
    }
    nlohmann::json j{{"version", 1},
                     {"alpha", alpha_},
                     {"order_min", kMinOrder},
                     {"order_max", kMaxOrder},
                     {"classes", nlohmann::json::array()},
                     {"sentences", nlohmann::json::array()},
                     {"grams", std::move(grams)}};
    for (Lang lang : classes_) j["classes"].push_back(std::string(to_string(lang)));
    for (std::size_t c = 0; c < classes_.size(); ++c)
      j["sentences"].push_back(sentence_counts_[c]);
    return std::string(kMagic) + "\n" + j.dump() + "\n";
  }

  static CharNgramModel deserialize(std::istream& in) {
    std::string magic;
    if (!std::getline(in, magic) || magic != kMagic)
      throw ConfigError("model file is missing the BKLID1 header");
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ConfigError("model file body is not valid JSON");
    CharNgramModel m;
    try {
      m.alpha_ = j.at("alpha").get<double>();
      for (const auto& c : j.at("classes")) {
        auto lang = lang_from(c.get<std::string>());
        if (!lang) throw ConfigError("model file has an unknown class");
        m.classes_.push_back(*lang);
      }
      if (m.classes_.empty() || m.classes_.size() > kMaxClasses)
        throw ConfigError("model file has a bad class list");
      auto sentences = j.at("sentences");
      for (std::size_t c = 0; c < m.classes_.size(); ++c)
        m.sentence_counts_[c] = sentences.at(c).get<std::uint64_t>();
      for (const auto& [gram, row] : j.at("grams").items()) {
        auto [it, inserted] = m.counts_.try_emplace(gram);
        for (std::size_t c = 0; c < m.classes_.size() && c < row.size(); ++c)
          it->second[c] = row.at(c).get<std::uint64_t>();
      }
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("model file is malformed: ") + e.what());
    }
    if (m.alpha_ <= 0) throw ConfigError("model file has a non-positive alpha");
    m.finalize();
    return m;
  }

  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write model file: " + path);
    out << serialize();
  }

  static CharNgramModel load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open model file: " + path);
    return deserialize(in);
  }

 private:
  static constexpr std::size_t kMaxClasses = 5;
  using CountRow = std::array<std::uint64_t, kMaxClasses>;
  using ScoreRow = std::array<float, kMaxClasses>;

  template <typename Fn>
  static void for_each_gram(std::string_view s, Fn&& fn) {
    // Codepoint start offsets, so grams never cut a UTF-8 sequence.
    std::vector<std::size_t> starts;
    starts.reserve(s.size() + 1);
    for (std::size_t i = 0; i < s.size();) {
      starts.push_back(i);
      text::decode(s, i);
    }
    starts.push_back(s.size());
    const std::size_t n = starts.size() - 1;
    for (std::size_t i = 0; i < n; ++i) {
      for (int order = kMinOrder; order <= kMaxOrder; ++order) {
        if (i + order > n) break;
        fn(s.substr(starts[i], starts[i + order] - starts[i]));
      }
    }
  }

  std::size_t class_slot(Lang lang) const {
    for (std::size_t c = 0; c < classes_.size(); ++c)
      if (classes_[c] == lang) return c;
    throw ConfigError("language not covered by the model");
  }

  void finalize() {
    std::array<std::uint64_t, kMaxClasses> totals{};
    for (const auto& [gram, counts] : counts_)
      for (std::size_t c = 0; c < classes_.size(); ++c) totals[c] += counts[c];
    const double vocab = static_cast<double>(counts_.size());
    std::uint64_t total_sentences = 0;
    for (std::size_t c = 0; c < classes_.size(); ++c)
      total_sentences += sentence_counts_[c];
    for (std::size_t c = 0; c < classes_.size(); ++c) {
      const double denom = static_cast<double>(totals[c]) + alpha_ * vocab;
      default_log_[c] = static_cast<float>(std::log(alpha_ / denom));
      log_priors_[c] = static_cast<float>(
          std::log(static_cast<double>(sentence_counts_[c]) /
                   static_cast<double>(total_sentences)));
      denom_log_[c] = std::log(denom);
    }
    scores_.clear();
    scores_.reserve(counts_.size());
    for (const auto& [gram, counts] : counts_) {
      ScoreRow row{};
      for (std::size_t c = 0; c < classes_.size(); ++c)
        row[c] = static_cast<float>(
            std::log(static_cast<double>(counts[c]) + alpha_) - denom_log_[c]);
      scores_.emplace(gram, row);
    }
  }

  Classification classify_normalized(std::string_view norm, bool token_mode) const {
    std::array<double, kMaxClasses> score{};
    for (std::size_t c = 0; c < classes_.size(); ++c) score[c] = log_priors_[c];
    for_each_gram(norm, [&](std::string_view gram) {
      auto it = scores_.find(gram);
      if (it == scores_.end()) {
        for (std::size_t c = 0; c < classes_.size(); ++c)
          score[c] += default_log_[c];
      } else {
        for (std::size_t c = 0; c < classes_.size(); ++c)
          score[c] += it->second[c];
      }
    });

    double best = -1e300;
    std::size_t best_c = 0;
    double max_score = -1e300;
    bool any = false;
    for (std::size_t c = 0; c < classes_.size(); ++c) {
      if (token_mode && classes_[c] == Lang::OTHER) continue;
      any = true;
      if (score[c] > max_score) max_score = score[c];
    }
    if (!any) return {Lang::OTHER, 0.0};
    double z = 0.0;
    for (std::size_t c = 0; c < classes_.size(); ++c) {
      if (token_mode && classes_[c] == Lang::OTHER) continue;
      z += std::exp(score[c] - max_score);
      if (score[c] > best) {
        best = score[c];
        best_c = c;
      }
    }
    double posterior = std::exp(best - max_score) / z;
    return {classes_[best_c], posterior};
  }

  std::vector<Lang> classes_;
  double alpha_ = 0.1;
  text::StringMap<CountRow> counts_;
  text::StringMap<ScoreRow> scores_;
  std::array<std::uint64_t, kMaxClasses> sentence_counts_{};
  std::array<float, kMaxClasses> default_log_{};
  std::array<float, kMaxClasses> log_priors_{};
  std::array<double, kMaxClasses> denom_log_{};
};

// ---------------------------------------------------------------------------
// Length-adaptive gate

struct GateConfig {
  double base_threshold = 0.50;
  double max_threshold = 0.80;
  std::size_t short_len = 3;   // token count at/below which max applies
  std::size_t long_len = 15;   // token count at/above which base applies

  void validate() const {
    if (!(0 < base_threshold && base_threshold <= max_threshold &&
          max_threshold < 1))
      throw ConfigError("gate thresholds must satisfy 0 < base <= max < 1");
    if (!(short_len < long_len))
      throw ConfigError("gate lengths must satisfy short_len < long_len");
  }
};

/// Posterior threshold for a sentence of `token_count` tokens: max_threshold
/// up to short_len, base_threshold from long_len, linear in between.
inline double gate_threshold(const GateConfig& config, std::size_t token_count) {
  if (token_count <= config.short_len) return config.max_threshold;
  if (token_count >= config.long_len) return config.base_threshold;
  const double span = static_cast<double>(config.long_len - config.short_len);
  const double t = static_cast<double>(token_count - config.short_len) / span;
  return config.max_threshold + (config.base_threshold - config.max_threshold) * t;
}

/// Applies the gate: PROCESS iff the predicted class is LU and the posterior
/// clears the length-adaptive threshold. Updates the sentence in place.
inline GateDecision gate(const SentenceClassifier& classifier,
                         const GateConfig& config, Sentence& sentence) {
  Classification c = classifier.classify(sentence.text);
  sentence.lang = c.lang;
  sentence.posterior = c.posterior;
  const double threshold = gate_threshold(config, sentence.tokens.size());
  sentence.gate = (c.lang == Lang::LU && c.posterior >= threshold)
                      ? GateDecision::PROCESS
                      : GateDecision::ROUTE_OTHER;
  return sentence.gate;
}

// ---------------------------------------------------------------------------
// Token-level refinement

// Priority: (1) lexicon hit — a donor-form hit fixes the donor language, an
// LU-form hit fixes LU (donor form wins when both keys collide, which happens
// for unadapted entries); (2) character n-gram classification over
// {LU, DE, FR, EN}; (3) posterior below `fallback` falls back to the
// sentence language.
inline Lang token_lid(const CharNgramModel& model, const LexiconIndex& lexicon,
                      const Token& token, Lang sentence_lang,
                      double fallback = 0.4) {
  if (token.neutral()) return Lang::NEUTRAL;
  if (!lexicon.empty()) {
    if (const LexiconEntry* e = lexicon.first_donor_normalized(token.normalized))
      return e->donor;
    if (lexicon.first_lu_normalized(token.normalized)) return Lang::LU;
  }
  Classification c = model.classify_token(token.surface);
  if (c.posterior < fallback)
    return sentence_lang == Lang::NEUTRAL ? Lang::OTHER : sentence_lang;
  return c.lang;
}

}  // namespace borrowkit
