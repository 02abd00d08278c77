// Copyright 2026 The gibbsgen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GIBBSGEN_TESTS_FIXTURES_H_
#define GIBBSGEN_TESTS_FIXTURES_H_

#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gibbsgen/corpus.h"

namespace gibbsgen::testing {

inline ConstraintSchema schema_from(const std::string& text) {
  std::istringstream in(text);
  return parse_schema(in);
}

inline Corpus corpus_from(const std::string& schema_text,
                          const std::string& corpus_text, int min_count = 1) {
  const auto schema = schema_from(schema_text);
  std::istringstream in(corpus_text);
  return make_corpus(parse_corpus_records(in, schema, "<test>"), schema, min_count);
}

// Unlabeled corpus (zero constraint dimensions) from one sentence per
// line.
inline Corpus plain_corpus(const std::vector<std::string>& lines,
                           int min_count = 1) {
  std::string text;
  for (const auto& l : lines) text += l + "\n";
  return corpus_from("", text, min_count);
}

inline Sentence ids(const Vocabulary& vocab, const std::string& text) {
  const auto toks = split_tokens(text);
  return encode(toks, vocab);
}

inline bool close_rel(double a, double b, double rel = 1e-9) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

// Review-style sentences with a binary sentiment label. Sentences come
// from a handful of templates whose adjective and verb slots carry the
// sentiment; a fraction `noise` of sentences mixes in an opposite-polarity
// clause, so the classes overlap the way real reviews do.
inline std::string synthetic_reviews(std::size_t count, std::uint64_t seed,
                                     double noise = 0.1) {
  static const std::vector<std::string> nouns = {"movie", "film", "story", "plot",
                                                 "cast", "script", "ending"};
  static const std::vector<std::string> intens = {"very", "really", "quite", "so", "truly"};
  static const std::vector<std::vector<std::string>> adj = {
      {"bad", "boring", "dull", "awful", "weak", "terrible", "predictable"},
      {"good", "great", "funny", "charming", "brilliant", "wonderful", "moving"}};
  static const std::vector<std::vector<std::string>> verbs = {
      {"hated", "disliked", "regretted"}, {"loved", "enjoyed", "liked"}};
  static const std::vector<std::string> sup = {"worst", "best"};
  static const std::vector<std::string> label = {"negative", "positive"};

  std::mt19937_64 rng(seed);
  const auto pick = [&rng](const std::vector<std::string>& v) -> const std::string& {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
  };
  std::bernoulli_distribution coin(0.5);
  std::bernoulli_distribution mixed(noise);
  std::uniform_int_distribution<int> tmpl(0, 6);

  std::string out;
  for (std::size_t s = 0; s < count; ++s) {
    const int y = coin(rng) ? 1 : 0;
    std::string text;
    switch (tmpl(rng)) {
      case 0:
        text = "the " + pick(nouns) + " is " + pick(intens) + " " + pick(adj[y]) + " .";
        break;
      case 1:
        text = "i think the " + pick(nouns) + " was " + pick(intens) + " " + pick(adj[y]) + " .";
        break;
      case 2:
        text = "i " + pick(verbs[y]) + " this " + pick(nouns) + " so much .";
        break;
      case 3:
        text = "a " + pick(adj[y]) + " " + pick(nouns) + " with a " + pick(adj[y]) + " " +
               pick(nouns) + " .";
        break;
      case 4:
        text = "one of the " + sup[y] + " films of the year .";
        break;
      case 5:
        text = "it 's a " + pick(adj[y]) + " and " + pick(adj[y]) + " " + pick(nouns) + " .";
        break;
      default:
        text = "the " + pick(nouns) + " is " + pick(adj[y]) + " and the " + pick(nouns) +
               " is " + pick(adj[y]) + " .";
        break;
    }
    if (mixed(rng)) {
      text.pop_back();
      text += "but the " + pick(nouns) + " is " + pick(adj[1 - y]) + " .";
    }
    out += label[y] + "\t" + text + "\n";
  }
  return out;
}

inline const char* kSentimentSchema = "sentiment: negative,positive\n";

}  // namespace gibbsgen::testing

#endif  // GIBBSGEN_TESTS_FIXTURES_H_
