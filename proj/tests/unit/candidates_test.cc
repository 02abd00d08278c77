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

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "fixtures.h"
#include "gibbsgen/candidates.h"

using namespace gibbsgen;
using namespace gibbsgen::testing;

namespace {

// Ranking of all substitutions at i by full-sentence likelihood, ties by id.
std::vector<TokenId> brute_force_ranking(const NGramModel& model, const Sentence& s,
                                         std::size_t i, const std::vector<TokenId>& words) {
  std::vector<std::pair<double, TokenId>> scored;
  for (TokenId w : words) {
    auto t = s;
    t[i] = w;
    scored.emplace_back(sentence_logprob(model, t, false).total_logprob, w);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::vector<TokenId> out;
  for (const auto& [score, id] : scored) out.push_back(id);
  return out;
}

std::vector<TokenId> ids_of(const std::vector<Candidate>& cands) {
  std::vector<TokenId> out;
  for (const auto& c : cands) out.push_back(c.id);
  return out;
}

}  // namespace

TEST_CASE("three-word bigram: ranking at the middle slot matches enumeration") {
  const auto corpus = plain_corpus({"a c b", "a c b", "a a b", "b b", "c a", "a c"});
  const auto model = train_ngram(corpus, 2);
  const auto& v = corpus.vocab;
  const Sentence s = {v.id("a"), v.id("a"), v.id("b")};
  const std::vector<TokenId> abc = {v.id("a"), v.id("b"), v.id("c")};
  // Restricting to the three real words: the full ranking includes UNK too.
  const auto full = ids_of(propose(model, s, 1, v.num_words()));
  std::vector<TokenId> restricted;
  for (TokenId id : full) {
    if (id != Vocabulary::kUnk) restricted.push_back(id);
  }
  CHECK(restricted == brute_force_ranking(model, s, 1, abc));
  CHECK(full.front() == v.id("c"));
}

TEST_CASE("k = |V| ranks every word like the full sentence likelihood") {
  const auto corpus = corpus_from(kSentimentSchema, synthetic_reviews(300, 41));
  const auto words = corpus.vocab.word_ids();
  std::mt19937_64 rng(2);
  for (int order : {2, 3}) {
    const auto model = train_ngram(corpus, order);
    for (int trial = 0; trial < 25; ++trial) {
      Sentence s(1 + rng() % 7);
      for (auto& id : s) id = words[rng() % words.size()];
      const std::size_t i = rng() % s.size();
      const auto cands = propose(model, s, i, words.size());
      REQUIRE(cands.size() == words.size());
      // Window and full scores differ by a constant, so only near-ties
      // could reorder; compare score differences instead of raw order.
      const auto expected = brute_force_ranking(model, s, i, words);
      for (std::size_t r = 0; r < cands.size(); ++r) {
        if (cands[r].id != expected[r]) {
          auto a = s, b = s;
          a[i] = cands[r].id;
          b[i] = expected[r];
          CHECK(std::abs(sentence_logprob(model, a, false).total_logprob -
                         sentence_logprob(model, b, false).total_logprob) <= 1e-9);
        }
      }
    }
  }
}

TEST_CASE("candidate lists are sorted, distinct and hold the incumbent") {
  const auto corpus = corpus_from(kSentimentSchema, synthetic_reviews(300, 43));
  const auto model = train_ngram(corpus, 3);
  const auto words = corpus.vocab.word_ids();
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    Sentence s(1 + rng() % 9);
    for (auto& id : s) id = words[rng() % words.size()];
    const std::size_t i = rng() % s.size();
    const std::size_t k = 1 + rng() % 8;
    const auto cands = propose(model, s, i, k);
    CHECK(cands.size() <= k + 1);
    CHECK(cands.size() >= k);
    std::set<TokenId> seen;
    for (std::size_t r = 0; r < cands.size(); ++r) {
      CHECK(seen.insert(cands[r].id).second);
      CHECK(cands[r].score == local_window_logprob(model, s, i, cands[r].id));
      if (r > 0) CHECK(cands[r - 1].score >= cands[r].score);
    }
    CHECK(seen.count(s[i]) == 1);
  }
}

TEST_CASE("k = 1 at the argmax returns only the incumbent") {
  const auto corpus = plain_corpus({"x y z", "x y z", "x y z", "x z z"});
  const auto model = train_ngram(corpus, 2);
  const auto& v = corpus.vocab;
  const Sentence s = {v.id("x"), v.id("y"), v.id("z")};
  const auto cands = propose(model, s, 1, 1);
  REQUIRE(cands.size() == 1);
  CHECK(cands[0].id == v.id("y"));

  const Sentence t = {v.id("x"), v.id("x"), v.id("z")};
  const auto two = propose(model, t, 1, 1);
  CHECK(ids_of(two) == std::vector<TokenId>{v.id("y"), v.id("x")});
}

TEST_CASE("propose rejects bad arguments") {
  const auto corpus = plain_corpus({"a b"});
  const auto model = train_ngram(corpus, 2);
  const Sentence s = {4, 5};
  CHECK_THROWS_AS(propose(model, s, 2, 1), Error);
  CHECK_THROWS_AS(propose(model, s, 0, 0), Error);
}
