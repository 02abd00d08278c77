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
#include <cmath>
#include <random>

#include "fixtures.h"
#include "gibbsgen/eval.h"

using namespace gibbsgen;
using namespace gibbsgen::testing;

namespace {

// BLEU works on raw ids; map letters to arbitrary distinct ids.
Sentence toks(const std::string& text) {
  Sentence out;
  for (const auto& t : split_tokens(text)) {
    TokenId id = 0;
    for (char c : t) id = id * 131 + static_cast<unsigned char>(c);
    out.push_back(id);
  }
  return out;
}

Snapshot snap(int turn, std::vector<double> post) {
  Snapshot s;
  s.tokens = {Vocabulary::kUnk};
  s.turn = turn;
  s.posteriors = std::move(post);
  return s;
}

}  // namespace

TEST_CASE("bleu4 hand values") {
  // From tests/oracles/hand_values.py.
  CHECK(close_rel(bleu4(toks("a b c d e"), toks("a b c d f"), false), 0.7521206186172787));
  CHECK(close_rel(bleu4(toks("a b c"), toks("a b c d e"), true), 0.513417119032592));
  CHECK(bleu4(toks("a b c"), toks("a b c d e"), false) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(close_rel(bleu4(toks("the cat sat on the mat"), toks("the cat is on the mat"), false),
                  0.48549177170732344));
}

TEST_CASE("bleu4 identity, emptiness and zero overlap") {
  for (const char* s : {"a", "a b", "a b c d e f g", "x x x x"}) {
    CHECK(bleu4(toks(s), toks(s), false) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(bleu4(toks(s), toks(s), true) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(bleu4({}, toks("a b"), true) == 0.0);
  CHECK(bleu4(toks("q r s"), toks("a b c"), false) == 0.0);
}

TEST_CASE("brevity penalty is exactly exp(1 - r/c) for short candidates") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    Sentence cand(1 + rng() % 8), ref(1 + rng() % 8);
    for (auto& t : cand) t = static_cast<TokenId>(rng() % 4);
    for (auto& t : ref) t = static_cast<TokenId>(rng() % 4);
    const double plain = bleu4(cand, ref, false);
    const double bp = bleu4(cand, ref, true);
    CHECK(plain >= 0.0);
    CHECK(plain <= 1.0 + 1e-12);
    CHECK(bp <= plain);
    const double c = static_cast<double>(cand.size()), r = static_cast<double>(ref.size());
    if (c >= r) {
      CHECK(bp == plain);
    } else {
      CHECK(close_rel(bp, plain * std::exp(1.0 - r / c), 1e-12));
      if (plain > 0.0) CHECK(bp < plain);
    }

    // Relabeling tokens consistently leaves the score unchanged.
    auto pc = cand, pr = ref;
    for (auto& t : pc) t = 100 - t;
    for (auto& t : pr) t = 100 - t;
    CHECK(bleu4(pc, pr, true) == bp);
  }
}

TEST_CASE("avg_bleu is pairwise against same-label references") {
  const auto corpus = corpus_from(kSentimentSchema,
                                  "positive\ta b c d\npositive\ta b e f g\nnegative\tz z\n");
  const auto& v = corpus.vocab;
  const std::vector<GeneratedSentence> gen = {{ids(v, "a b c e"), {1}}};
  CHECK(close_rel(avg_bleu(gen, corpus, false), 0.5790185032381231));
  CHECK(close_rel(avg_bleu(gen, corpus, true), 0.5237186990059743));

  const std::vector<GeneratedSentence> self = {{ids(v, "z z"), {0}}};
  CHECK(avg_bleu(self, corpus, true) == doctest::Approx(1.0).epsilon(1e-12));

  const std::vector<GeneratedSentence> both = {gen[0], self[0]};
  CHECK(close_rel(avg_bleu(both, corpus, false), (0.5790185032381231 + 1.0) / 2));

  const auto one_sided = corpus_from(kSentimentSchema, "positive\ta b\n");
  CHECK_THROWS_AS(avg_bleu(self, one_sided, false), Error);
  CHECK_THROWS_AS(avg_bleu({}, corpus, false), Error);
}

TEST_CASE("valid ratio over sentences and snapshots") {
  const auto corpus = corpus_from(kSentimentSchema, synthetic_reviews(400, 60, 0.0));
  const auto discs = train_discriminators(corpus);
  std::vector<Sentence> sents;
  for (const auto& s : corpus.sentences) {
    if (s.labels[0] == 1) sents.push_back(s.tokens);
  }
  std::size_t pos = 0, neg = 0;
  for (const auto& s : sents) {
    pos += discs[0].posterior(s)[1] > 0.6;
    neg += discs[0].posterior(s)[0] > 0.6;
  }
  const double n = static_cast<double>(sents.size());
  CHECK(valid_ratio(sents, discs, std::vector<int>{1}, 0.6) == pos / n);
  CHECK(valid_ratio(sents, discs, std::vector<int>{0}, 0.6) == neg / n);
  CHECK(pos > neg);
  CHECK(valid_ratio(sents, {}, {}, 0.6) == 1.0);

  std::vector<Snapshot> snaps = {snap(1, {0.9}), snap(1, {0.2}), snap(2, {0.7}),
                                 snap(2, {0.61}), snap(3, {0.6})};
  CHECK(valid_ratio(snaps, 0.6) == doctest::Approx(0.6));
  auto reversed = snaps;
  std::reverse(reversed.begin(), reversed.end());
  CHECK(valid_ratio(reversed, 0.6) == valid_ratio(snaps, 0.6));
  CHECK_THROWS_AS(valid_ratio(std::span<const Snapshot>{}, 0.6), Error);

  const std::vector<Snapshot> sure = {snap(1, {1.0, 1.0})};
  CHECK(valid_ratio(sure, 0.6) == 1.0);
}

TEST_CASE("valid ratio curve groups snapshots by turn") {
  std::vector<Snapshot> snaps = {snap(1, {0.9}), snap(1, {0.2}), snap(2, {0.7}),
                                 snap(2, {0.61}), snap(3, {0.6})};
  const auto curve = valid_ratio_curve(snaps, 0.6);
  REQUIRE(curve.size() == 3);
  CHECK(curve[0] == std::pair<int, double>{1, 0.5});
  CHECK(curve[1] == std::pair<int, double>{2, 1.0});
  CHECK(curve[2] == std::pair<int, double>{3, 0.0});

  const std::vector<Snapshot> single = {snap(7, {0.9}), snap(7, {0.95})};
  CHECK(valid_ratio_curve(single, 0.6) == std::vector<std::pair<int, double>>{{7, 1.0}});
}

TEST_CASE("log-likelihood per word") {
  const auto corpus = plain_corpus(
      {"a b a", "b b", "a", "b a a b", "a a", "b", "a b", "b a b a", "a b b", "b a"});
  const auto bigram = train_ngram(corpus, 2);
  const auto trigram = train_ngram(corpus, 3);
  const Sentence a = {4}, ab = {4, 5};

  CHECK(loglik_per_word(std::vector<Sentence>{a}, bigram, false)[0] ==
        cond_logprob(bigram, Sentence{}, 4));
  CHECK(close_rel(loglik_per_word(std::vector<Sentence>{a}, bigram, true)[0],
                  cond_logprob(bigram, Sentence{}, 4) +
                      cond_logprob(bigram, a, Vocabulary::kEos)));
  // From tests/oracles/hand_values.py.
  CHECK(close_rel(loglik_per_word(std::vector<Sentence>{ab}, trigram)[0], -1.1344573002893372));

  const auto twice = loglik_per_word(std::vector<Sentence>{ab, ab}, trigram);
  CHECK(twice[0] == twice[1]);
  CHECK_THROWS_AS(loglik_per_word(std::vector<Sentence>{Sentence{}}, trigram), Error);
}
