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

#include <cmath>
#include <map>

#include "fixtures.h"
#include "gibbsgen/oracle.h"
#include "gibbsgen/sampler.h"

using namespace gibbsgen;
using namespace gibbsgen::testing;

namespace {

// Enumerated full conditional at position i over `words`.
std::vector<double> full_conditional(const NGramModel& model,
                                     std::span<const Discriminator> discs,
                                     std::span<const int> labels, const Sentence& s,
                                     std::size_t i, const std::vector<TokenId>& words) {
  std::vector<double> logw;
  for (TokenId w : words) {
    auto t = s;
    t[i] = w;
    logw.push_back(sentence_logprob(model, t, false).total_logprob +
                   joint_constraint_logprob(discs, t, labels));
  }
  const double z = log_sum_exp(logw);
  std::vector<double> p;
  for (double x : logw) p.push_back(std::exp(x - z));
  return p;
}

std::vector<std::uint64_t> step_counts(const NGramModel& model,
                                       std::span<const Discriminator> discs,
                                       std::span<const int> labels, const Sentence& s,
                                       std::size_t i, const std::vector<TokenId>& words,
                                       int trials, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::uint64_t> counts(words.size());
  for (int t = 0; t < trials; ++t) {
    const auto next = gibbs_step(s, i, model, discs, labels, words.size(), rng);
    const auto it = std::find(words.begin(), words.end(), next[i]);
    REQUIRE(it != words.end());
    ++counts[it - words.begin()];
  }
  return counts;
}

Snapshot snap(double lm, std::vector<double> post) {
  Snapshot s;
  s.tokens = {Vocabulary::kUnk};
  s.lm_logprob = lm;
  s.posteriors = std::move(post);
  return s;
}

}  // namespace

TEST_CASE("seed takes a training segment, truncated or padded with UNK") {
  const auto eight = plain_corpus({"w1 w2 w3 w4 w5 w6 w7 w8"});
  Rng rng(1);
  const auto full = eight.sentences[0].tokens;
  CHECK(make_seed(eight, 8, rng) == full);

  auto padded = full;
  padded.push_back(Vocabulary::kUnk);
  padded.push_back(Vocabulary::kUnk);
  CHECK(make_seed(eight, 10, rng) == padded);
  CHECK(make_seed(eight, 5, rng) == Sentence(full.begin(), full.begin() + 5));

  // Longer sentences contribute only their first eight words.
  const auto twelve = plain_corpus({"w1 w2 w3 w4 w5 w6 w7 w8 w9 w10 w11 w12"});
  const auto long_seed = make_seed(twelve, 10, rng);
  CHECK(std::count(long_seed.begin(), long_seed.end(), Vocabulary::kUnk) == 2);

  const auto shorter = plain_corpus({"a b c"});
  CHECK(make_seed(shorter, 5, rng) ==
        Sentence{4, 5, 6, Vocabulary::kUnk, Vocabulary::kUnk});
}

TEST_CASE("seed sentence is chosen uniformly") {
  const auto corpus = plain_corpus({"a", "b", "c", "d"});
  Rng rng(9);
  std::map<TokenId, int> counts;
  for (int t = 0; t < 8000; ++t) ++counts[make_seed(corpus, 1, rng)[0]];
  for (const auto& [id, n] : counts) CHECK(std::abs(n / 8000.0 - 0.25) < 0.02);
}

TEST_CASE("unconstrained step samples the LM full conditional") {
  // Five content words plus UNK: a six-token candidate universe.
  const auto corpus = plain_corpus({"a b c", "a c c d", "b a e", "e d c b", "a a b", "c e"});
  const auto model = train_ngram(corpus, 2);
  const auto words = corpus.vocab.word_ids();
  REQUIRE(words.size() == 6);
  const Sentence s = ids(corpus.vocab, "a b c d");
  for (std::size_t i : {0u, 2u, 3u}) {
    const auto p = full_conditional(model, {}, {}, s, i, words);
    const auto counts = step_counts(model, {}, {}, s, i, words, 10000, 100 + i);
    CHECK(tv_distance(p, counts) < 0.01);
  }
}

TEST_CASE("constrained step samples the LM times constraint conditional") {
  const auto corpus = corpus_from(kSentimentSchema,
                                  "positive\ta b c\npositive\ta c c d\nnegative\tb a e\n"
                                  "negative\te d c b\npositive\ta a b\nnegative\tc e\n");
  const auto model = train_ngram(corpus, 3);
  const auto discs = train_discriminators(corpus);
  const auto words = corpus.vocab.word_ids();
  const Sentence s = ids(corpus.vocab, "a b c d");
  for (int label : {0, 1}) {
    const std::vector<int> labels = {label};
    const auto p = full_conditional(model, discs, labels, s, 1, words);
    const auto counts = step_counts(model, discs, labels, s, 1, words, 10000, 7 + label);
    CHECK(tv_distance(p, counts) < 0.01);
  }
}

TEST_CASE("a single candidate leaves the state unchanged") {
  const auto corpus = plain_corpus({"x y z", "x y z", "x y z"});
  const auto model = train_ngram(corpus, 2);
  const Sentence s = ids(corpus.vocab, "x y z");
  Rng rng(3);
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (int t = 0; t < 50; ++t) CHECK(gibbs_step(s, i, model, {}, {}, 1, rng) == s);
  }
}

TEST_CASE("two equally weighted candidates split evenly") {
  const auto corpus = plain_corpus({"a", "b"});
  const auto model = train_ngram(corpus, 2);
  const Sentence s = ids(corpus.vocab, "a");
  Rng rng(5);
  int a = 0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    const auto next = gibbs_step(s, 0, model, {}, {}, 2, rng);
    REQUIRE((next[0] == s[0] || next[0] == corpus.vocab.id("b")));
    a += next[0] == s[0];
  }
  CHECK(std::abs(static_cast<double>(a) / trials - 0.5) <= 0.02);
}

TEST_CASE("run records one snapshot per position update after burn-in") {
  const auto corpus = corpus_from(kSentimentSchema, synthetic_reviews(200, 19));
  const auto model = train_ngram(corpus, 3);
  const auto discs = train_discriminators(corpus);

  SamplerConfig config;
  config.turns = 12;
  config.burn_in = 3;
  config.length = 6;
  config.labels = {1};
  config.seed = 77;
  const auto result = run(config, corpus, model, discs);
  REQUIRE(result.snapshots.size() == 9u * 6u);
  CHECK(result.total_count == result.snapshots.size());
  CHECK(result.snapshots.front().turn == 4);
  CHECK(result.snapshots.back().turn == 12);

  std::size_t valid = 0;
  for (std::size_t s = 0; s < result.snapshots.size(); ++s) {
    const auto& sn = result.snapshots[s];
    CHECK(sn.position == static_cast<int>(s % 6));
    CHECK(sn.tokens.size() == 6);
    CHECK(std::isfinite(sn.lm_logprob));
    CHECK(sn.lm_logprob == sentence_logprob(model, sn.tokens, true).total_logprob);
    for (double p : sn.posteriors) CHECK((p >= 0.0 && p <= 1.0));
    valid += sn.valid(config.threshold);
    if (s > 0) {
      const auto& prev = result.snapshots[s - 1].tokens;
      int diff = 0;
      for (std::size_t i = 0; i < 6; ++i) diff += prev[i] != sn.tokens[i];
      CHECK(diff <= 1);
      for (std::size_t i = 0; i < 6; ++i) {
        if (prev[i] != sn.tokens[i]) CHECK(static_cast<int>(i) == sn.position);
      }
    }
  }
  CHECK(result.valid_count == valid);
  REQUIRE(result.output.has_value());

  config.turns = 1;
  config.burn_in = 0;
  config.length = 1;
  CHECK(run(config, corpus, model, discs).snapshots.size() == 1);
}

TEST_CASE("random scan keeps the snapshot count") {
  const auto corpus = corpus_from(kSentimentSchema, synthetic_reviews(100, 20));
  const auto model = train_ngram(corpus, 2);
  const auto discs = train_discriminators(corpus);
  SamplerConfig config;
  config.turns = 5;
  config.burn_in = 1;
  config.length = 4;
  config.labels = {0};
  config.random_scan = true;
  CHECK(run(config, corpus, model, discs).snapshots.size() == 16);
}

TEST_CASE("fixed seed gives identical results") {
  const auto corpus = corpus_from(kSentimentSchema, synthetic_reviews(200, 21));
  const auto model = train_ngram(corpus, 3);
  const auto discs = train_discriminators(corpus);
  SamplerConfig config;
  config.turns = 20;
  config.burn_in = 5;
  config.labels = {0};
  config.seed = 1234;
  const auto a = run(config, corpus, model, discs);
  const auto b = run(config, corpus, model, discs);
  CHECK(a == b);
  config.seed = 1235;
  CHECK_FALSE(run(config, corpus, model, discs) == a);
}

TEST_CASE("select_output picks the most likely valid snapshot") {
  CHECK_FALSE(select_output({}, 0.6).has_value());

  std::vector<Snapshot> one = {snap(-3.0, {0.9})};
  auto pick = select_output(one, 0.6);
  REQUIRE(pick);
  CHECK(pick->index == 0);
  CHECK(pick->valid);

  std::vector<Snapshot> two = {snap(-10.0, {0.7}), snap(-5.0, {0.65}), snap(-1.0, {0.5})};
  pick = select_output(two, 0.6);
  CHECK(pick->index == 1);
  CHECK(pick->valid);

  std::vector<Snapshot> ties = {snap(-2.0, {0.4}), snap(-5.0, {0.9}), snap(-5.0, {0.95})};
  CHECK(select_output(ties, 0.6)->index == 1);

  // Threshold is strict and applies to every dimension.
  std::vector<Snapshot> none = {snap(-1.0, {0.6, 0.99}), snap(-2.0, {0.59, 0.59}),
                                snap(-3.0, {0.9, 0.2})};
  pick = select_output(none, 0.6);
  CHECK(pick->index == 0);
  CHECK_FALSE(pick->valid);

  std::vector<Snapshot> unconstrained = {snap(-4.0, {}), snap(-2.0, {})};
  pick = select_output(unconstrained, 0.6);
  CHECK(pick->index == 1);
  CHECK(pick->valid);
}

TEST_CASE("config validation") {
  SamplerConfig ok;
  CHECK_NOTHROW(ok.validate());
  auto bad = ok;
  bad.burn_in = bad.turns;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = ok;
  bad.length = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = ok;
  bad.candidates = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = ok;
  bad.threshold = 1.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}
