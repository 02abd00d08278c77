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

#include "gibbsgen/eval.h"

#include <algorithm>
#include <cmath>
#include <map>

namespace gibbsgen {
namespace {

std::map<std::vector<TokenId>, int> ngram_counts(std::span<const TokenId> s,
                                                 std::size_t n) {
  std::map<std::vector<TokenId>, int> counts;
  for (std::size_t i = 0; i + n <= s.size(); ++i) {
    ++counts[std::vector<TokenId>(s.begin() + i, s.begin() + i + n)];
  }
  return counts;
}

}  // namespace

double bleu4(std::span<const TokenId> candidate,
             std::span<const TokenId> reference, bool with_bp) {
  if (candidate.empty()) return 0.0;
  double log_sum = 0.0;
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto cand = ngram_counts(candidate, n);
    const auto ref = ngram_counts(reference, n);
    int matches = 0;
    int total = 0;
    for (const auto& [gram, c] : cand) {
      total += c;
      const auto it = ref.find(gram);
      if (it != ref.end()) matches += std::min(c, it->second);
    }
    double p = 0.0;
    if (n == 1) {
      p = static_cast<double>(matches) / static_cast<double>(total);
    } else {
      p = (matches + 1.0) / (total + 1.0);
    }
    if (p == 0.0) return 0.0;
    log_sum += std::log(p);
  }
  double score = std::exp(log_sum / 4.0);
  if (with_bp) {
    const double c = static_cast<double>(candidate.size());
    const double r = static_cast<double>(reference.size());
    score *= std::min(1.0, std::exp(1.0 - r / c));
  }
  return score;
}

double avg_bleu(std::span<const GeneratedSentence> generated,
                const Corpus& corpus, bool with_bp) {
  if (generated.empty()) throw Error("no generated sentences to score");
  std::map<std::vector<int>, std::vector<const Sentence*>> refs;
  for (const auto& s : corpus.sentences) refs[s.labels].push_back(&s.tokens);
  double total = 0.0;
  for (const auto& g : generated) {
    const auto it = refs.find(g.labels);
    if (it == refs.end()) {
      throw Error("no reference sentences for labels '" +
                  corpus.schema.format_labels(g.labels) + "'");
    }
    double sum = 0.0;
    for (const Sentence* ref : it->second) sum += bleu4(g.tokens, *ref, with_bp);
    total += sum / static_cast<double>(it->second.size());
  }
  return total / static_cast<double>(generated.size());
}

double valid_ratio(std::span<const Sentence> sentences,
                   std::span<const Discriminator> discs,
                   std::span<const int> labels, double threshold) {
  if (sentences.empty()) throw Error("valid ratio of an empty sentence set");
  std::size_t valid = 0;
  for (const auto& s : sentences) {
    const auto post = target_posteriors(discs, s, labels);
    valid += std::all_of(post.begin(), post.end(),
                         [threshold](double p) { return p > threshold; });
  }
  return static_cast<double>(valid) / static_cast<double>(sentences.size());
}

double valid_ratio(std::span<const Snapshot> snapshots, double threshold) {
  if (snapshots.empty()) throw Error("valid ratio of an empty snapshot set");
  std::size_t valid = 0;
  for (const auto& s : snapshots) valid += s.valid(threshold);
  return static_cast<double>(valid) / static_cast<double>(snapshots.size());
}

std::vector<double> loglik_per_word(std::span<const Sentence> sentences,
                                    const NGramModel& model, bool include_eos) {
  std::vector<double> out;
  out.reserve(sentences.size());
  for (const auto& s : sentences) {
    if (s.empty()) throw Error("log-likelihood per word of an empty sentence");
    out.push_back(sentence_logprob(model, s, include_eos).total_logprob /
                  static_cast<double>(s.size()));
  }
  return out;
}

std::vector<std::pair<int, double>> valid_ratio_curve(
    std::span<const Snapshot> snapshots, double threshold) {
  std::map<int, std::pair<std::size_t, std::size_t>> per_turn;  // valid, total
  for (const auto& s : snapshots) {
    auto& [valid, total] = per_turn[s.turn];
    valid += s.valid(threshold);
    ++total;
  }
  std::vector<std::pair<int, double>> curve;
  for (const auto& [turn, vt] : per_turn) {
    curve.emplace_back(turn, static_cast<double>(vt.first) / static_cast<double>(vt.second));
  }
  return curve;
}

}  // namespace gibbsgen
