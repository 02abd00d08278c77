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

#ifndef GIBBSGEN_LM_H_
#define GIBBSGEN_LM_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <unordered_map>
#include <vector>

#include "gibbsgen/corpus.h"

namespace gibbsgen {

enum class Smoothing {
  kWittenBell,  // interpolated Witten-Bell over orders 1..N
};

struct SmoothingSpec {
  Smoothing kind = Smoothing::kWittenBell;
};

// Probabilities are clamped to this floor before taking logs.
inline constexpr double kProbFloor = 1e-12;

// Order-N count model over the event space "words plus EOS" (BOS and PAD
// are never predicted). Conditionals are interpolated Witten-Bell:
//
//   p_h(w) = (c(h, w) + T(h) * p_{h'}(w)) / (c(h) + T(h))
//
// where h' drops the oldest context token, T(h) is the number of distinct
// successors of h, and the recursion bottoms out in the uniform
// distribution over events. Contexts never seen in training fall through
// to h'. Immutable once trained.
class NGramModel {
  struct Stats {
    std::uint64_t total = 0;
    std::unordered_map<TokenId, std::uint64_t> next;
  };

 public:
  static constexpr int kMaxOrder = 8;

  NGramModel() = default;

  int order() const { return order_; }
  std::size_t vocab_size() const { return vocab_size_; }
  std::uint64_t vocab_fingerprint() const { return vocab_fingerprint_; }
  const SmoothingSpec& smoothing() const { return smoothing_; }
  std::size_t num_events() const { return vocab_size_ - 2; }

  static bool is_event(TokenId id) {
    return id != Vocabulary::kBos && id != Vocabulary::kPad;
  }

  // Resolved statistics for one history: per history length h (0..N-1),
  // the matching count table or null if that history was never seen.
  class Context {
   public:
    double prob(TokenId next) const;
    double logprob(TokenId next) const;

   private:
    friend class NGramModel;
    const NGramModel* model_ = nullptr;
    std::array<const Stats*, kMaxOrder> levels_{};
  };

  // Resolves the history ending at `prefix`. Only the last N-1 tokens are
  // used; shorter prefixes are BOS-padded on the left.
  Context context(std::span<const TokenId> prefix) const;

  // Full conditional distribution indexed by token id; BOS and PAD get 0.
  std::vector<double> distribution(std::span<const TokenId> prefix) const;

  // Raw count of `ngram` = history (length h < N) followed by the token.
  std::uint64_t count(std::span<const TokenId> ngram) const;

  bool operator==(const NGramModel& other) const;

 private:
  friend NGramModel train_ngram(std::span<const LabeledSentence>,
                                const Vocabulary&, int, const SmoothingSpec&);
  friend void write_ngram(std::ostream&, const NGramModel&);
  friend NGramModel read_ngram(std::istream&, const Vocabulary&);

  NGramModel(int order, const Vocabulary& vocab, const SmoothingSpec& smoothing);

  std::uint64_t pack(std::span<const TokenId> history) const;
  void add(std::span<const TokenId> history, TokenId next, std::uint64_t n);

  int order_ = 0;
  std::size_t vocab_size_ = 0;
  std::uint64_t vocab_fingerprint_ = 0;
  SmoothingSpec smoothing_;
  // levels_[h] maps a packed history of length h to its successor counts.
  std::vector<std::unordered_map<std::uint64_t, Stats>> levels_;
};

struct SentenceScore {
  double total_logprob = 0.0;
  std::vector<double> per_word;  // one entry per word, plus EOS if scored
  std::size_t length = 0;        // words, excluding BOS/EOS
};

NGramModel train_ngram(const Corpus& corpus, int order,
                       const SmoothingSpec& smoothing = {});
// Trains on a subset of sentences sharing `vocab`.
NGramModel train_ngram(std::span<const LabeledSentence> sentences,
                       const Vocabulary& vocab, int order,
                       const SmoothingSpec& smoothing = {});

double cond_logprob(const NGramModel& model, std::span<const TokenId> prefix,
                    TokenId next);

SentenceScore sentence_logprob(const NGramModel& model,
                               std::span<const TokenId> sentence,
                               bool include_eos);

// Log score of `candidate` at position i, up to a constant that does not
// depend on the candidate: the sum of the conditionals whose history can
// see position i, plus the EOS term when `include_eos` and the window
// reaches the end of the sentence.
double local_window_logprob(const NGramModel& model,
                            std::span<const TokenId> sentence, std::size_t i,
                            TokenId candidate, bool include_eos = false);

// exp(-sum logprob / events) with EOS events counted.
double perplexity(const NGramModel& model,
                  std::span<const LabeledSentence> sentences);

// Versioned text format: one header line, then one count record per line.
void write_ngram(std::ostream& out, const NGramModel& model);
NGramModel read_ngram(std::istream& in, const Vocabulary& vocab);

}  // namespace gibbsgen

#endif  // GIBBSGEN_LM_H_
