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

#ifndef GIBBSGEN_EVAL_H_
#define GIBBSGEN_EVAL_H_

#include <span>
#include <utility>
#include <vector>

#include "gibbsgen/corpus.h"
#include "gibbsgen/discriminator.h"
#include "gibbsgen/lm.h"
#include "gibbsgen/sampler.h"

namespace gibbsgen {

// Sentence-level BLEU-4 against a single reference. p_1 is the plain
// clipped unigram precision; p_2..p_4 are add-one smoothed,
// (matches + 1) / (total + 1). The score is their geometric mean, times
// min(1, exp(1 - r/c)) when `with_bp`. An empty candidate scores 0.
double bleu4(std::span<const TokenId> candidate,
             std::span<const TokenId> reference, bool with_bp);

struct GeneratedSentence {
  Sentence tokens;
  std::vector<int> labels;
};

// Per generated sentence, the mean pairwise bleu4 against every corpus
// sentence with the same labels; then the mean over generated sentences.
double avg_bleu(std::span<const GeneratedSentence> generated,
                const Corpus& corpus, bool with_bp);

// Fraction of sentences whose every target posterior exceeds `threshold`.
// Vacuously 1 with no constraint dimensions.
double valid_ratio(std::span<const Sentence> sentences,
                   std::span<const Discriminator> discs,
                   std::span<const int> labels, double threshold);
double valid_ratio(std::span<const Snapshot> snapshots, double threshold);

// total_logprob / length per sentence.
std::vector<double> loglik_per_word(std::span<const Sentence> sentences,
                                    const NGramModel& model,
                                    bool include_eos = true);

// (turn, ratio) for every turn present, ascending by turn.
std::vector<std::pair<int, double>> valid_ratio_curve(
    std::span<const Snapshot> snapshots, double threshold);

}  // namespace gibbsgen

#endif  // GIBBSGEN_EVAL_H_
