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

#ifndef GIBBSGEN_SAMPLER_H_
#define GIBBSGEN_SAMPLER_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gibbsgen/corpus.h"
#include "gibbsgen/discriminator.h"
#include "gibbsgen/lm.h"
#include "gibbsgen/mathutil.h"

namespace gibbsgen {

// Seed sentences are cut from a training segment of this many words.
inline constexpr std::size_t kSeedSegmentLength = 8;

struct SamplerConfig {
  int turns = 100;
  int burn_in = 10;
  int length = 8;
  int candidates = 5;
  double threshold = 0.6;
  std::vector<int> labels;  // one class index per constraint dimension
  std::uint64_t seed = 1;
  // Visit n uniformly random positions per turn instead of 1..n in order.
  bool random_scan = false;

  // Throws Error on an inconsistent configuration.
  void validate() const;
};

struct Snapshot {
  Sentence tokens;
  int turn = 0;      // 1-based
  int position = 0;  // 0-based index of the updated word
  double lm_logprob = 0.0;          // sentence_logprob including EOS
  std::vector<double> posteriors;   // p(c_j = target_j | tokens)

  // Every target posterior strictly above the threshold.
  bool valid(double threshold) const;
  double min_posterior() const;

  bool operator==(const Snapshot&) const = default;
};

struct Selection {
  std::size_t index = 0;  // into the snapshot list
  bool valid = false;     // false when chosen by the fallback rule
};

struct GenerationResult {
  std::optional<Sentence> output;
  bool output_valid = false;
  double output_lm_logprob = 0.0;
  std::vector<double> output_posteriors;
  std::vector<Snapshot> snapshots;  // post burn-in, one per position update
  std::size_t valid_count = 0;
  std::size_t total_count = 0;

  bool operator==(const GenerationResult&) const = default;
};

// Picks a training sentence uniformly, keeps its first
// min(kSeedSegmentLength, size) words, then truncates or UNK-pads to n.
Sentence make_seed(const Corpus& corpus, std::size_t n, Rng& rng);

// One Gibbs update of position i. Candidates come from `propose`; each
// is weighted by its local LM window score plus the joint constraint log
// probability of the substituted sentence, and one is drawn from the
// normalized weights.
Sentence gibbs_step(std::span<const TokenId> state, std::size_t i,
                    const NGramModel& model,
                    std::span<const Discriminator> discs,
                    std::span<const int> labels, std::size_t k, Rng& rng);

// Records a snapshot of `tokens`.
Snapshot make_snapshot(const NGramModel& model,
                       std::span<const Discriminator> discs,
                       std::span<const int> labels, Sentence tokens, int turn,
                       int position);

// Among snapshots valid at `threshold`, the one with the highest
// lm_logprob (earliest on ties). Without valid snapshots, falls back to
// the highest minimum posterior (earliest on ties) with valid = false.
std::optional<Selection> select_output(std::span<const Snapshot> snapshots,
                                       double threshold);

// A full chain: seed, `turns` sweeps, snapshots after burn-in, selection.
GenerationResult run(const SamplerConfig& config, const Corpus& corpus,
                     const NGramModel& model,
                     std::span<const Discriminator> discs, Rng& rng);

// Same, with a generator seeded from config.seed.
GenerationResult run(const SamplerConfig& config, const Corpus& corpus,
                     const NGramModel& model,
                     std::span<const Discriminator> discs);

}  // namespace gibbsgen

#endif  // GIBBSGEN_SAMPLER_H_
