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

#ifndef GIBBSGEN_BASELINES_H_
#define GIBBSGEN_BASELINES_H_

#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "gibbsgen/corpus.h"
#include "gibbsgen/discriminator.h"
#include "gibbsgen/lm.h"
#include "gibbsgen/mathutil.h"
#include "gibbsgen/sampler.h"

namespace gibbsgen {

// One n-gram model per full label combination, each trained on the
// sentences carrying exactly that combination.
class ConditionalLM {
 public:
  ConditionalLM() = default;
  explicit ConditionalLM(std::map<std::vector<int>, NGramModel> models)
      : models_(std::move(models)) {}

  // Throws Error when the combination has no model.
  const NGramModel& model(std::span<const int> labels) const;
  bool contains(std::span<const int> labels) const;
  std::size_t size() const { return models_.size(); }
  const std::map<std::vector<int>, NGramModel>& models() const { return models_; }

  bool operator==(const ConditionalLM&) const = default;

 private:
  std::map<std::vector<int>, NGramModel> models_;
};

// Every combination of the schema must have at least one sentence.
ConditionalLM train_conditional_lm(const Corpus& corpus, int order,
                                   const SmoothingSpec& smoothing = {});

struct BeamResult {
  Sentence tokens;
  double logprob = 0.0;    // including the EOS term when completed
  bool completed = false;  // ended in EOS within max_len
};

// Keeps the m best prefixes per step. Sentences hold at least one word;
// EOS expansions move to a completed pool and the best completed
// hypothesis wins. Ties prefer shorter, then lexicographically smaller
// sentences. Stops early once no live prefix can beat the best completed
// hypothesis.
BeamResult beam_search(const NGramModel& model, std::size_t beam_size,
                       std::size_t max_len);
BeamResult beam_search(const ConditionalLM& clm, std::span<const int> labels,
                       std::size_t beam_size, std::size_t max_len);

// One left-to-right draw from `model`, restricted at every step to the
// top_w most probable events (EOS included, except before the first word)
// and renormalized. Stops at EOS or after max_len words.
Sentence sample_sentence(const NGramModel& model, std::size_t top_w,
                         std::size_t max_len, Rng& rng);

// Draws `samples` sentences, scores each like a Gibbs snapshot (turn = draw
// number, position 0), and applies select_output.
GenerationResult reject_sample(const NGramModel& model,
                               std::span<const Discriminator> discs,
                               std::span<const int> labels, int samples,
                               double threshold, std::size_t top_w,
                               std::size_t max_len, Rng& rng);

void write_conditional_lm(std::ostream& out, const ConditionalLM& clm);
ConditionalLM read_conditional_lm(std::istream& in, const Vocabulary& vocab);

}  // namespace gibbsgen

#endif  // GIBBSGEN_BASELINES_H_
