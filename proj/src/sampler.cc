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

#include "gibbsgen/sampler.h"

#include <algorithm>
#include <cmath>

#include "gibbsgen/candidates.h"

namespace gibbsgen {

void SamplerConfig::validate() const {
  if (length < 1) throw Error("sentence length must be >= 1");
  if (turns < 1) throw Error("turns must be >= 1");
  if (burn_in < 0 || burn_in >= turns) {
    throw Error("burn-in must be in [0, turns)");
  }
  if (candidates < 1) throw Error("candidate count must be >= 1");
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error("threshold must be in (0, 1)");
  }
}

bool Snapshot::valid(double threshold) const {
  return std::all_of(posteriors.begin(), posteriors.end(),
                     [threshold](double p) { return p > threshold; });
}

double Snapshot::min_posterior() const {
  double lo = 1.0;
  for (double p : posteriors) lo = std::min(lo, p);
  return lo;
}

Sentence make_seed(const Corpus& corpus, std::size_t n, Rng& rng) {
  if (corpus.sentences.empty()) throw Error("cannot seed from an empty corpus");
  std::uniform_int_distribution<std::size_t> pick(0, corpus.sentences.size() - 1);
  const auto& source = corpus.sentences[pick(rng)].tokens;
  const std::size_t segment = std::min(kSeedSegmentLength, source.size());
  Sentence seed(source.begin(), source.begin() + std::min(segment, n));
  seed.resize(n, Vocabulary::kUnk);
  return seed;
}

Sentence gibbs_step(std::span<const TokenId> state, std::size_t i,
                    const NGramModel& model,
                    std::span<const Discriminator> discs,
                    std::span<const int> labels, std::size_t k, Rng& rng) {
  const auto cands = propose(model, state, i, k);
  Sentence next(state.begin(), state.end());
  std::vector<double> weights(cands.size());
  for (std::size_t c = 0; c < cands.size(); ++c) {
    next[i] = cands[c].id;
    weights[c] = cands[c].score + joint_constraint_logprob(discs, next, labels);
  }
  next[i] = cands[sample_log_weights(weights, rng)].id;
  return next;
}

Snapshot make_snapshot(const NGramModel& model,
                       std::span<const Discriminator> discs,
                       std::span<const int> labels, Sentence tokens, int turn,
                       int position) {
  Snapshot snap;
  snap.lm_logprob = sentence_logprob(model, tokens, true).total_logprob;
  snap.posteriors = target_posteriors(discs, tokens, labels);
  snap.tokens = std::move(tokens);
  snap.turn = turn;
  snap.position = position;
  return snap;
}

std::optional<Selection> select_output(std::span<const Snapshot> snapshots,
                                       double threshold) {
  if (snapshots.empty()) return std::nullopt;
  std::optional<std::size_t> best;
  for (std::size_t s = 0; s < snapshots.size(); ++s) {
    if (!snapshots[s].valid(threshold)) continue;
    if (!best || snapshots[s].lm_logprob > snapshots[*best].lm_logprob) best = s;
  }
  if (best) return Selection{*best, true};

  std::size_t fallback = 0;
  for (std::size_t s = 1; s < snapshots.size(); ++s) {
    if (snapshots[s].min_posterior() > snapshots[fallback].min_posterior()) {
      fallback = s;
    }
  }
  return Selection{fallback, false};
}

GenerationResult run(const SamplerConfig& config, const Corpus& corpus,
                     const NGramModel& model,
                     std::span<const Discriminator> discs, Rng& rng) {
  config.validate();
  if (config.labels.size() != discs.size()) {
    throw Error("sampler labels do not match discriminator count");
  }
  const auto n = static_cast<std::size_t>(config.length);
  const auto k = static_cast<std::size_t>(config.candidates);

  GenerationResult result;
  result.snapshots.reserve(static_cast<std::size_t>(config.turns - config.burn_in) * n);
  Sentence state = make_seed(corpus, n, rng);
  std::uniform_int_distribution<std::size_t> position(0, n - 1);
  for (int turn = 1; turn <= config.turns; ++turn) {
    for (std::size_t step = 0; step < n; ++step) {
      const std::size_t i = config.random_scan ? position(rng) : step;
      state = gibbs_step(state, i, model, discs, config.labels, k, rng);
      if (turn > config.burn_in) {
        result.snapshots.push_back(make_snapshot(model, discs, config.labels, state,
                                                 turn, static_cast<int>(i)));
      }
    }
  }

  result.total_count = result.snapshots.size();
  for (const auto& s : result.snapshots) result.valid_count += s.valid(config.threshold);
  if (const auto pick = select_output(result.snapshots, config.threshold)) {
    const auto& chosen = result.snapshots[pick->index];
    result.output = chosen.tokens;
    result.output_valid = pick->valid;
    result.output_lm_logprob = chosen.lm_logprob;
    result.output_posteriors = chosen.posteriors;
  }
  return result;
}

GenerationResult run(const SamplerConfig& config, const Corpus& corpus,
                     const NGramModel& model,
                     std::span<const Discriminator> discs) {
  Rng rng(config.seed);
  return run(config, corpus, model, discs, rng);
}

}  // namespace gibbsgen
