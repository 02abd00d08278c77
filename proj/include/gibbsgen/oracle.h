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

#ifndef GIBBSGEN_ORACLE_H_
#define GIBBSGEN_ORACLE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "gibbsgen/corpus.h"
#include "gibbsgen/discriminator.h"
#include "gibbsgen/lm.h"

namespace gibbsgen {

// Brute-force ground truth for tiny instances.

inline constexpr std::size_t kMaxOracleStates = 1000000;

// A distribution over every length-n sequence drawn from `alphabet`,
// indexed in mixed radix (position 0 most significant, digits follow the
// alphabet order).
struct ExactDistribution {
  std::vector<TokenId> alphabet;
  std::size_t length = 0;
  std::vector<double> probs;

  std::size_t index_of(std::span<const TokenId> sentence) const;
  Sentence sentence_at(std::size_t index) const;
};

// p(w | c) proportional to exp(sentence_logprob(w, include_eos) +
// joint_constraint_logprob(w, labels)) over alphabet^n.
ExactDistribution exact_posterior(const NGramModel& model,
                                  std::span<const Discriminator> discs,
                                  std::span<const int> labels, std::size_t n,
                                  std::span<const TokenId> alphabet,
                                  bool include_eos = false);

// 0.5 * sum |p - q|.
double tv_distance(std::span<const double> p, std::span<const double> q);
// Against empirical counts, normalized by their total.
double tv_distance(std::span<const double> p,
                   std::span<const std::uint64_t> counts);

}  // namespace gibbsgen

#endif  // GIBBSGEN_ORACLE_H_
