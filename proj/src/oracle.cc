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

#include "gibbsgen/oracle.h"

#include <algorithm>
#include <cmath>

#include "gibbsgen/mathutil.h"

namespace gibbsgen {

std::size_t ExactDistribution::index_of(std::span<const TokenId> sentence) const {
  if (sentence.size() != length) throw Error("sentence length does not match distribution");
  std::size_t index = 0;
  for (TokenId id : sentence) {
    const auto it = std::find(alphabet.begin(), alphabet.end(), id);
    if (it == alphabet.end()) throw Error("token outside the oracle alphabet");
    index = index * alphabet.size() + static_cast<std::size_t>(it - alphabet.begin());
  }
  return index;
}

Sentence ExactDistribution::sentence_at(std::size_t index) const {
  Sentence s(length);
  for (std::size_t pos = length; pos-- > 0;) {
    s[pos] = alphabet[index % alphabet.size()];
    index /= alphabet.size();
  }
  return s;
}

ExactDistribution exact_posterior(const NGramModel& model,
                                  std::span<const Discriminator> discs,
                                  std::span<const int> labels, std::size_t n,
                                  std::span<const TokenId> alphabet,
                                  bool include_eos) {
  if (alphabet.empty() || n == 0) throw Error("oracle needs a non-empty alphabet and n >= 1");
  double states = std::pow(static_cast<double>(alphabet.size()), static_cast<double>(n));
  if (states > static_cast<double>(kMaxOracleStates)) {
    throw Error("oracle state space too large (" + std::to_string(static_cast<long long>(states)) +
                " > " + std::to_string(kMaxOracleStates) + ")");
  }
  ExactDistribution dist;
  dist.alphabet.assign(alphabet.begin(), alphabet.end());
  dist.length = n;
  const auto total = static_cast<std::size_t>(states);
  std::vector<double> log_w(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    const Sentence s = dist.sentence_at(idx);
    log_w[idx] = sentence_logprob(model, s, include_eos).total_logprob +
                 joint_constraint_logprob(discs, s, labels);
  }
  const double z = log_sum_exp(log_w);
  dist.probs.resize(total);
  for (std::size_t idx = 0; idx < total; ++idx) dist.probs[idx] = std::exp(log_w[idx] - z);
  return dist;
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw Error("tv_distance: supports differ in size");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
  return 0.5 * sum;
}

double tv_distance(std::span<const double> p,
                   std::span<const std::uint64_t> counts) {
  if (p.size() != counts.size()) throw Error("tv_distance: supports differ in size");
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) throw Error("tv_distance: no samples");
  std::vector<double> q(counts.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    q[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  }
  return tv_distance(p, q);
}

}  // namespace gibbsgen
