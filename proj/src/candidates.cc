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

#include "gibbsgen/candidates.h"

#include <algorithm>

namespace gibbsgen {

std::vector<Candidate> propose(const NGramModel& model,
                               std::span<const TokenId> sentence,
                               std::size_t i, std::size_t k,
                               bool include_eos) {
  if (i >= sentence.size()) throw Error("candidate position out of range");
  if (k == 0) throw Error("candidate count must be >= 1");

  // Same terms, in the same order, as local_window_logprob; the history of
  // position i itself is resolved once for all candidates.
  const std::size_t n = sentence.size();
  const std::size_t reach = static_cast<std::size_t>(model.order()) - 1;
  const std::size_t last = std::min(i + reach, n - 1);
  const bool eos_term = include_eos && i + reach >= n;
  std::vector<TokenId> buf(sentence.begin(), sentence.end());
  const std::span<const TokenId> view(buf);
  const auto here = model.context(view.first(i));

  std::vector<Candidate> all;
  all.reserve(model.vocab_size());
  for (TokenId id = 0; id < static_cast<TokenId>(model.vocab_size()); ++id) {
    if (!Vocabulary::is_word(id)) continue;
    buf[i] = id;
    double score = here.logprob(id);
    for (std::size_t t = i + 1; t <= last; ++t) {
      score += model.context(view.first(t)).logprob(buf[t]);
    }
    if (eos_term) score += model.context(view).logprob(Vocabulary::kEos);
    all.push_back({id, score});
  }
  const auto better = [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  };
  const std::size_t keep = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + keep, all.end(), better);

  const TokenId current = sentence[i];
  const bool has_current =
      std::any_of(all.begin(), all.begin() + keep,
                  [current](const Candidate& c) { return c.id == current; });
  std::vector<Candidate> out(all.begin(), all.begin() + keep);
  if (!has_current) {
    const auto it = std::find_if(all.begin() + keep, all.end(),
                                 [current](const Candidate& c) { return c.id == current; });
    if (it != all.end()) {
      out.push_back(*it);
      std::sort(out.begin(), out.end(), better);
    }
  }
  return out;
}

}  // namespace gibbsgen
