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

#ifndef GIBBSGEN_CANDIDATES_H_
#define GIBBSGEN_CANDIDATES_H_

#include <cstddef>
#include <span>
#include <vector>

#include "gibbsgen/corpus.h"
#include "gibbsgen/lm.h"

namespace gibbsgen {

struct Candidate {
  TokenId id;
  double score;  // local_window_logprob of the substitution
};

// The k word ids with the highest local window score at position i (ties
// by lower id), plus the word currently at i if it did not make the cut.
// Sorted by descending score, ties by id.
std::vector<Candidate> propose(const NGramModel& model,
                               std::span<const TokenId> sentence,
                               std::size_t i, std::size_t k,
                               bool include_eos = false);

}  // namespace gibbsgen

#endif  // GIBBSGEN_CANDIDATES_H_
