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

#include "gibbsgen/baselines.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace gibbsgen {
namespace {

struct Hyp {
  Sentence tokens;
  double score = 0.0;
};

// Higher score first; then shorter; then lexicographically smaller.
bool better(double sa, std::span<const TokenId> a, double sb,
            std::span<const TokenId> b) {
  if (sa != sb) return sa > sb;
  if (a.size() != b.size()) return a.size() < b.size();
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

struct Expansion {
  std::size_t parent;
  TokenId word;
  double score;
};

}  // namespace

const NGramModel& ConditionalLM::model(std::span<const int> labels) const {
  const auto it = models_.find(std::vector<int>(labels.begin(), labels.end()));
  if (it == models_.end()) throw Error("no conditional model for the requested labels");
  return it->second;
}

bool ConditionalLM::contains(std::span<const int> labels) const {
  return models_.count(std::vector<int>(labels.begin(), labels.end())) > 0;
}

ConditionalLM train_conditional_lm(const Corpus& corpus, int order,
                                   const SmoothingSpec& smoothing) {
  std::map<std::vector<int>, std::vector<LabeledSentence>> groups;
  for (const auto& combo : corpus.schema.combinations()) groups[combo];
  for (const auto& s : corpus.sentences) groups[s.labels].push_back(s);
  std::map<std::vector<int>, NGramModel> models;
  for (const auto& [labels, sentences] : groups) {
    if (sentences.empty()) {
      throw Error("no training sentence for label combination '" +
                  corpus.schema.format_labels(labels) + "'");
    }
    models.emplace(labels, train_ngram(sentences, corpus.vocab, order, smoothing));
  }
  return ConditionalLM(std::move(models));
}

BeamResult beam_search(const NGramModel& model, std::size_t beam_size,
                       std::size_t max_len) {
  if (beam_size == 0) throw Error("beam size must be >= 1");
  if (max_len == 0) throw Error("max length must be >= 1");

  std::vector<TokenId> words;
  for (TokenId id = 0; id < static_cast<TokenId>(model.vocab_size()); ++id) {
    if (Vocabulary::is_word(id)) words.push_back(id);
  }

  std::vector<Hyp> live{Hyp{}};
  std::optional<Hyp> best;
  std::vector<Expansion> expansions;
  for (std::size_t step = 0; step <= max_len && !live.empty(); ++step) {
    expansions.clear();
    for (std::size_t h = 0; h < live.size(); ++h) {
      const auto& hyp = live[h];
      const auto ctx = model.context(hyp.tokens);
      if (!hyp.tokens.empty()) {
        const double done = hyp.score + ctx.logprob(Vocabulary::kEos);
        if (!best || better(done, hyp.tokens, best->score, best->tokens)) {
          best = Hyp{hyp.tokens, done};
        }
      }
      if (hyp.tokens.size() < max_len) {
        for (TokenId w : words) expansions.push_back({h, w, hyp.score + ctx.logprob(w)});
      }
    }
    // All expansions share a length, so ties reduce to comparing
    // (parent tokens, word) lexicographically.
    const std::size_t keep = std::min(beam_size, expansions.size());
    std::partial_sort(expansions.begin(), expansions.begin() + keep, expansions.end(),
                      [&](const Expansion& a, const Expansion& b) {
                        if (a.score != b.score) return a.score > b.score;
                        const auto& ta = live[a.parent].tokens;
                        const auto& tb = live[b.parent].tokens;
                        if (ta != tb) return ta < tb;
                        return a.word < b.word;
                      });
    std::vector<Hyp> next;
    next.reserve(keep);
    for (std::size_t e = 0; e < keep; ++e) {
      Hyp hyp{live[expansions[e].parent].tokens, expansions[e].score};
      hyp.tokens.push_back(expansions[e].word);
      next.push_back(std::move(hyp));
    }
    live = std::move(next);
    // Log probabilities only decrease, so no live prefix can overtake.
    if (best && (live.empty() || best->score >= live.front().score)) break;
  }

  if (best) return BeamResult{best->tokens, best->score, true};
  return BeamResult{live.front().tokens, live.front().score, false};
}

BeamResult beam_search(const ConditionalLM& clm, std::span<const int> labels,
                       std::size_t beam_size, std::size_t max_len) {
  return beam_search(clm.model(labels), beam_size, max_len);
}

namespace {

// Top-w events of one history, renormalized.
struct Truncated {
  std::vector<TokenId> ids;
  std::vector<double> log_weights;
};

Truncated truncate(const NGramModel& model, std::span<const TokenId> prefix,
                   std::size_t top_w) {
  const auto dist = model.distribution(prefix);
  std::vector<TokenId> ids;
  for (TokenId id = 0; id < static_cast<TokenId>(dist.size()); ++id) {
    if (!NGramModel::is_event(id)) continue;
    if (id == Vocabulary::kEos && prefix.empty()) continue;
    ids.push_back(id);
  }
  const std::size_t keep = std::min(top_w, ids.size());
  std::partial_sort(ids.begin(), ids.begin() + keep, ids.end(),
                    [&](TokenId a, TokenId b) {
                      if (dist[a] != dist[b]) return dist[a] > dist[b];
                      return a < b;
                    });
  ids.resize(keep);
  Truncated t;
  t.ids = ids;
  for (TokenId id : ids) t.log_weights.push_back(std::log(std::max(dist[id], kProbFloor)));
  return t;
}

Sentence draw(const NGramModel& model, std::size_t top_w, std::size_t max_len,
              Rng& rng, std::map<std::vector<TokenId>, Truncated>& cache) {
  Sentence tokens;
  const std::size_t hist = static_cast<std::size_t>(model.order()) - 1;
  while (tokens.size() < max_len) {
    // Only the last N-1 tokens matter; the empty prefix is its own key
    // because EOS is masked there.
    std::vector<TokenId> key(tokens.end() - std::min(hist, tokens.size()), tokens.end());
    if (tokens.empty()) key.push_back(Vocabulary::kBos);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, truncate(model, tokens, top_w)).first;
    const TokenId next = it->second.ids[sample_log_weights(it->second.log_weights, rng)];
    if (next == Vocabulary::kEos) break;
    tokens.push_back(next);
  }
  return tokens;
}

}  // namespace

Sentence sample_sentence(const NGramModel& model, std::size_t top_w,
                         std::size_t max_len, Rng& rng) {
  std::map<std::vector<TokenId>, Truncated> cache;
  return draw(model, top_w, max_len, rng, cache);
}

GenerationResult reject_sample(const NGramModel& model,
                               std::span<const Discriminator> discs,
                               std::span<const int> labels, int samples,
                               double threshold, std::size_t top_w,
                               std::size_t max_len, Rng& rng) {
  if (samples < 1) throw Error("reject sampling needs at least one sample");
  if (top_w == 0) throw Error("top-w must be >= 1");
  if (max_len == 0) throw Error("max length must be >= 1");
  if (labels.size() != discs.size()) {
    throw Error("labels do not match discriminator count");
  }
  std::map<std::vector<TokenId>, Truncated> cache;
  GenerationResult result;
  result.snapshots.reserve(samples);
  for (int s = 0; s < samples; ++s) {
    result.snapshots.push_back(make_snapshot(model, discs, labels,
                                             draw(model, top_w, max_len, rng, cache),
                                             s + 1, 0));
  }
  result.total_count = result.snapshots.size();
  for (const auto& s : result.snapshots) result.valid_count += s.valid(threshold);
  if (const auto pick = select_output(result.snapshots, threshold)) {
    const auto& chosen = result.snapshots[pick->index];
    result.output = chosen.tokens;
    result.output_valid = pick->valid;
    result.output_lm_logprob = chosen.lm_logprob;
    result.output_posteriors = chosen.posteriors;
  }
  return result;
}

void write_conditional_lm(std::ostream& out, const ConditionalLM& clm) {
  out << "gibbsgen-clm v1 models=" << clm.size() << '\n';
  for (const auto& [labels, model] : clm.models()) {
    out << "labels";
    for (int l : labels) out << ' ' << l;
    out << '\n';
    write_ngram(out, model);
  }
}

ConditionalLM read_conditional_lm(std::istream& in, const Vocabulary& vocab) {
  std::string header;
  if (!std::getline(in, header) || header.rfind("gibbsgen-clm v1 models=", 0) != 0) {
    throw Error("not a gibbsgen conditional LM (bad header)");
  }
  const std::size_t count = std::stoull(header.substr(header.find('=') + 1));
  std::map<std::vector<int>, NGramModel> models;
  std::string line;
  for (std::size_t m = 0; m < count; ++m) {
    if (!std::getline(in, line) || line.rfind("labels", 0) != 0) {
      throw Error("conditional LM: expected a labels line");
    }
    std::istringstream ls(line.substr(6));
    std::vector<int> labels;
    for (int l; ls >> l;) labels.push_back(l);
    models.emplace(std::move(labels), read_ngram(in, vocab));
  }
  return ConditionalLM(std::move(models));
}

}  // namespace gibbsgen
