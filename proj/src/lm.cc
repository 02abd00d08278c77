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

#include "gibbsgen/lm.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>

namespace gibbsgen {
namespace {

constexpr const char* kMagic = "gibbsgen-ngram";
constexpr const char* kVersion = "v1";

const char* smoothing_name(Smoothing kind) {
  switch (kind) {
    case Smoothing::kWittenBell:
      return "witten-bell";
  }
  return "unknown";
}

Smoothing parse_smoothing(const std::string& name) {
  if (name == "witten-bell") return Smoothing::kWittenBell;
  throw Error("unknown smoothing '" + name + "'");
}

// Fills `out` (size order-1) with the BOS-padded history preceding the end
// of `prefix`.
void fill_history(std::span<const TokenId> prefix, int order,
                  std::array<TokenId, NGramModel::kMaxOrder>& out) {
  const int len = order - 1;
  const int have = static_cast<int>(prefix.size());
  for (int j = 0; j < len; ++j) {
    const int src = have - len + j;
    out[j] = src >= 0 ? prefix[src] : Vocabulary::kBos;
  }
}

}  // namespace

NGramModel::NGramModel(int order, const Vocabulary& vocab,
                       const SmoothingSpec& smoothing)
    : order_(order),
      vocab_size_(vocab.size()),
      vocab_fingerprint_(vocab.fingerprint()),
      smoothing_(smoothing),
      levels_(order) {
  if (order < 2 || order > kMaxOrder) {
    throw Error("n-gram order must be in [2, " + std::to_string(kMaxOrder) +
                "], got " + std::to_string(order));
  }
  // Packed histories must fit in 64 bits.
  const double bits = (order - 1) * std::log2(static_cast<double>(vocab_size_));
  if (bits >= 63.0) {
    throw Error("n-gram order " + std::to_string(order) +
                " is too large for a vocabulary of " +
                std::to_string(vocab_size_) + " tokens");
  }
}

std::uint64_t NGramModel::pack(std::span<const TokenId> history) const {
  std::uint64_t key = 0;
  for (TokenId id : history) key = key * vocab_size_ + static_cast<std::uint64_t>(id);
  return key;
}

void NGramModel::add(std::span<const TokenId> history, TokenId next,
                     std::uint64_t n) {
  auto& stats = levels_.at(history.size())[pack(history)];
  stats.next[next] += n;
  stats.total += n;
}

double NGramModel::Context::prob(TokenId next) const {
  if (!is_event(next)) return 0.0;
  double p = 1.0 / static_cast<double>(model_->num_events());
  for (int h = 0; h < model_->order_; ++h) {
    const Stats* s = levels_[h];
    if (s == nullptr) continue;
    const auto it = s->next.find(next);
    const double c = it == s->next.end() ? 0.0 : static_cast<double>(it->second);
    const double types = static_cast<double>(s->next.size());
    p = (c + types * p) / (static_cast<double>(s->total) + types);
  }
  return p;
}

double NGramModel::Context::logprob(TokenId next) const {
  return std::log(std::max(prob(next), kProbFloor));
}

NGramModel::Context NGramModel::context(std::span<const TokenId> prefix) const {
  std::array<TokenId, kMaxOrder> history{};
  fill_history(prefix, order_, history);
  Context ctx;
  ctx.model_ = this;
  const int len = order_ - 1;
  for (int h = 0; h < order_; ++h) {
    std::span<const TokenId> tail(history.data() + (len - h), h);
    const auto& table = levels_[h];
    const auto it = table.find(pack(tail));
    ctx.levels_[h] = it == table.end() ? nullptr : &it->second;
  }
  return ctx;
}

std::vector<double> NGramModel::distribution(
    std::span<const TokenId> prefix) const {
  const Context ctx = context(prefix);
  std::vector<double> p(vocab_size_, 1.0 / static_cast<double>(num_events()));
  p[Vocabulary::kBos] = 0.0;
  p[Vocabulary::kPad] = 0.0;
  for (int h = 0; h < order_; ++h) {
    const Stats* s = ctx.levels_[h];
    if (s == nullptr) continue;
    const double types = static_cast<double>(s->next.size());
    const double denom = static_cast<double>(s->total) + types;
    for (auto& v : p) v = types * v / denom;
    for (const auto& [id, c] : s->next) p[id] += static_cast<double>(c) / denom;
  }
  return p;
}

std::uint64_t NGramModel::count(std::span<const TokenId> ngram) const {
  if (ngram.empty() || ngram.size() > static_cast<std::size_t>(order_)) return 0;
  const auto history = ngram.first(ngram.size() - 1);
  const auto& table = levels_[history.size()];
  const auto it = table.find(pack(history));
  if (it == table.end()) return 0;
  const auto jt = it->second.next.find(ngram.back());
  return jt == it->second.next.end() ? 0 : jt->second;
}

bool NGramModel::operator==(const NGramModel& other) const {
  if (order_ != other.order_ || vocab_size_ != other.vocab_size_ ||
      vocab_fingerprint_ != other.vocab_fingerprint_ ||
      smoothing_.kind != other.smoothing_.kind) {
    return false;
  }
  for (int h = 0; h < order_; ++h) {
    const auto& a = levels_[h];
    const auto& b = other.levels_[h];
    if (a.size() != b.size()) return false;
    for (const auto& [key, stats] : a) {
      const auto it = b.find(key);
      if (it == b.end() || it->second.total != stats.total ||
          it->second.next != stats.next) {
        return false;
      }
    }
  }
  return true;
}

NGramModel train_ngram(const Corpus& corpus, int order,
                       const SmoothingSpec& smoothing) {
  return train_ngram(corpus.sentences, corpus.vocab, order, smoothing);
}

NGramModel train_ngram(std::span<const LabeledSentence> sentences,
                       const Vocabulary& vocab, int order,
                       const SmoothingSpec& smoothing) {
  if (sentences.empty()) throw Error("cannot train an n-gram model on an empty corpus");
  NGramModel model(order, vocab, smoothing);
  std::vector<TokenId> padded;
  for (const auto& s : sentences) {
    padded.assign(order - 1, Vocabulary::kBos);
    for (TokenId id : s.tokens) {
      if (!Vocabulary::is_word(id) || static_cast<std::size_t>(id) >= vocab.size()) {
        throw Error("sentence contains invalid token id " + std::to_string(id));
      }
      padded.push_back(id);
    }
    padded.push_back(Vocabulary::kEos);
    for (std::size_t p = order - 1; p < padded.size(); ++p) {
      for (int h = 0; h < order; ++h) {
        model.add(std::span<const TokenId>(padded.data() + p - h, h), padded[p], 1);
      }
    }
  }
  return model;
}

double cond_logprob(const NGramModel& model, std::span<const TokenId> prefix,
                    TokenId next) {
  return model.context(prefix).logprob(next);
}

SentenceScore sentence_logprob(const NGramModel& model,
                               std::span<const TokenId> sentence,
                               bool include_eos) {
  SentenceScore score;
  score.length = sentence.size();
  score.per_word.reserve(sentence.size() + 1);
  for (std::size_t t = 0; t < sentence.size(); ++t) {
    const double lp = cond_logprob(model, sentence.first(t), sentence[t]);
    score.per_word.push_back(lp);
    score.total_logprob += lp;
  }
  if (include_eos) {
    const double lp = cond_logprob(model, sentence, Vocabulary::kEos);
    score.per_word.push_back(lp);
    score.total_logprob += lp;
  }
  return score;
}

double local_window_logprob(const NGramModel& model,
                            std::span<const TokenId> sentence, std::size_t i,
                            TokenId candidate, bool include_eos) {
  const std::size_t n = sentence.size();
  if (i >= n) throw Error("position out of range");
  std::vector<TokenId> buf(sentence.begin(), sentence.end());
  buf[i] = candidate;
  const std::span<const TokenId> s(buf);
  const std::size_t reach = static_cast<std::size_t>(model.order()) - 1;
  const std::size_t last = std::min(i + reach, n - 1);
  double total = 0.0;
  for (std::size_t t = i; t <= last; ++t) {
    total += cond_logprob(model, s.first(t), s[t]);
  }
  if (include_eos && i + reach >= n) {
    total += cond_logprob(model, s, Vocabulary::kEos);
  }
  return total;
}

double perplexity(const NGramModel& model,
                  std::span<const LabeledSentence> sentences) {
  double total = 0.0;
  std::size_t events = 0;
  for (const auto& s : sentences) {
    total += sentence_logprob(model, s.tokens, true).total_logprob;
    events += s.tokens.size() + 1;
  }
  if (events == 0) throw Error("perplexity of an empty sentence set");
  return std::exp(-total / static_cast<double>(events));
}

void write_ngram(std::ostream& out, const NGramModel& model) {
  using Record = std::tuple<int, std::vector<TokenId>, TokenId, std::uint64_t>;
  std::vector<Record> records;
  const std::uint64_t base = model.vocab_size_;
  for (int h = 0; h < model.order_; ++h) {
    for (const auto& [key, stats] : model.levels_[h]) {
      std::vector<TokenId> history(h);
      std::uint64_t k = key;
      for (int j = h - 1; j >= 0; --j) {
        history[j] = static_cast<TokenId>(k % base);
        k /= base;
      }
      for (const auto& [next, c] : stats.next) records.emplace_back(h, history, next, c);
    }
  }
  std::sort(records.begin(), records.end());

  char hash[17];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(model.vocab_fingerprint_));
  out << kMagic << ' ' << kVersion << " order=" << model.order_
      << " smoothing=" << smoothing_name(model.smoothing_.kind)
      << " vocab_size=" << model.vocab_size_ << " vocab_hash=" << hash
      << " records=" << records.size() << '\n';
  for (const auto& [h, history, next, c] : records) {
    out << h;
    for (TokenId id : history) out << ' ' << id;
    out << ' ' << next << ' ' << c << '\n';
  }
}

NGramModel read_ngram(std::istream& in, const Vocabulary& vocab) {
  std::string header;
  if (!std::getline(in, header)) throw Error("n-gram model: missing header");
  std::istringstream hs(header);
  std::string magic, version;
  hs >> magic >> version;
  if (magic != kMagic) throw Error("not a gibbsgen n-gram model (bad header)");
  if (version != kVersion) throw Error("unsupported n-gram model version '" + version + "'");
  int order = 0;
  std::size_t vocab_size = 0, num_records = 0;
  std::string smoothing = "witten-bell", hash;
  std::string field;
  while (hs >> field) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw Error("n-gram model: malformed header field '" + field + "'");
    const auto key = field.substr(0, eq);
    const auto value = field.substr(eq + 1);
    if (key == "order") order = std::stoi(value);
    else if (key == "smoothing") smoothing = value;
    else if (key == "vocab_size") vocab_size = std::stoull(value);
    else if (key == "vocab_hash") hash = value;
    else if (key == "records") num_records = std::stoull(value);
  }
  if (vocab_size != vocab.size() || hash != vocab.fingerprint_hex()) {
    throw Error("n-gram model was trained with a different vocabulary");
  }
  NGramModel model(order, vocab, SmoothingSpec{parse_smoothing(smoothing)});
  std::string line;
  std::vector<TokenId> history;
  for (std::size_t r = 0; r < num_records; ++r) {
    if (!std::getline(in, line)) throw Error("n-gram model: truncated record list");
    std::istringstream ls(line);
    int h = -1;
    ls >> h;
    if (h < 0 || h >= order) {
      throw Error("n-gram model: bad record at line " + std::to_string(r + 2));
    }
    history.resize(h);
    for (auto& id : history) ls >> id;
    TokenId next = 0;
    std::uint64_t c = 0;
    ls >> next >> c;
    if (!ls || next < 0 || static_cast<std::size_t>(next) >= vocab_size) {
      throw Error("n-gram model: bad record at line " + std::to_string(r + 2));
    }
    model.add(history, next, c);
  }
  return model;
}

}  // namespace gibbsgen
