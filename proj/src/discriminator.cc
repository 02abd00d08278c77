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

#include "gibbsgen/discriminator.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "gibbsgen/mathutil.h"

namespace gibbsgen {
namespace {

constexpr const char* kMagic = "gibbsgen-nb";
constexpr const char* kVersion = "v1";

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void Discriminator::finalize() {
  const std::size_t num_classes = class_docs_.size();
  std::uint64_t docs = 0;
  for (auto d : class_docs_) docs += d;
  log_prior_.resize(num_classes);
  for (std::size_t c = 0; c < num_classes; ++c) {
    log_prior_[c] = std::log(static_cast<double>(class_docs_[c]) /
                             static_cast<double>(docs));
  }
  has_evidence_.assign(vocab_size_, false);
  log_likelihood_.assign(num_classes * vocab_size_, 0.0);
  for (std::size_t c = 0; c < num_classes; ++c) {
    const double denom = static_cast<double>(class_tokens_[c]) +
                         alpha_ * static_cast<double>(num_words_);
    for (std::size_t w = 0; w < vocab_size_; ++w) {
      const auto n = token_counts_[c * vocab_size_ + w];
      if (n > 0) has_evidence_[w] = true;
      const double p = (static_cast<double>(n) + alpha_) / denom;
      log_likelihood_[c * vocab_size_ + w] =
          p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity();
    }
  }
}

std::vector<double> Discriminator::priors() const {
  std::vector<double> p(log_prior_.size());
  for (std::size_t c = 0; c < p.size(); ++c) p[c] = std::exp(log_prior_[c]);
  return p;
}

std::vector<double> Discriminator::log_posterior(
    std::span<const TokenId> sentence) const {
  const std::size_t num_classes = log_prior_.size();
  std::vector<double> score = log_prior_;
  // Accumulate in token-id order so the result is exactly invariant to
  // word order.
  Sentence bag(sentence.begin(), sentence.end());
  std::sort(bag.begin(), bag.end());
  for (TokenId id : bag) {
    if (!Vocabulary::is_word(id)) continue;
    if (id < 0 || static_cast<std::size_t>(id) >= vocab_size_) {
      throw Error("token id " + std::to_string(id) + " outside discriminator vocabulary");
    }
    // With alpha == 0 a token no class has seen has zero likelihood
    // everywhere; it carries no evidence.
    if (alpha_ == 0.0 && !has_evidence_[id]) continue;
    for (std::size_t c = 0; c < num_classes; ++c) {
      score[c] += log_likelihood_[c * vocab_size_ + id];
    }
  }
  const double z = log_sum_exp(score);
  if (!std::isfinite(z)) return log_prior_;  // every class ruled out
  for (auto& s : score) s -= z;
  return score;
}

std::vector<double> Discriminator::posterior(
    std::span<const TokenId> sentence) const {
  auto lp = log_posterior(sentence);
  for (auto& v : lp) v = std::exp(v);
  return lp;
}

int Discriminator::classify(std::span<const TokenId> sentence) const {
  const auto lp = log_posterior(sentence);
  return static_cast<int>(std::max_element(lp.begin(), lp.end()) - lp.begin());
}

bool Discriminator::operator==(const Discriminator& other) const {
  return dimension_ == other.dimension_ && name_ == other.name_ &&
         classes_ == other.classes_ && alpha_ == other.alpha_ &&
         vocab_size_ == other.vocab_size_ &&
         vocab_fingerprint_ == other.vocab_fingerprint_ &&
         class_docs_ == other.class_docs_ &&
         class_tokens_ == other.class_tokens_ &&
         token_counts_ == other.token_counts_;
}

Discriminator train_discriminator(const Corpus& corpus, int dimension,
                                  double alpha) {
  if (dimension < 0 || static_cast<std::size_t>(dimension) >= corpus.schema.size()) {
    throw Error("discriminator dimension " + std::to_string(dimension) +
                " out of range");
  }
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw Error("discriminator smoothing alpha must be finite and >= 0");
  }
  const auto& dim = corpus.schema.dimension(dimension);
  Discriminator disc;
  disc.dimension_ = dimension;
  disc.name_ = dim.name;
  disc.classes_ = dim.classes;
  disc.alpha_ = alpha;
  disc.vocab_size_ = corpus.vocab.size();
  disc.num_words_ = corpus.vocab.num_words();
  disc.vocab_fingerprint_ = corpus.vocab.fingerprint();
  const std::size_t num_classes = dim.classes.size();
  disc.class_docs_.assign(num_classes, 0);
  disc.class_tokens_.assign(num_classes, 0);
  disc.token_counts_.assign(num_classes * disc.vocab_size_, 0);
  for (const auto& s : corpus.sentences) {
    const int c = s.labels.at(dimension);
    ++disc.class_docs_[c];
    for (TokenId id : s.tokens) {
      if (!Vocabulary::is_word(id)) continue;
      ++disc.token_counts_[c * disc.vocab_size_ + id];
      ++disc.class_tokens_[c];
    }
  }
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (disc.class_docs_[c] == 0) {
      throw Error("no training sentence for class '" + dim.classes[c] +
                  "' of dimension '" + dim.name + "'");
    }
  }
  disc.finalize();
  return disc;
}

std::vector<Discriminator> train_discriminators(const Corpus& corpus,
                                                double alpha) {
  std::vector<Discriminator> discs;
  for (std::size_t d = 0; d < corpus.schema.size(); ++d) {
    discs.push_back(train_discriminator(corpus, static_cast<int>(d), alpha));
  }
  return discs;
}

std::vector<double> constraint_posterior(const Discriminator& disc,
                                         std::span<const TokenId> sentence) {
  return disc.posterior(sentence);
}

double joint_constraint_logprob(std::span<const Discriminator> discs,
                                std::span<const TokenId> sentence,
                                std::span<const int> target) {
  if (discs.size() != target.size()) {
    throw Error("got " + std::to_string(target.size()) + " target labels for " +
                std::to_string(discs.size()) + " discriminators");
  }
  double total = 0.0;
  for (std::size_t j = 0; j < discs.size(); ++j) {
    if (target[j] < 0 || static_cast<std::size_t>(target[j]) >= discs[j].num_classes()) {
      throw Error("target class out of range for dimension '" + discs[j].name() + "'");
    }
    total += discs[j].log_posterior(sentence)[target[j]];
  }
  return total;
}

std::vector<double> target_posteriors(std::span<const Discriminator> discs,
                                      std::span<const TokenId> sentence,
                                      std::span<const int> target) {
  if (discs.size() != target.size()) {
    throw Error("target labels do not match discriminator count");
  }
  std::vector<double> out(discs.size());
  for (std::size_t j = 0; j < discs.size(); ++j) {
    out[j] = std::exp(discs[j].log_posterior(sentence).at(target[j]));
  }
  return out;
}

double accuracy(const Discriminator& disc,
                std::span<const LabeledSentence> sentences) {
  if (sentences.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& s : sentences) {
    if (disc.classify(s.tokens) == s.labels.at(disc.dimension())) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(sentences.size());
}

void write_discriminator(std::ostream& out, const Discriminator& disc) {
  std::size_t records = 0;
  for (auto n : disc.token_counts_) records += n > 0;
  char hash[17];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(disc.vocab_fingerprint_));
  out << kMagic << ' ' << kVersion << " dimension=" << disc.dimension_
      << " name=" << disc.name_ << " classes=" << disc.classes_.size()
      << " alpha=" << format_double(disc.alpha_)
      << " vocab_size=" << disc.vocab_size_ << " vocab_hash=" << hash
      << " records=" << records << '\n';
  for (std::size_t c = 0; c < disc.classes_.size(); ++c) {
    out << "class " << c << ' ' << disc.classes_[c] << ' ' << disc.class_docs_[c]
        << ' ' << disc.class_tokens_[c] << '\n';
  }
  for (std::size_t c = 0; c < disc.classes_.size(); ++c) {
    for (std::size_t w = 0; w < disc.vocab_size_; ++w) {
      const auto n = disc.token_counts_[c * disc.vocab_size_ + w];
      if (n > 0) out << "count " << c << ' ' << w << ' ' << n << '\n';
    }
  }
}

Discriminator read_discriminator(std::istream& in, const Vocabulary& vocab) {
  std::string header;
  if (!std::getline(in, header)) throw Error("discriminator: missing header");
  std::istringstream hs(header);
  std::string magic, version;
  hs >> magic >> version;
  if (magic != kMagic) throw Error("not a gibbsgen discriminator (bad header)");
  if (version != kVersion) {
    throw Error("unsupported discriminator version '" + version + "'");
  }
  Discriminator disc;
  std::size_t num_classes = 0, records = 0;
  std::string hash, field;
  while (hs >> field) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw Error("discriminator: malformed header field '" + field + "'");
    const auto key = field.substr(0, eq);
    const auto value = field.substr(eq + 1);
    if (key == "dimension") disc.dimension_ = std::stoi(value);
    else if (key == "name") disc.name_ = value;
    else if (key == "classes") num_classes = std::stoull(value);
    else if (key == "alpha") disc.alpha_ = std::strtod(value.c_str(), nullptr);
    else if (key == "vocab_size") disc.vocab_size_ = std::stoull(value);
    else if (key == "vocab_hash") hash = value;
    else if (key == "records") records = std::stoull(value);
  }
  if (disc.vocab_size_ != vocab.size() || hash != vocab.fingerprint_hex()) {
    throw Error("discriminator '" + disc.name_ + "' was trained with a different vocabulary");
  }
  disc.vocab_fingerprint_ = vocab.fingerprint();
  disc.num_words_ = vocab.num_words();
  disc.classes_.resize(num_classes);
  disc.class_docs_.assign(num_classes, 0);
  disc.class_tokens_.assign(num_classes, 0);
  disc.token_counts_.assign(num_classes * disc.vocab_size_, 0);
  std::string line, kind;
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (!std::getline(in, line)) throw Error("discriminator: truncated class list");
    std::istringstream ls(line);
    std::size_t idx = 0;
    ls >> kind >> idx;
    if (kind != "class" || idx != c) throw Error("discriminator: bad class record");
    ls >> disc.classes_[c] >> disc.class_docs_[c] >> disc.class_tokens_[c];
    if (!ls || disc.class_docs_[c] == 0) throw Error("discriminator: bad class record");
  }
  for (std::size_t r = 0; r < records; ++r) {
    if (!std::getline(in, line)) throw Error("discriminator: truncated count list");
    std::istringstream ls(line);
    std::size_t c = 0, w = 0;
    std::uint64_t n = 0;
    ls >> kind >> c >> w >> n;
    if (!ls || kind != "count" || c >= num_classes || w >= disc.vocab_size_) {
      throw Error("discriminator: bad count record");
    }
    disc.token_counts_[c * disc.vocab_size_ + w] = n;
  }
  disc.finalize();
  return disc;
}

}  // namespace gibbsgen
