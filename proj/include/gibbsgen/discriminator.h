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

#ifndef GIBBSGEN_DISCRIMINATOR_H_
#define GIBBSGEN_DISCRIMINATOR_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gibbsgen/corpus.h"

namespace gibbsgen {

// Multinomial naive Bayes over bag-of-words for one constraint dimension.
//
//   log p(c | w) = log prior(c) + sum_t log p(w_t | c) - log Z
//   p(w | c)     = (n(c, w) + alpha) / (N(c) + alpha * |W|)
//
// where |W| counts the word ids of the vocabulary (UNK included; BOS, EOS
// and PAD are ignored wherever they appear).
class Discriminator {
 public:
  Discriminator() = default;

  int dimension() const { return dimension_; }
  const std::string& name() const { return name_; }
  std::size_t num_classes() const { return class_docs_.size(); }
  double alpha() const { return alpha_; }
  std::uint64_t vocab_fingerprint() const { return vocab_fingerprint_; }

  std::vector<double> priors() const;

  // Normalized log posterior over classes.
  std::vector<double> log_posterior(std::span<const TokenId> sentence) const;
  std::vector<double> posterior(std::span<const TokenId> sentence) const;

  // Most probable class; ties go to the lowest class index.
  int classify(std::span<const TokenId> sentence) const;

  bool operator==(const Discriminator& other) const;

 private:
  friend Discriminator train_discriminator(const Corpus&, int, double);
  friend void write_discriminator(std::ostream&, const Discriminator&);
  friend Discriminator read_discriminator(std::istream&, const Vocabulary&);

  void finalize();

  int dimension_ = 0;
  std::string name_;
  std::vector<std::string> classes_;
  double alpha_ = 1.0;
  std::size_t vocab_size_ = 0;
  std::size_t num_words_ = 0;
  std::uint64_t vocab_fingerprint_ = 0;
  std::vector<std::uint64_t> class_docs_;
  std::vector<std::uint64_t> class_tokens_;
  // token_counts_[c * vocab_size_ + w]
  std::vector<std::uint64_t> token_counts_;

  // Derived tables.
  std::vector<double> log_prior_;
  std::vector<double> log_likelihood_;  // same layout as token_counts_
  std::vector<bool> has_evidence_;      // false for tokens unseen by every class
};

Discriminator train_discriminator(const Corpus& corpus, int dimension,
                                  double alpha = 1.0);

// All dimensions of the corpus schema, in schema order.
std::vector<Discriminator> train_discriminators(const Corpus& corpus,
                                                double alpha = 1.0);

std::vector<double> constraint_posterior(const Discriminator& disc,
                                         std::span<const TokenId> sentence);

// sum_j log p(c_j = target_j | sentence); 0 when there are no dimensions.
double joint_constraint_logprob(std::span<const Discriminator> discs,
                                std::span<const TokenId> sentence,
                                std::span<const int> target);

// p(c_j = target_j | sentence) per dimension.
std::vector<double> target_posteriors(std::span<const Discriminator> discs,
                                      std::span<const TokenId> sentence,
                                      std::span<const int> target);

// Fraction of sentences whose predicted class equals the gold label.
double accuracy(const Discriminator& disc,
                std::span<const LabeledSentence> sentences);

void write_discriminator(std::ostream& out, const Discriminator& disc);
Discriminator read_discriminator(std::istream& in, const Vocabulary& vocab);

}  // namespace gibbsgen

#endif  // GIBBSGEN_DISCRIMINATOR_H_
