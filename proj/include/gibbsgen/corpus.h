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

#ifndef GIBBSGEN_CORPUS_H_
#define GIBBSGEN_CORPUS_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace gibbsgen {

using TokenId = std::int32_t;
using Sentence = std::vector<TokenId>;

// All recoverable failures (bad input files, inconsistent models, invalid
// arguments) are reported with this exception type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bidirectional token <-> id map. The four special tokens always occupy
// ids 0..3; ordinary tokens follow in descending corpus frequency, ties
// broken lexicographically.
class Vocabulary {
 public:
  static constexpr TokenId kUnk = 0;
  static constexpr TokenId kBos = 1;
  static constexpr TokenId kEos = 2;
  static constexpr TokenId kPad = 3;
  static constexpr TokenId kNumSpecials = 4;

  static constexpr std::string_view kUnkToken = "<unk>";
  static constexpr std::string_view kBosToken = "<s>";
  static constexpr std::string_view kEosToken = "</s>";
  static constexpr std::string_view kPadToken = "<pad>";

  // Specials-only vocabulary.
  Vocabulary();

  // Builds from an explicit id-ordered token list whose first four entries
  // must be the special tokens. `counts` may be empty or parallel to tokens.
  Vocabulary(std::vector<std::string> tokens,
             std::vector<std::uint64_t> counts);

  std::size_t size() const { return tokens_.size(); }

  // Returns kUnk for unknown tokens.
  TokenId id(std::string_view token) const;
  bool contains(std::string_view token) const;
  const std::string& token(TokenId id) const;
  std::uint64_t count(TokenId id) const { return counts_.at(id); }

  // Ids that may appear inside a sentence: every ordinary token plus UNK.
  // BOS, EOS and PAD are structural and never sampled as words.
  static bool is_word(TokenId id) {
    return id != kBos && id != kEos && id != kPad;
  }
  std::vector<TokenId> word_ids() const;
  std::size_t num_words() const { return tokens_.size() - 3; }

  // Stable fingerprint of the id -> token assignment (FNV-1a, 64 bit).
  std::uint64_t fingerprint() const;
  std::string fingerprint_hex() const;

  const std::vector<std::string>& tokens() const { return tokens_; }

  bool operator==(const Vocabulary& other) const {
    return tokens_ == other.tokens_;
  }

 private:
  std::vector<std::string> tokens_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::string, TokenId> index_;
};

struct ConstraintDimension {
  std::string name;
  std::vector<std::string> classes;

  // Throws Error listing the valid classes when `label` is unknown.
  int class_index(std::string_view label) const;
};

class ConstraintSchema {
 public:
  ConstraintSchema() = default;
  explicit ConstraintSchema(std::vector<ConstraintDimension> dims);

  std::size_t size() const { return dims_.size(); }
  bool empty() const { return dims_.empty(); }
  const ConstraintDimension& dimension(std::size_t i) const {
    return dims_.at(i);
  }
  const std::vector<ConstraintDimension>& dimensions() const { return dims_; }
  int dimension_index(std::string_view name) const;

  // Number of distinct label combinations (product of class counts).
  std::size_t num_combinations() const;
  // Every label combination in row-major order (last dimension fastest).
  std::vector<std::vector<int>> combinations() const;

  // "sentiment=positive,domain=books"
  std::string format_labels(std::span<const int> labels) const;
  // Parses "dim=class[,dim=class]". Every dimension must be given exactly
  // once.
  std::vector<int> parse_labels(std::string_view text) const;

  bool operator==(const ConstraintSchema& other) const;

 private:
  std::vector<ConstraintDimension> dims_;
};

// Schema text: one "dimension_name: class1,class2,..." per line.
ConstraintSchema parse_schema(std::istream& in);
ConstraintSchema load_schema(const std::string& path);
void write_schema(std::ostream& out, const ConstraintSchema& schema);

struct LabeledSentence {
  Sentence tokens;
  std::vector<int> labels;

  bool operator==(const LabeledSentence&) const = default;
};

struct Corpus {
  ConstraintSchema schema;
  std::vector<LabeledSentence> sentences;
  Vocabulary vocab;
};

// Token counts decide inclusion; the specials are always present.
Vocabulary build_vocabulary(
    std::span<const std::vector<std::string>> sentences, int min_count);

Sentence encode(std::span<const std::string> sentence,
                const Vocabulary& vocab);
std::vector<std::string> decode(std::span<const TokenId> sentence,
                                const Vocabulary& vocab);
std::string join_tokens(std::span<const TokenId> sentence,
                        const Vocabulary& vocab);

std::vector<std::string> split_tokens(std::string_view text);

// A corpus record before vocabulary mapping.
struct RawRecord {
  std::vector<std::string> tokens;
  std::vector<int> labels;
  int line = 0;
};

// Parses the TAB-separated corpus format: one label field per schema
// dimension, then the space-separated sentence. Blank lines are skipped.
// `source` is used in error messages.
std::vector<RawRecord> parse_corpus_records(std::istream& in,
                                            const ConstraintSchema& schema,
                                            const std::string& source);

// Builds the vocabulary from the records themselves.
Corpus make_corpus(const std::vector<RawRecord>& records,
                   ConstraintSchema schema, int min_count);
// Encodes against an existing vocabulary.
Corpus make_corpus(const std::vector<RawRecord>& records,
                   ConstraintSchema schema, Vocabulary vocab);

Corpus load_corpus(const std::string& path, const ConstraintSchema& schema,
                   int min_count);
Corpus load_corpus(const std::string& path, const ConstraintSchema& schema,
                   const Vocabulary& vocab);

void write_corpus(std::ostream& out, const Corpus& corpus);

void write_vocabulary(std::ostream& out, const Vocabulary& vocab);
Vocabulary read_vocabulary(std::istream& in);

}  // namespace gibbsgen

#endif  // GIBBSGEN_CORPUS_H_
