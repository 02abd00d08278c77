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

#include "gibbsgen/corpus.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace gibbsgen {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string> special_tokens() {
  return {std::string(Vocabulary::kUnkToken), std::string(Vocabulary::kBosToken),
          std::string(Vocabulary::kEosToken), std::string(Vocabulary::kPadToken)};
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  return in;
}

}  // namespace

// ---------------------------------------------------------------------------
// Vocabulary

Vocabulary::Vocabulary() : Vocabulary(special_tokens(), {}) {}

Vocabulary::Vocabulary(std::vector<std::string> tokens,
                       std::vector<std::uint64_t> counts)
    : tokens_(std::move(tokens)), counts_(std::move(counts)) {
  const auto specials = special_tokens();
  if (tokens_.size() < specials.size() ||
      !std::equal(specials.begin(), specials.end(), tokens_.begin())) {
    throw Error("vocabulary must start with the special tokens <unk> <s> </s> <pad>");
  }
  if (counts_.empty()) counts_.assign(tokens_.size(), 0);
  if (counts_.size() != tokens_.size()) {
    throw Error("vocabulary counts do not match token list");
  }
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (tokens_[i].empty()) throw Error("empty token in vocabulary");
    if (!index_.emplace(tokens_[i], static_cast<TokenId>(i)).second) {
      throw Error("duplicate vocabulary token '" + tokens_[i] + "'");
    }
  }
}

TokenId Vocabulary::id(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnk : it->second;
}

bool Vocabulary::contains(std::string_view token) const {
  return index_.count(std::string(token)) > 0;
}

const std::string& Vocabulary::token(TokenId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
    throw Error("token id " + std::to_string(id) + " out of range");
  }
  return tokens_[id];
}

std::vector<TokenId> Vocabulary::word_ids() const {
  std::vector<TokenId> ids;
  ids.reserve(num_words());
  for (TokenId id = 0; id < static_cast<TokenId>(tokens_.size()); ++id) {
    if (is_word(id)) ids.push_back(id);
  }
  return ids;
}

std::uint64_t Vocabulary::fingerprint() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto& tok : tokens_) {
    for (unsigned char c : tok) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    h ^= '\n';
    h *= 1099511628211ULL;
  }
  return h;
}

std::string Vocabulary::fingerprint_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fingerprint()));
  return buf;
}

Vocabulary build_vocabulary(
    std::span<const std::vector<std::string>> sentences, int min_count) {
  if (min_count < 1) throw Error("min_count must be >= 1");
  std::unordered_map<std::string, std::uint64_t> freq;
  for (const auto& sentence : sentences) {
    for (const auto& tok : sentence) ++freq[tok];
  }
  const auto specials = special_tokens();
  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (auto& [tok, n] : freq) {
    if (n < static_cast<std::uint64_t>(min_count)) continue;
    if (std::find(specials.begin(), specials.end(), tok) != specials.end()) {
      continue;
    }
    kept.emplace_back(tok, n);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> tokens = specials;
  std::vector<std::uint64_t> counts(specials.size(), 0);
  for (auto& [tok, n] : kept) {
    tokens.push_back(tok);
    counts.push_back(n);
  }
  return Vocabulary(std::move(tokens), std::move(counts));
}

Sentence encode(std::span<const std::string> sentence,
                const Vocabulary& vocab) {
  Sentence ids;
  ids.reserve(sentence.size());
  for (const auto& tok : sentence) ids.push_back(vocab.id(tok));
  return ids;
}

std::vector<std::string> decode(std::span<const TokenId> sentence,
                                const Vocabulary& vocab) {
  std::vector<std::string> out;
  out.reserve(sentence.size());
  for (TokenId id : sentence) out.push_back(vocab.token(id));
  return out;
}

std::string join_tokens(std::span<const TokenId> sentence,
                        const Vocabulary& vocab) {
  std::string out;
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    if (i) out += ' ';
    out += vocab.token(sentence[i]);
  }
  return out;
}

std::vector<std::string> split_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && text[i] == ' ') ++i;
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ') ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

void write_vocabulary(std::ostream& out, const Vocabulary& vocab) {
  out << "gibbsgen-vocab v1 size=" << vocab.size()
      << " hash=" << vocab.fingerprint_hex() << '\n';
  for (TokenId id = 0; id < static_cast<TokenId>(vocab.size()); ++id) {
    out << vocab.token(id) << '\t' << vocab.count(id) << '\n';
  }
}

Vocabulary read_vocabulary(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) ||
      header.rfind("gibbsgen-vocab v1 size=", 0) != 0) {
    throw Error("not a gibbsgen vocabulary file (bad header)");
  }
  std::size_t size = 0;
  std::string hash;
  {
    std::istringstream hs(header.substr(std::string("gibbsgen-vocab v1 ").size()));
    std::string field;
    while (hs >> field) {
      if (field.rfind("size=", 0) == 0) size = std::stoull(field.substr(5));
      if (field.rfind("hash=", 0) == 0) hash = field.substr(5);
    }
  }
  std::vector<std::string> tokens;
  std::vector<std::uint64_t> counts;
  std::string line;
  while (tokens.size() < size && std::getline(in, line)) {
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error("vocabulary line " + std::to_string(tokens.size() + 2) +
                  ": expected 'token<TAB>count'");
    }
    tokens.push_back(line.substr(0, tab));
    counts.push_back(std::stoull(line.substr(tab + 1)));
  }
  if (tokens.size() != size) throw Error("vocabulary file is truncated");
  Vocabulary vocab(std::move(tokens), std::move(counts));
  if (!hash.empty() && hash != vocab.fingerprint_hex()) {
    throw Error("vocabulary hash mismatch");
  }
  return vocab;
}

// ---------------------------------------------------------------------------
// Schema

int ConstraintDimension::class_index(std::string_view label) const {
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (classes[c] == label) return static_cast<int>(c);
  }
  std::string valid;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (c) valid += ", ";
    valid += classes[c];
  }
  throw Error("unknown class '" + std::string(label) + "' for dimension '" +
              name + "' (valid: " + valid + ")");
}

ConstraintSchema::ConstraintSchema(std::vector<ConstraintDimension> dims)
    : dims_(std::move(dims)) {
  std::set<std::string> names;
  const auto bad_name = [](const std::string& s) {
    return s.empty() || s.find_first_of(" \t\r\n,=:") != std::string::npos;
  };
  for (const auto& d : dims_) {
    if (bad_name(d.name)) {
      throw Error("invalid constraint dimension name '" + d.name + "'");
    }
    if (!names.insert(d.name).second) {
      throw Error("duplicate constraint dimension '" + d.name + "'");
    }
    if (d.classes.size() < 2) {
      throw Error("constraint dimension '" + d.name +
                  "' needs at least two classes");
    }
    std::set<std::string> seen;
    for (const auto& c : d.classes) {
      if (bad_name(c)) {
        throw Error("invalid class label '" + c + "' in dimension '" + d.name + "'");
      }
      if (!seen.insert(c).second) {
        throw Error("duplicate class '" + c + "' in dimension '" + d.name + "'");
      }
    }
  }
}

int ConstraintSchema::dimension_index(std::string_view name) const {
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (dims_[i].name == name) return static_cast<int>(i);
  }
  throw Error("unknown constraint dimension '" + std::string(name) + "'");
}

std::size_t ConstraintSchema::num_combinations() const {
  std::size_t n = 1;
  for (const auto& d : dims_) n *= d.classes.size();
  return n;
}

std::vector<std::vector<int>> ConstraintSchema::combinations() const {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(dims_.size(), 0);
  const std::size_t total = num_combinations();
  for (std::size_t n = 0; n < total; ++n) {
    out.push_back(cur);
    for (int d = static_cast<int>(dims_.size()) - 1; d >= 0; --d) {
      if (++cur[d] < static_cast<int>(dims_[d].classes.size())) break;
      cur[d] = 0;
    }
  }
  return out;
}

std::string ConstraintSchema::format_labels(std::span<const int> labels) const {
  if (labels.size() != dims_.size()) {
    throw Error("label count does not match schema dimension count");
  }
  std::string out;
  for (std::size_t d = 0; d < dims_.size(); ++d) {
    if (d) out += ',';
    out += dims_[d].name + "=" + dims_[d].classes.at(labels[d]);
  }
  return out;
}

std::vector<int> ConstraintSchema::parse_labels(std::string_view text) const {
  std::vector<int> labels(dims_.size(), -1);
  text = trim(text);
  if (!text.empty()) {
    for (auto item : split(text, ',')) {
      item = trim(item);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) {
        throw Error("label '" + std::string(item) + "' is not of the form dim=class");
      }
      const int d = dimension_index(trim(item.substr(0, eq)));
      if (labels[d] != -1) {
        throw Error("dimension '" + dims_[d].name + "' given twice");
      }
      labels[d] = dims_[d].class_index(trim(item.substr(eq + 1)));
    }
  }
  for (std::size_t d = 0; d < dims_.size(); ++d) {
    if (labels[d] == -1) {
      throw Error("missing label for dimension '" + dims_[d].name + "'");
    }
  }
  return labels;
}

bool ConstraintSchema::operator==(const ConstraintSchema& other) const {
  if (dims_.size() != other.dims_.size()) return false;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (dims_[i].name != other.dims_[i].name ||
        dims_[i].classes != other.dims_[i].classes) {
      return false;
    }
  }
  return true;
}

ConstraintSchema parse_schema(std::istream& in) {
  std::vector<ConstraintDimension> dims;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto colon = body.find(':');
    if (colon == std::string_view::npos) {
      throw Error("schema line " + std::to_string(lineno) +
                  ": expected 'name: class1,class2,...'");
    }
    ConstraintDimension dim;
    dim.name = std::string(trim(body.substr(0, colon)));
    for (auto c : split(body.substr(colon + 1), ',')) {
      dim.classes.emplace_back(trim(c));
    }
    dims.push_back(std::move(dim));
  }
  return ConstraintSchema(std::move(dims));
}

ConstraintSchema load_schema(const std::string& path) {
  auto in = open_input(path);
  try {
    return parse_schema(in);
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

void write_schema(std::ostream& out, const ConstraintSchema& schema) {
  for (const auto& d : schema.dimensions()) {
    out << d.name << ": ";
    for (std::size_t c = 0; c < d.classes.size(); ++c) {
      if (c) out << ',';
      out << d.classes[c];
    }
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Corpus

std::vector<RawRecord> parse_corpus_records(std::istream& in,
                                            const ConstraintSchema& schema,
                                            const std::string& source) {
  std::vector<RawRecord> records;
  std::string line;
  int lineno = 0;
  const std::size_t expected = schema.size() + 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto where = source + ":" + std::to_string(lineno) + ": ";
    const auto fields = split(line, '\t');
    if (fields.size() != expected) {
      throw Error(where + "expected " + std::to_string(expected) +
                  " TAB-separated fields (" + std::to_string(schema.size()) +
                  " labels + sentence), found " + std::to_string(fields.size()));
    }
    RawRecord rec;
    rec.line = lineno;
    for (std::size_t d = 0; d < schema.size(); ++d) {
      try {
        rec.labels.push_back(schema.dimension(d).class_index(fields[d]));
      } catch (const Error& e) {
        throw Error(where + e.what());
      }
    }
    rec.tokens = split_tokens(fields.back());
    if (rec.tokens.empty()) throw Error(where + "empty sentence");
    records.push_back(std::move(rec));
  }
  return records;
}

Corpus make_corpus(const std::vector<RawRecord>& records,
                   ConstraintSchema schema, int min_count) {
  std::vector<std::vector<std::string>> raw;
  raw.reserve(records.size());
  for (const auto& r : records) raw.push_back(r.tokens);
  return make_corpus(records, std::move(schema), build_vocabulary(raw, min_count));
}

Corpus make_corpus(const std::vector<RawRecord>& records,
                   ConstraintSchema schema, Vocabulary vocab) {
  Corpus corpus{std::move(schema), {}, std::move(vocab)};
  corpus.sentences.reserve(records.size());
  for (const auto& r : records) {
    if (r.labels.size() != corpus.schema.size()) {
      throw Error("record labels do not match schema");
    }
    corpus.sentences.push_back({encode(r.tokens, corpus.vocab), r.labels});
  }
  return corpus;
}

Corpus load_corpus(const std::string& path, const ConstraintSchema& schema,
                   int min_count) {
  auto in = open_input(path);
  return make_corpus(parse_corpus_records(in, schema, path), schema, min_count);
}

Corpus load_corpus(const std::string& path, const ConstraintSchema& schema,
                   const Vocabulary& vocab) {
  auto in = open_input(path);
  return make_corpus(parse_corpus_records(in, schema, path), schema, vocab);
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& s : corpus.sentences) {
    for (std::size_t d = 0; d < corpus.schema.size(); ++d) {
      out << corpus.schema.dimension(d).classes.at(s.labels[d]) << '\t';
    }
    out << join_tokens(s.tokens, corpus.vocab) << '\n';
  }
}

}  // namespace gibbsgen
