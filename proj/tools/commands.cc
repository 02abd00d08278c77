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

#include "commands.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "gibbsgen/baselines.h"
#include "gibbsgen/corpus.h"
#include "gibbsgen/discriminator.h"
#include "gibbsgen/eval.h"
#include "gibbsgen/lm.h"
#include "gibbsgen/sampler.h"

namespace gibbsgen::tools {
namespace fs = std::filesystem;

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  return out;
}

// Runs `read` on the file, prefixing any error with the path.
template <typename F>
auto read_file(const fs::path& path, F read) {
  auto in = open_in(path);
  try {
    return read(in);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

std::string disc_file(const std::string& name) { return "disc_" + name + ".txt"; }

struct Models {
  ConstraintSchema schema;
  Vocabulary vocab;
  NGramModel lm;
  ConditionalLM clm;
  std::vector<Discriminator> discs;
  Corpus train;
};

Models load_models(const fs::path& dir) {
  Models m;
  m.schema = read_file(dir / "schema.txt", [](std::istream& in) { return parse_schema(in); });
  m.vocab = read_file(dir / "vocab.txt", [](std::istream& in) { return read_vocabulary(in); });
  m.lm = read_file(dir / "lm.txt", [&](std::istream& in) { return read_ngram(in, m.vocab); });
  m.clm = read_file(dir / "clm.txt",
                    [&](std::istream& in) { return read_conditional_lm(in, m.vocab); });
  for (const auto& dim : m.schema.dimensions()) {
    m.discs.push_back(read_file(dir / disc_file(dim.name), [&](std::istream& in) {
      return read_discriminator(in, m.vocab);
    }));
  }
  m.train = load_corpus((dir / "train.tsv").string(), m.schema, m.vocab);
  return m;
}

std::string join_doubles(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += fmt("%.4f", v[i]);
  }
  return out;
}

std::string lower_squash(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) {
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

// Hyper-parameter keys of neural generators. They are accepted so shared
// config files load, and have no counterpart here.
const std::set<std::string>& ignored_keys() {
  static const std::set<std::string> keys = {
      "hidden-units", "word-vec-size", "constraint-embedding-size"};
  return keys;
}

}  // namespace

std::string canonical_key(const std::string& name) {
  static const std::map<std::string, std::string> aliases = {
      {"turnsingibbssampling", "turns"},
      {"fixedsentencelength", "length"},
      {"burn-inturns", "burn-in"},
      {"threshold", "threshold"},
      {"sentencessampledinrs", "rs-samples"},
      {"beamsize", "beam-size"},
  };
  static const std::set<std::string> flags = {
      "method", "labels", "count",     "turns",      "burn-in", "length",  "threshold",
      "candidates", "beam-size", "rs-samples", "top-w", "max-len", "seed", "random-scan"};
  auto key = lower_squash(name);
  while (!key.empty() && key.front() == '-') key.erase(0, 1);
  if (flags.count(key)) return key;
  if (const auto it = aliases.find(key); it != aliases.end()) return it->second;
  // "Candidate word number(k)", however the k is typeset.
  if (key.rfind("candidatewordnumber", 0) == 0) return "candidates";
  if (ignored_keys().count(key)) return key;
  return "";
}

void apply_config(const std::string& path, GenerateOptions& opts,
                  const std::set<std::string>& skip) {
  auto in = open_in(path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto where = path + ":" + std::to_string(lineno) + ": ";
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(where + "expected key = value");
    const auto key = canonical_key(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw Error(where + "unknown key '" + trim(line.substr(0, eq)) + "'");
    if (ignored_keys().count(key) || skip.count(key)) continue;
    try {
      if (key == "method") opts.method = value;
      else if (key == "labels") opts.labels = value;
      else if (key == "count") opts.count = std::stoi(value);
      else if (key == "turns") opts.turns = std::stoi(value);
      else if (key == "burn-in") opts.burn_in = std::stoi(value);
      else if (key == "length") opts.length = std::stoi(value);
      else if (key == "threshold") opts.threshold = std::stod(value);
      else if (key == "candidates") opts.candidates = std::stoi(value);
      else if (key == "beam-size") opts.beam_size = std::stoi(value);
      else if (key == "rs-samples") opts.rs_samples = std::stoi(value);
      else if (key == "top-w") opts.top_w = std::stoi(value);
      else if (key == "max-len") opts.max_len = std::stoi(value);
      else if (key == "seed") opts.seed = std::stoull(value);
      else if (key == "random-scan") opts.random_scan = value == "1" || value == "true";
    } catch (const std::logic_error&) {
      throw Error(where + "bad value '" + value + "' for " + key);
    }
  }
}

int cmd_train(const TrainOptions& opts, std::ostream& out) {
  if (opts.heldout < 0.0 || opts.heldout >= 1.0) {
    throw Error("held-out fraction must be in [0, 1)");
  }
  const auto schema = load_schema(opts.schema);
  auto corpus_in = open_in(opts.corpus);
  const auto records = parse_corpus_records(corpus_in, schema, opts.corpus);
  if (records.empty()) throw Error(opts.corpus + ": no sentences");

  // Seeded split; both halves keep file order.
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(opts.seed);
  std::shuffle(order.begin(), order.end(), rng);
  const auto n_held = std::min(records.size() - 1,
                               static_cast<std::size_t>(opts.heldout * records.size()));
  std::sort(order.begin(), order.begin() + n_held);
  std::sort(order.begin() + n_held, order.end());
  std::vector<RawRecord> held_rec, train_rec;
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < n_held ? held_rec : train_rec).push_back(records[order[i]]);
  }

  const auto train = make_corpus(train_rec, schema, opts.min_count);
  const auto held = make_corpus(held_rec, schema, train.vocab);
  const auto lm = train_ngram(train, opts.order);
  const auto clm = train_conditional_lm(train, opts.order);
  const auto discs = train_discriminators(train, opts.alpha);

  const fs::path dir(opts.out_dir);
  fs::create_directories(dir);
  {
    auto f = open_out(dir / "schema.txt");
    write_schema(f, schema);
  }
  {
    auto f = open_out(dir / "vocab.txt");
    write_vocabulary(f, train.vocab);
  }
  {
    auto f = open_out(dir / "lm.txt");
    write_ngram(f, lm);
  }
  {
    auto f = open_out(dir / "clm.txt");
    write_conditional_lm(f, clm);
  }
  for (const auto& d : discs) {
    auto f = open_out(dir / disc_file(d.name()));
    write_discriminator(f, d);
  }
  {
    auto f = open_out(dir / "train.tsv");
    write_corpus(f, train);
  }
  {
    auto f = open_out(dir / "heldout.tsv");
    write_corpus(f, held);
  }

  out << "sentences: " << train.sentences.size() << " train, " << held.sentences.size()
      << " held out\n";
  out << "vocabulary: " << train.vocab.size() << " tokens (min count " << opts.min_count
      << ")\n";
  const bool has_held = !held.sentences.empty();
  const auto& eval_set = has_held ? held.sentences : train.sentences;
  const char* split = has_held ? "held-out" : "train";
  out << "lm order " << opts.order << ": " << split << " perplexity "
      << fmt("%.3f", perplexity(lm, eval_set)) << "\n";
  for (const auto& [labels, model] : clm.models()) {
    std::vector<LabeledSentence> subset;
    for (const auto& s : eval_set) {
      if (s.labels == labels) subset.push_back(s);
    }
    if (subset.empty()) continue;
    out << "conditional lm [" << schema.format_labels(labels) << "]: " << split
        << " perplexity " << fmt("%.3f", perplexity(model, subset)) << "\n";
  }
  for (const auto& d : discs) {
    out << "discriminator " << d.name() << ": " << split << " accuracy "
        << fmt("%.4f", accuracy(d, eval_set)) << "\n";
  }
  return 0;
}

int cmd_generate(const GenerateOptions& opts, std::ostream& out, std::ostream& log) {
  if (opts.method != "gibbs" && opts.method != "beam" && opts.method != "reject") {
    throw Error("unknown method '" + opts.method + "' (valid: gibbs, beam, reject)");
  }
  if (opts.count < 1) throw Error("count must be >= 1");
  if (opts.beam_size < 1 || opts.rs_samples < 1 || opts.top_w < 1 || opts.max_len < 1) {
    throw Error("beam size, rs samples, top-w and max length must be >= 1");
  }
  const auto models = load_models(opts.model_dir);

  std::vector<std::vector<int>> label_sets;
  if (!opts.labels.empty() || models.schema.empty()) {
    label_sets.push_back(models.schema.parse_labels(opts.labels));
  } else {
    label_sets = models.schema.combinations();
  }

  SamplerConfig config;
  config.turns = opts.turns;
  config.burn_in = opts.burn_in;
  config.length = opts.length;
  config.candidates = opts.candidates;
  config.threshold = opts.threshold;
  config.random_scan = opts.random_scan;
  if (opts.method == "gibbs") {
    config.labels = label_sets.front();
    config.validate();
  }

  std::ofstream file_out, trace_out;
  std::ostream* sink = &out;
  if (!opts.out.empty()) {
    file_out = open_out(opts.out);
    sink = &file_out;
  }
  if (!opts.trace.empty()) trace_out = open_out(opts.trace);

  for (int g = 0; g < opts.count; ++g) {
    const auto& labels = label_sets[static_cast<std::size_t>(g) % label_sets.size()];
    const auto label_text = models.schema.format_labels(labels);
    // One stream per generation, so output g does not depend on the others.
    std::seed_seq seq{static_cast<std::uint32_t>(opts.seed),
                      static_cast<std::uint32_t>(opts.seed >> 32),
                      static_cast<std::uint32_t>(g)};
    Rng rng(seq);

    GenerationResult result;
    if (opts.method == "gibbs") {
      config.labels = labels;
      result = run(config, models.train, models.lm, models.discs, rng);
    } else if (opts.method == "reject") {
      result = reject_sample(models.lm, models.discs, labels, opts.rs_samples, opts.threshold,
                             opts.top_w, opts.max_len, rng);
    } else {
      const auto beam = beam_search(models.clm, labels, opts.beam_size, opts.max_len);
      auto snap = make_snapshot(models.lm, models.discs, labels, beam.tokens, 0, 0);
      result.output = snap.tokens;
      result.output_valid = snap.valid(opts.threshold);
      result.output_lm_logprob = snap.lm_logprob;
      result.output_posteriors = snap.posteriors;
      result.valid_count = result.output_valid;
      result.total_count = 1;
    }
    if (!result.output) throw Error("generation produced no sentence");

    *sink << label_text << '\t' << (result.output_valid ? 1 : 0) << '\t'
          << fmt("%.6f", result.output_lm_logprob) << '\t'
          << join_tokens(*result.output, models.vocab) << '\n';
    log << "[" << g << "] " << opts.method << " labels=" << label_text
        << " valid=" << result.output_valid
        << " lm=" << fmt("%.4f", result.output_lm_logprob)
        << " posteriors=" << join_doubles(result.output_posteriors)
        << " valid_samples=" << result.valid_count << "/" << result.total_count << "\n";

    if (trace_out.is_open()) {
      for (std::size_t s = 0; s < result.snapshots.size(); ++s) {
        const auto& sn = result.snapshots[s];
        // Reject samples have no turn; their position column is the draw index.
        const int position = opts.method == "reject" ? static_cast<int>(s) : sn.position;
        trace_out << g << '\t' << sn.turn << '\t' << position << '\t' << label_text << '\t'
                  << fmt("%.6f", sn.lm_logprob) << '\t' << join_tokens(sn.tokens, models.vocab)
                  << '\n';
      }
    }
  }
  return 0;
}

namespace {

// Splits a TAB-separated line into exactly `n` fields.
std::vector<std::string> fields(const std::string& line, std::size_t n,
                                const std::string& where) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  if (out.size() != n) {
    throw Error(where + "expected " + std::to_string(n) + " TAB-separated fields, found " +
                std::to_string(out.size()));
  }
  return out;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

int cmd_eval(const EvalOptions& opts, std::ostream& out) {
  const auto models = load_models(opts.model_dir);
  const std::string refs_path = opts.references.empty()
                                    ? (fs::path(opts.model_dir) / "train.tsv").string()
                                    : opts.references;
  const auto refs = load_corpus(refs_path, models.schema, models.vocab);

  std::vector<GeneratedSentence> generated;
  std::vector<Snapshot> outputs;
  {
    auto in = open_in(opts.generated);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      line = strip_cr(line);
      if (trim(line).empty()) continue;
      const auto where = opts.generated + ":" + std::to_string(lineno) + ": ";
      const auto f = fields(line, 4, where);
      GeneratedSentence g;
      try {
        g.labels = models.schema.parse_labels(f[0]);
      } catch (const Error& e) {
        throw Error(where + e.what());
      }
      g.tokens = encode(split_tokens(f[3]), models.vocab);
      if (g.tokens.empty()) throw Error(where + "empty sentence");
      outputs.push_back(make_snapshot(models.lm, models.discs, g.labels, g.tokens, 0, 0));
      generated.push_back(std::move(g));
    }
  }
  if (generated.empty()) throw Error(opts.generated + ": no generated sentences");

  std::vector<Snapshot> trace;
  if (!opts.trace.empty()) {
    auto in = open_in(opts.trace);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      line = strip_cr(line);
      if (trim(line).empty()) continue;
      const auto where = opts.trace + ":" + std::to_string(lineno) + ": ";
      const auto f = fields(line, 6, where);
      try {
        const auto labels = models.schema.parse_labels(f[3]);
        trace.push_back(make_snapshot(models.lm, models.discs, labels,
                                      encode(split_tokens(f[5]), models.vocab),
                                      std::stoi(f[1]), std::stoi(f[2])));
      } catch (const std::exception& e) {
        throw Error(where + e.what());
      }
    }
  }

  std::vector<Sentence> sentences;
  for (const auto& g : generated) sentences.push_back(g.tokens);
  const auto ll = loglik_per_word(sentences, models.lm);
  const double ll_mean = std::accumulate(ll.begin(), ll.end(), 0.0) / ll.size();
  const double bleu_nobp = avg_bleu(generated, refs, false);
  const double bleu_bp = avg_bleu(generated, refs, true);
  const double ratio = valid_ratio(outputs, opts.threshold);

  out << "generated sentences: " << generated.size() << "\n";
  out << "reference sentences: " << refs.sentences.size() << "\n";
  out << "avg BLEU-4 without brevity penalty: " << fmt("%.6f", bleu_nobp) << "\n";
  out << "avg BLEU-4 with brevity penalty: " << fmt("%.6f", bleu_bp) << "\n";
  out << "valid ratio of outputs: " << fmt("%.4f", ratio) << "\n";
  std::optional<double> trace_ratio;
  if (!trace.empty()) {
    trace_ratio = valid_ratio(trace, opts.threshold);
    out << "valid ratio of sampled sentences: " << fmt("%.4f", *trace_ratio) << " over "
        << trace.size() << "\n";
  }
  out << "log-likelihood per word: mean " << fmt("%.4f", ll_mean) << "\n";

  if (!opts.summary.empty()) {
    auto f = open_out(opts.summary);
    f << "generated=" << generated.size() << "\n"
      << "references=" << refs.sentences.size() << "\n"
      << "bleu_nobp=" << fmt("%.9g", bleu_nobp) << "\n"
      << "bleu_bp=" << fmt("%.9g", bleu_bp) << "\n"
      << "valid_ratio=" << fmt("%.9g", ratio) << "\n"
      << "loglik_per_word_mean=" << fmt("%.9g", ll_mean) << "\n";
    if (trace_ratio) {
      f << "sample_valid_ratio=" << fmt("%.9g", *trace_ratio) << "\n"
        << "samples=" << trace.size() << "\n";
    }
  }
  if (!opts.curve.empty()) {
    auto f = open_out(opts.curve);
    std::vector<Snapshot> gibbs;
    for (const auto& s : trace) {
      if (s.turn > 0) gibbs.push_back(s);
    }
    if (!gibbs.empty()) {
      for (const auto& [turn, r] : valid_ratio_curve(gibbs, opts.threshold)) {
        f << turn << '\t' << fmt("%.6f", r) << '\n';
      }
    }
  }
  if (!opts.loglik.empty()) {
    auto f = open_out(opts.loglik);
    for (std::size_t i = 0; i < ll.size(); ++i) f << i << '\t' << fmt("%.6f", ll[i]) << '\n';
  }
  return 0;
}

}  // namespace gibbsgen::tools
