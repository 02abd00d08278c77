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

#include <CLI11.hpp>

#include <iostream>

#include "commands.h"
#include "gibbsgen/corpus.h"

using namespace gibbsgen::tools;

int main(int argc, char** argv) {
  CLI::App app{"Constrained sentence generation with Gibbs sampling"};
  app.require_subcommand(1);

  TrainOptions train;
  auto* t = app.add_subcommand("train", "Train the language models and discriminators");
  t->add_option("--schema", train.schema, "Constraint schema file")->required();
  t->add_option("--corpus", train.corpus, "Labeled corpus (labels and sentence, TAB-separated)")
      ->required();
  t->add_option("--out", train.out_dir, "Model directory")->required();
  t->add_option("--order", train.order, "n-gram order")->capture_default_str();
  t->add_option("--min-count", train.min_count, "Vocabulary frequency cut-off")
      ->capture_default_str();
  t->add_option("--alpha", train.alpha, "Naive Bayes smoothing")->capture_default_str();
  t->add_option("--heldout", train.heldout, "Fraction held out for the report")
      ->capture_default_str();
  t->add_option("--seed", train.seed, "Seed for the held-out split")->capture_default_str();

  GenerateOptions gen;
  std::string config_path;
  auto* g = app.add_subcommand("generate", "Generate constrained sentences");
  g->add_option("--model-dir", gen.model_dir, "Directory written by train")->required();
  g->add_option("--config", config_path, "key=value file; flags take precedence");
  g->add_option("--method", gen.method, "gibbs, beam or reject")->capture_default_str();
  g->add_option("--labels", gen.labels,
                "dim=class[,dim=class]; default cycles through every combination");
  g->add_option("--count", gen.count, "Sentences to generate")->capture_default_str();
  g->add_option("--turns", gen.turns, "Gibbs turns")->capture_default_str();
  g->add_option("--burn-in", gen.burn_in, "Turns discarded before snapshots")
      ->capture_default_str();
  g->add_option("--length", gen.length, "Fixed sentence length for Gibbs")
      ->capture_default_str();
  g->add_option("--threshold", gen.threshold, "Posterior threshold for a valid sentence")
      ->capture_default_str();
  g->add_option("--candidates", gen.candidates, "Candidate words per position")
      ->capture_default_str();
  g->add_option("--beam-size", gen.beam_size, "Beam width")->capture_default_str();
  g->add_option("--rs-samples", gen.rs_samples, "Sentences drawn per reject-sampling output")
      ->capture_default_str();
  g->add_option("--top-w", gen.top_w, "Truncation for reject sampling")->capture_default_str();
  g->add_option("--max-len", gen.max_len, "Length cap for beam search and reject sampling")
      ->capture_default_str();
  g->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  g->add_flag("--random-scan", gen.random_scan, "Visit Gibbs positions in random order");
  g->add_option("--out", gen.out, "Output file (default: stdout)");
  g->add_option("--trace", gen.trace, "Write every snapshot or sample to this file");

  EvalOptions ev;
  auto* e = app.add_subcommand("eval", "Score a generated file");
  e->add_option("--model-dir", ev.model_dir, "Directory written by train")->required();
  e->add_option("--generated", ev.generated, "Output of generate")->required();
  e->add_option("--references", ev.references, "Labeled reference corpus (default: train.tsv)");
  e->add_option("--trace", ev.trace, "Trace written by generate --trace");
  e->add_option("--threshold", ev.threshold, "Posterior threshold")->capture_default_str();
  e->add_option("--summary", ev.summary, "Write key=value summary here");
  e->add_option("--curve", ev.curve, "Write per-turn valid ratio here");
  e->add_option("--loglik", ev.loglik, "Write per-sentence log-likelihood per word here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (t->parsed()) return cmd_train(train, std::cout);
    if (g->parsed()) {
      if (!config_path.empty()) {
        std::set<std::string> given;
        for (const auto* opt : g->get_options()) {
          if (opt->count() > 0) given.insert(canonical_key(opt->get_name()));
        }
        apply_config(config_path, gen, given);
      }
      return cmd_generate(gen, std::cout, std::cerr);
    }
    return cmd_eval(ev, std::cout);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
}
