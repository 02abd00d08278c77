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

// Subcommands of the gibbsgen tool, kept apart from argument parsing so the
// tests can drive them directly.

#ifndef GIBBSGEN_TOOLS_COMMANDS_H_
#define GIBBSGEN_TOOLS_COMMANDS_H_

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>

namespace gibbsgen::tools {

struct TrainOptions {
  std::string schema;
  std::string corpus;
  std::string out_dir;
  int order = 3;
  int min_count = 1;
  double alpha = 1.0;
  double heldout = 0.1;  // fraction of sentences kept out of training
  std::uint64_t seed = 1;
};

struct GenerateOptions {
  std::string model_dir;
  std::string method = "gibbs";  // gibbs | beam | reject
  std::string labels;            // empty: cycle through every combination
  int count = 1;
  int turns = 100;
  int burn_in = 10;
  int length = 8;
  double threshold = 0.6;
  int candidates = 5;
  int beam_size = 300;
  int rs_samples = 800;
  int top_w = 10;
  int max_len = 20;
  std::uint64_t seed = 1;
  bool random_scan = false;
  std::string out;    // generated sentences; empty for stdout
  std::string trace;  // optional per-snapshot / per-sample dump
};

// Reads key=value lines into `opts`. Keys are the long flag names or the
// long hyper-parameter names ("Turns in Gibbs Sampling",
// "Beam size", ...), matched case-insensitively. Keys listed in `skip`
// were given on the command line and keep their flag value.
void apply_config(const std::string& path, GenerateOptions& opts,
                  const std::set<std::string>& skip);

// Canonical key for a config or flag name, or "" when unknown.
std::string canonical_key(const std::string& name);

struct EvalOptions {
  std::string model_dir;
  std::string generated;
  std::string references;  // labeled corpus; default: <model_dir>/train.tsv
  std::string trace;       // optional trace from `generate --trace`
  double threshold = 0.6;
  std::string summary;     // key=value file
  std::string curve;       // turn, valid ratio
  std::string loglik;      // index, log-likelihood per word
};

int cmd_train(const TrainOptions& opts, std::ostream& out);
int cmd_generate(const GenerateOptions& opts, std::ostream& out, std::ostream& log);
int cmd_eval(const EvalOptions& opts, std::ostream& out);

}  // namespace gibbsgen::tools

#endif  // GIBBSGEN_TOOLS_COMMANDS_H_
