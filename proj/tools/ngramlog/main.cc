// Copyright 2026 The ngramlog Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "commands.h"
#include "ngramlog/errors.h"

namespace {

using namespace ngramlog::cli;

unsigned DefaultThreads() { return std::max(1u, std::thread::hardware_concurrency()); }

void AddSplitFlags(CLI::App* cmd, SplitFlags& f) {
  cmd->add_option("--split", f.split, "Share of Normal sequences used for training")
      ->capture_default_str();
  cmd->add_option("--seed", f.seed, "Seed of the train/test shuffle")->capture_default_str();
  cmd->add_flag("--no-split", f.no_split, "Train and test on all Normal sequences");
  cmd->add_option("--min-len", f.min_len, "Drop sequences with fewer events")
      ->capture_default_str();
}

void AddMinerFlags(CLI::App* cmd, MinerFlags& f) {
  cmd->add_option("--masks", f.masks,
                  "Masking rules: auto (hdfs for --format hdfs, generic otherwise), "
                  "hdfs, generic, none")
      ->capture_default_str();
  cmd->add_option("--depth", f.tree_depth, "Parse tree depth")->capture_default_str();
  cmd->add_option("--st", f.similarity, "Similarity threshold")->capture_default_str();
  cmd->add_option("--max-children", f.max_children, "Children per tree node")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ngramlog: n-gram next-event models for log anomaly detection"};
  app.name("ngramlog");
  app.require_subcommand(0, 1);
  app.set_version_flag("--version", "ngramlog 0.3.0");

  ParseFlags parse;
  parse.threads = DefaultThreads();
  auto* parse_cmd = app.add_subcommand("parse", "Raw logs to a sequence file and template catalog");
  parse_cmd->add_option("--format", parse.format, "hdfs (one log, block ids) or dir (one file per sequence)")
      ->capture_default_str();
  parse_cmd->add_option("--log", parse.log, "HDFS log file");
  parse_cmd->add_option("--labels", parse.labels, "HDFS BlockId,Label table");
  parse_cmd->add_option("--dir", parse.dir, "Directory of per-run log files");
  parse_cmd->add_option("--anomaly-pattern", parse.anomaly_pattern,
                        "File names containing this are Anomaly (dir format)")
      ->capture_default_str();
  parse_cmd->add_option("--label", parse.label, "Sequences to write: all, normal, anomaly")
      ->capture_default_str();
  parse_cmd->add_option("--min-len", parse.min_len, "Drop sequences with fewer events")
      ->capture_default_str();
  parse_cmd->add_option("--out", parse.out, "Sequence file to write")->required();
  parse_cmd->add_option("--catalog", parse.catalog, "Template catalog to write")->required();
  parse_cmd->add_option("--threads", parse.threads, "Masking threads (default: all cores)");
  AddMinerFlags(parse_cmd, parse.miner);

  TrainFlags train;
  train.threads = DefaultThreads();
  auto* train_cmd = app.add_subcommand("train", "Sequence file to model file");
  train_cmd->add_option("--seqs", train.seqs, "Sequence file")->required();
  train_cmd->add_option("--out", train.out, "Model file to write")->required();
  train_cmd->add_option("--n", train.n, "Window size n (context n-1)")->capture_default_str();
  train_cmd->add_option("--threads", train.threads, "Counting threads (default: all cores)");
  AddSplitFlags(train_cmd, train.split);

  EvalFlags eval;
  eval.threads = DefaultThreads();
  auto* eval_cmd = app.add_subcommand("eval", "Accuracy of a model and the dummy baseline on the test side");
  eval_cmd->add_option("--model", eval.model, "Model file")->required();
  eval_cmd->add_option("--seqs", eval.seqs, "Sequence file (split as for train)")->required();
  eval_cmd->add_option("--out", eval.out, "Report CSV, - for stdout")->capture_default_str();
  eval_cmd->add_option("--predictions", eval.predictions, "Also write per-event predictions");
  eval_cmd->add_option("--dataset", eval.dataset, "Dataset column (default: file stem)");
  eval_cmd->add_option("--threads", eval.threads, "Scoring threads (default: all cores)");
  AddSplitFlags(eval_cmd, eval.split);

  SweepFlags sweep;
  sweep.threads = DefaultThreads();
  auto* sweep_cmd = app.add_subcommand("sweep", "Train and evaluate a range of n");
  sweep_cmd->add_option("--seqs", sweep.seqs, "Sequence file")->required();
  sweep_cmd->add_option("--n", sweep.n, "Window sizes, from..to")->capture_default_str();
  sweep_cmd->add_option("--out", sweep.out, "Also write the report CSV (- for stdout)");
  sweep_cmd->add_option("--dataset", sweep.dataset, "Dataset column (default: file stem)");
  sweep_cmd->add_option("--threads", sweep.threads, "Worker threads (default: all cores)");
  AddSplitFlags(sweep_cmd, sweep.split);

  ScoreFlags score;
  auto* score_cmd = app.add_subcommand("score", "Per-event anomaly scores of one sequence");
  score_cmd->add_option("--model", score.model, "Model file")->required();
  score_cmd->add_option("--seqs", score.seqs, "Sequence file")->required();
  score_cmd->add_option("--session", score.session, "Session to score (default: first)");
  score_cmd->add_option("--out", score.out, "Score CSV, - for stdout")->capture_default_str();
  score_cmd->add_option("--plot-occ", score.plot_occ, "SVG of log-scaled occurrence scores");
  score_cmd->add_option("--plot-prob", score.plot_prob, "SVG of probability scores");

  CompareFlags compare;
  auto* compare_cmd = app.add_subcommand("compare", "Per-sequence wins between two prediction files");
  compare_cmd->add_option("a", compare.a, "Prediction file A")->required();
  compare_cmd->add_option("b", compare.b, "Prediction file B")->required();
  compare_cmd->add_option("--out", compare.out, "Comparison CSV, - for stdout")
      ->capture_default_str();

  BenchFlags bench;
  bench.threads = DefaultThreads();
  auto* bench_cmd = app.add_subcommand("bench-hdfs", "End-to-end HDFS run: ingest, parse, sweep");
  bench_cmd->add_option("--log", bench.log, "HDFS log file")->required();
  bench_cmd->add_option("--labels", bench.labels, "HDFS BlockId,Label table")->required();
  bench_cmd->add_option("--n", bench.n, "Window sizes, from..to")->capture_default_str();
  bench_cmd->add_option("--out-dir", bench.out_dir, "Write sweep.csv and catalog.tsv here");
  bench_cmd->add_option("--threads", bench.threads, "Worker threads (default: all cores)");
  AddSplitFlags(bench_cmd, bench.split);
  AddMinerFlags(bench_cmd, bench.miner);

  SynthFlags synth;
  auto* synth_cmd = app.add_subcommand("synth", "Synthetic device-test corpus from a Markov chain");
  synth_cmd->add_option("--out", synth.out, "Sequence file to write")->required();
  synth_cmd->add_option("--sequences", synth.sequences, "Number of runs")->capture_default_str();
  synth_cmd->add_option("--min-length", synth.min_length, "Shortest run")->capture_default_str();
  synth_cmd->add_option("--max-length", synth.max_length, "Longest run")->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "Generator seed")->capture_default_str();
  synth_cmd->add_option("--anomaly-out", synth.anomaly_out, "Also write one corrupted run");
  synth_cmd->add_option("--anomaly-length", synth.anomaly_length, "Length of the corrupted run")
      ->capture_default_str();
  synth_cmd->add_option("--anomaly-begin", synth.anomaly_begin, "First corrupted position")
      ->capture_default_str();
  synth_cmd->add_option("--anomaly-end", synth.anomaly_end, "End of the corrupted region")
      ->capture_default_str();

  if (argc < 2) {
    std::cout << app.help();
    return 1;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*parse_cmd) return RunParse(parse);
    if (*train_cmd) return RunTrain(train);
    if (*eval_cmd) return RunEval(eval);
    if (*sweep_cmd) return RunSweep(sweep);
    if (*score_cmd) return RunScore(score);
    if (*compare_cmd) return RunCompare(compare);
    if (*bench_cmd) return RunBenchHdfs(bench);
    if (*synth_cmd) return RunSynth(synth);
    std::cout << app.help();
    return 1;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\nRun with --help for usage.\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
