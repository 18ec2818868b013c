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


#ifndef NGRAMLOG_TOOLS_COMMANDS_H_
#define NGRAMLOG_TOOLS_COMMANDS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>

namespace ngramlog::cli {

// Bad flag values or combinations. Maps to exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Path = std::filesystem::path;

// "a..b" or a single "a".
std::pair<int, int> ParseRange(const std::string& text);

struct MinerFlags {
  std::string masks = "auto";  // auto, hdfs, generic, none
  int tree_depth = 4;
  double similarity = 0.4;
  int max_children = 100;
};

struct SplitFlags {
  double split = 0.5;
  std::uint64_t seed = 42;
  bool no_split = false;
  std::size_t min_len = 0;
};

struct ParseFlags {
  std::string format = "hdfs";
  Path log;
  Path labels;
  Path dir;
  std::string anomaly_pattern = "FAIL";
  Path out;
  Path catalog;
  std::string label = "all";
  std::size_t min_len = 0;
  MinerFlags miner;
  unsigned threads = 1;
};

struct TrainFlags {
  Path seqs;
  Path out;
  int n = 5;
  SplitFlags split;
  unsigned threads = 1;
};

struct EvalFlags {
  Path model;
  Path seqs;
  std::string out = "-";
  Path predictions;
  std::string dataset;
  SplitFlags split;
  unsigned threads = 1;
};

struct SweepFlags {
  Path seqs;
  std::string n = "2..10";
  std::string out;
  std::string dataset;
  SplitFlags split;
  unsigned threads = 1;
};

struct ScoreFlags {
  Path model;
  Path seqs;
  std::string session;
  std::string out = "-";
  Path plot_occ;
  Path plot_prob;
};

struct CompareFlags {
  Path a;
  Path b;
  std::string out = "-";
};

struct BenchFlags {
  Path log;
  Path labels;
  std::string n = "2..10";
  SplitFlags split;
  MinerFlags miner;
  Path out_dir;
  unsigned threads = 1;
};

struct SynthFlags {
  Path out;
  std::size_t sequences = 100;
  std::size_t min_length = 10000;
  std::size_t max_length = 12000;
  std::uint64_t seed = 2021;
  Path anomaly_out;
  std::size_t anomaly_length = 65000;
  std::size_t anomaly_begin = 40000;
  std::size_t anomaly_end = 45000;
};

int RunParse(const ParseFlags& flags);
int RunTrain(const TrainFlags& flags);
int RunEval(const EvalFlags& flags);
int RunSweep(const SweepFlags& flags);
int RunScore(const ScoreFlags& flags);
int RunCompare(const CompareFlags& flags);
int RunBenchHdfs(const BenchFlags& flags);
int RunSynth(const SynthFlags& flags);

}  // namespace ngramlog::cli

#endif  // NGRAMLOG_TOOLS_COMMANDS_H_
