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


#include "commands.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "ngramlog/errors.h"
#include "ngramlog/eval.h"
#include "ngramlog/ingest.h"
#include "ngramlog/ngram_model.h"
#include "ngramlog/report.h"
#include "ngramlog/seqfile.h"
#include "ngramlog/synthetic.h"
#include "ngramlog/template_miner.h"

namespace ngramlog::cli {
namespace {

template <typename F>
void WithOutput(const std::string& target, F&& fn) {
  if (target.empty() || target == "-") {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(target, std::ios::binary);
  if (!out) throw IoError("cannot write " + target);
  fn(out);
  if (!out) throw IoError("write failed: " + target);
}

MinerConfig BuildMinerConfig(const MinerFlags& flags, const std::string& format) {
  std::string masks = flags.masks;
  if (masks == "auto") masks = format == "hdfs" ? "hdfs" : "generic";
  MinerConfig config;
  if (masks == "hdfs") {
    config = MinerConfig::HdfsDefaults();
  } else if (masks == "generic") {
    config.masks = {
        {R"((\d+\.){3}\d+(:\d+)?)", std::string(kWildcard)},
        {R"(0x[0-9A-Fa-f]+)", std::string(kWildcard)},
        {R"((?<![A-Za-z0-9])\d+(?![A-Za-z0-9]))", std::string(kWildcard)},
    };
  } else if (masks != "none") {
    throw UsageError("--masks must be auto, hdfs, generic or none");
  }
  config.tree_depth = flags.tree_depth;
  config.similarity_threshold = flags.similarity;
  config.max_children = flags.max_children;
  try {
    config.Validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return config;
}

WindowSize CheckedWindow(int n) {
  if (n < 2) throw UsageError("--n must be >= 2");
  return WindowSize(n);
}

void CheckSplit(const SplitFlags& flags) {
  if (!flags.no_split && !(flags.split > 0.0 && flags.split < 1.0)) {
    throw UsageError("--split must lie strictly between 0 and 1");
  }
}

struct Partition {
  std::vector<EventSequence> train;
  std::vector<EventSequence> test;
};

// Normal sequences of at least --min-len events, split by --split/--seed.
// With --no-split both sides hold everything.
Partition LoadPartition(const Path& seqs, const SplitFlags& flags) {
  CheckSplit(flags);
  const auto file = ReadSequenceFile(seqs);
  auto normal = FilterMinLength(FilterLabel(file.sequences, Label::kNormal), flags.min_len);
  if (normal.empty()) {
    throw FormatError(seqs.string() + ": no Normal sequences of length >= " +
                      std::to_string(flags.min_len));
  }
  if (flags.no_split) return {normal, normal};
  auto [train, test] = Split(normal, SplitSpec{flags.split, flags.seed});
  if (train.empty() || test.empty()) {
    throw FormatError(seqs.string() + ": too few sequences to split");
  }
  return {std::move(train), std::move(test)};
}

std::string DatasetName(const std::string& given, const Path& seqs) {
  return given.empty() ? seqs.stem().string() : given;
}

EvalReport DummyReport(const NGramModel& model, std::span<const EventSequence> test,
                       const EvalOptions& options) {
  EvalOptions dummy = options;
  dummy.model_name = "dummy";
  EvalReport report = Accuracy(ConstantPredictor(model.MostFrequent()), test, dummy);
  report.n.reset();
  return report;
}

}  // namespace

std::pair<int, int> ParseRange(const std::string& text) {
  const auto parse = [&](std::string_view part) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (part.empty() || ec != std::errc() || ptr != part.data() + part.size()) {
      throw UsageError("bad n range '" + text + "', expected e.g. 2..10");
    }
    return value;
  };
  const std::string_view view = text;
  const auto dots = view.find("..");
  const int lo = parse(view.substr(0, dots));
  const int hi = dots == std::string_view::npos ? lo : parse(view.substr(dots + 2));
  if (lo < 2 || hi < lo) throw UsageError("n range must satisfy 2 <= from <= to");
  return {lo, hi};
}

int RunParse(const ParseFlags& flags) {
  const MinerConfig config = BuildMinerConfig(flags.miner, flags.format);
  std::optional<Label> keep;
  if (flags.label == "normal") keep = Label::kNormal;
  else if (flags.label == "anomaly") keep = Label::kAnomaly;
  else if (flags.label != "all") throw UsageError("--label must be all, normal or anomaly");

  TemplateMiner miner(config);
  ParsedCorpus parsed;
  IngestStats stats;
  if (flags.format == "hdfs") {
    if (flags.log.empty() || flags.labels.empty()) {
      throw UsageError("--format hdfs needs --log and --labels");
    }
    parsed = ParseHdfsLog(flags.log, flags.labels, miner, flags.threads, &stats);
  } else if (flags.format == "dir") {
    if (flags.dir.empty()) throw UsageError("--format dir needs --dir");
    const auto corpus = LoadPerFile(flags.dir, NameContainsRule(flags.anomaly_pattern));
    stats = corpus.stats;
    for (const auto& e : stats.file_errors) std::cerr << "warning: " << e << '\n';
    parsed = ParseCorpus(corpus, miner, flags.threads);
  } else {
    throw UsageError("--format must be hdfs or dir");
  }

  SequenceFile file;
  file.vocab = miner.size();
  file.sequences = FilterMinLength(parsed.sequences, flags.min_len);
  if (keep) file.sequences = FilterLabel(file.sequences, *keep);
  WriteSequenceFile(flags.out, file);
  miner.Save(flags.catalog);

  std::size_t normal = 0, anomaly = 0, events = 0;
  for (const auto& s : file.sequences) {
    normal += s.label == Label::kNormal;
    anomaly += s.label == Label::kAnomaly;
    events += s.events.size();
  }
  std::cerr << "lines " << stats.lines_read << ", without session "
            << stats.lines_without_session << ", unlabeled sessions "
            << stats.unlabeled_sequences << "\n"
            << "sequences " << file.sequences.size() << " (normal " << normal
            << ", anomaly " << anomaly << "), events " << events << ", templates "
            << miner.size() << '\n';
  return 0;
}

int RunTrain(const TrainFlags& flags) {
  const WindowSize n = CheckedWindow(flags.n);
  const auto part = LoadPartition(flags.seqs, flags.split);
  NGramModel model(n);
  const double seconds =
      TimeIt([&] { model = NGramModel::TrainParallel(part.train, n, flags.threads); });
  model.Save(flags.out);
  std::fprintf(stderr, "trained n=%d on %zu sequences, %llu events, %llu unique n-grams, %.3f s\n",
               n.value(), part.train.size(),
               static_cast<unsigned long long>(model.trained_events()),
               static_cast<unsigned long long>(model.unique_ngrams()), seconds);
  return 0;
}

int RunEval(const EvalFlags& flags) {
  const auto model = NGramModel::Load(flags.model);
  const auto part = LoadPartition(flags.seqs, flags.split);
  EvalOptions options;
  options.dataset_id = DatasetName(flags.dataset, flags.seqs);
  options.threads = flags.threads;
  std::vector<EvalReport> reports;
  reports.push_back(Accuracy(model, part.test, options));
  reports.push_back(DummyReport(model, part.test, options));
  WithOutput(flags.out, [&](std::ostream& out) { WriteEvalCsv(out, reports); });
  if (!flags.predictions.empty()) {
    WritePredictionFile(flags.predictions, CollectPredictions(model, part.test));
  }
  return 0;
}

int RunSweep(const SweepFlags& flags) {
  const auto [lo, hi] = ParseRange(flags.n);
  const auto part = LoadPartition(flags.seqs, flags.split);
  EvalOptions options;
  options.dataset_id = DatasetName(flags.dataset, flags.seqs);
  options.threads = flags.threads;
  auto reports = Sweep(part.train, part.test, lo, hi, options);
  const auto wins = CountSweepWins(reports);
  std::cout << FormatSweepTable(reports, wins);
  const auto dummy = DummyAccuracy(part.train, part.test, options);
  std::printf("dummy accuracy in test: %.3f\n", dummy.accuracy);
  if (!flags.out.empty()) {
    reports.push_back(dummy);
    WithOutput(flags.out, [&](std::ostream& out) { WriteEvalCsv(out, reports); });
  }
  return 0;
}

int RunScore(const ScoreFlags& flags) {
  const auto model = NGramModel::Load(flags.model);
  const auto file = ReadSequenceFile(flags.seqs);
  if (file.sequences.empty()) throw FormatError(flags.seqs.string() + ": no sequences");
  const EventSequence* target = &file.sequences.front();
  if (!flags.session.empty()) {
    const auto it = std::find_if(file.sequences.begin(), file.sequences.end(),
                                 [&](const auto& s) { return s.session_id == flags.session; });
    if (it == file.sequences.end()) {
      throw FormatError(flags.seqs.string() + ": no session " + flags.session);
    }
    target = &*it;
  }
  const auto records = BuildScoreRecords(model.ScoreSequence(target->events));
  WithOutput(flags.out, [&](std::ostream& out) { WriteScoreFile(out, records); });
  if (!flags.plot_occ.empty()) {
    EmitPlot(records, PlotSpec{PlotMetric::kOccurrenceLog, true, true, true, flags.plot_occ});
  }
  if (!flags.plot_prob.empty()) {
    EmitPlot(records, PlotSpec{PlotMetric::kProbability, true, true, true, flags.plot_prob});
  }
  return 0;
}

int RunCompare(const CompareFlags& flags) {
  const auto a = PerSequenceFromPredictions(ReadPredictionFile(flags.a));
  const auto b = PerSequenceFromPredictions(ReadPredictionFile(flags.b));
  ComparisonReport report;
  try {
    report = Compare(a, b);
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  WithOutput(flags.out, [&](std::ostream& out) { WriteComparisonCsv(out, report); });
  std::cerr << "wins A " << report.wins_a << ", wins B " << report.wins_b << ", ties "
            << report.ties << '\n';
  return 0;
}

int RunBenchHdfs(const BenchFlags& flags) {
  const auto [lo, hi] = ParseRange(flags.n);
  CheckSplit(flags.split);
  TemplateMiner miner(BuildMinerConfig(flags.miner, "hdfs"));
  ParsedCorpus parsed;
  IngestStats stats;
  const double parse_seconds = TimeIt([&] {
    parsed = ParseHdfsLog(flags.log, flags.labels, miner, flags.threads, &stats);
  });
  auto normal = FilterMinLength(FilterLabel(parsed.sequences, Label::kNormal),
                                flags.split.min_len);
  std::uint64_t normal_events = 0;
  for (const auto& s : normal) normal_events += s.events.size();
  std::printf("lines read              %llu\n"
              "normal sequences        %zu\n"
              "events in normal        %llu\n"
              "anomalous sequences     %zu\n"
              "templates               %zu\n"
              "ingest + parse (s)      %.1f\n\n",
              static_cast<unsigned long long>(stats.lines_read), normal.size(),
              static_cast<unsigned long long>(normal_events),
              FilterLabel(parsed.sequences, Label::kAnomaly).size(), miner.size(),
              parse_seconds);
  std::fflush(stdout);
  parsed.sequences.clear();
  parsed.sequences.shrink_to_fit();
  if (normal.size() < 2) throw FormatError("HDFS log holds fewer than two Normal sequences");

  auto [train, test] = flags.split.no_split
                           ? std::pair{normal, normal}
                           : Split(normal, SplitSpec{flags.split.split, flags.split.seed});
  normal.clear();
  normal.shrink_to_fit();
  EvalOptions options;
  options.dataset_id = "hdfs";
  options.threads = flags.threads;
  auto reports = Sweep(train, test, lo, hi, options);
  const auto wins = CountSweepWins(reports);
  std::cout << FormatSweepTable(reports, wins);
  const auto dummy = DummyAccuracy(train, test, options);
  std::printf("dummy accuracy in test: %.3f\n", dummy.accuracy);

  if (!flags.out_dir.empty()) {
    std::filesystem::create_directories(flags.out_dir);
    reports.push_back(dummy);
    WithOutput((flags.out_dir / "sweep.csv").string(),
               [&](std::ostream& out) { WriteEvalCsv(out, reports); });
    miner.Save(flags.out_dir / "catalog.tsv");
  }
  return 0;
}

int RunSynth(const SynthFlags& flags) {
  if (flags.min_length > flags.max_length) {
    throw UsageError("--min-length exceeds --max-length");
  }
  if (flags.anomaly_begin > flags.anomaly_end || flags.anomaly_end > flags.anomaly_length) {
    throw UsageError("anomaly region must satisfy begin <= end <= length");
  }
  SyntheticCorpusConfig config;
  config.sequences = flags.sequences;
  config.min_length = flags.min_length;
  config.max_length = flags.max_length;
  config.seed = flags.seed;
  SequenceFile file{config.chain.vocab, GenerateCorpus(config)};
  WriteSequenceFile(flags.out, file);
  if (!flags.anomaly_out.empty()) {
    const MarkovChain chain(config.chain);
    SequenceFile anomaly;
    anomaly.sequences.push_back(EventSequence{
        "anomaly-000", Label::kAnomaly,
        chain.GenerateWithAnomaly(flags.anomaly_length, flags.anomaly_begin,
                                  flags.anomaly_end, flags.seed + 1)});
    anomaly.vocab = config.chain.vocab + MarkovChain::kForeignIds;
    WriteSequenceFile(flags.anomaly_out, anomaly);
  }
  return 0;
}

}  // namespace ngramlog::cli
