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


#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <benchmark/benchmark.h>

#include "ngramlog/eval.h"
#include "ngramlog/ngram_model.h"
#include "ngramlog/synthetic.h"
#include "ngramlog/template_miner.h"

namespace ngramlog {
namespace {

const std::vector<EventSequence>& Corpus() {
  static const auto corpus = [] {
    SyntheticCorpusConfig config;
    config.sequences = 20;
    return GenerateCorpus(config);
  }();
  return corpus;
}

std::int64_t EventCount(const std::vector<EventSequence>& corpus) {
  std::int64_t total = 0;
  for (const auto& s : corpus) total += static_cast<std::int64_t>(s.events.size()) + 1;
  return total;
}

void BM_Train(benchmark::State& state) {
  const auto& corpus = Corpus();
  const WindowSize n(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto model = NGramModel::Train(corpus, n);
    benchmark::DoNotOptimize(model);
  }
  state.SetItemsProcessed(state.iterations() * EventCount(corpus));
}
BENCHMARK(BM_Train)->DenseRange(2, 10, 2)->Unit(benchmark::kMillisecond);

void BM_Infer(benchmark::State& state) {
  const auto& corpus = Corpus();
  const WindowSize n(static_cast<int>(state.range(0)));
  const auto model = NGramModel::Train(corpus, n);
  for (auto _ : state) {
    auto report = Accuracy(model, corpus);
    benchmark::DoNotOptimize(report);
  }
  state.SetItemsProcessed(state.iterations() * EventCount(corpus));
}
BENCHMARK(BM_Infer)->DenseRange(2, 10, 2)->Unit(benchmark::kMillisecond);

void BM_ScoreSequence(benchmark::State& state) {
  const auto& corpus = Corpus();
  const auto model = NGramModel::Train(corpus, WindowSize(5));
  const auto& events = corpus.front().events;
  for (auto _ : state) {
    auto scored = model.ScoreSequence(events);
    benchmark::DoNotOptimize(scored);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(events.size()));
}
BENCHMARK(BM_ScoreSequence)->Unit(benchmark::kMillisecond);

std::vector<std::string> HdfsLikeLines(std::size_t count) {
  static const char* shapes[] = {
      "081109 203615 148 INFO dfs.DataNode$PacketResponder: PacketResponder 1 for block "
      "blk_%lld terminating",
      "081109 203518 143 INFO dfs.DataNode$DataXceiver: Receiving block blk_%lld src: "
      "/10.250.19.102:54106 dest: /10.250.19.102:50010",
      "081109 203519 145 INFO dfs.FSNamesystem: BLOCK* NameSystem.addStoredBlock: "
      "blockMap updated: 10.250.10.6:50010 is added to blk_%lld size 67108864",
      "081109 203520 147 INFO dfs.DataNode$PacketResponder: Received block blk_%lld of "
      "size 67108864 from /10.251.42.84",
  };
  std::mt19937_64 rng(5);
  std::vector<std::string> out;
  char buf[256];
  for (std::size_t i = 0; i < count; ++i) {
    std::snprintf(buf, sizeof(buf), shapes[rng() % std::size(shapes)],
                  static_cast<long long>(rng() % 1000000000));
    out.emplace_back(buf);
  }
  return out;
}

void BM_MinerParseBatch(benchmark::State& state) {
  const auto lines = HdfsLikeLines(20000);
  const std::vector<std::string_view> views(lines.begin(), lines.end());
  const auto threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    TemplateMiner miner(MinerConfig::HdfsDefaults());
    auto ids = miner.ParseBatch(views, threads);
    benchmark::DoNotOptimize(ids);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(lines.size()));
}
BENCHMARK(BM_MinerParseBatch)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace ngramlog

BENCHMARK_MAIN();
