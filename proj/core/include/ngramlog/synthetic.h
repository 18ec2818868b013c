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

#ifndef NGRAMLOG_SYNTHETIC_H_
#define NGRAMLOG_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ngramlog/event.h"

namespace ngramlog {

// Hidden-state Markov chain emitting template ids. Several hidden states
// share an emitted id, so longer contexts disambiguate the state and the
// chain behaves like a long, repetitive device test log.
struct MarkovChainConfig {
  std::size_t states = 600;
  std::size_t vocab = 200;         // emitted ids are in [0, vocab)
  std::size_t min_successors = 1;
  std::size_t max_successors = 4;
  std::uint64_t seed = 7;
};

class MarkovChain {
 public:
  // Corrupted regions draw foreign ids from [vocab, vocab + kForeignIds).
  static constexpr std::size_t kForeignIds = 8;

  explicit MarkovChain(const MarkovChainConfig& config);

  const MarkovChainConfig& config() const { return config_; }

  // One Normal sequence of exactly `length` events.
  std::vector<EventId> Generate(std::size_t length, std::uint64_t seed) const;

  // A sequence with a corrupted region [anomaly_begin, anomaly_end): inside
  // it transitions are uniform over all states and a share of the events
  // are ids the chain never emits (>= vocab).
  std::vector<EventId> GenerateWithAnomaly(std::size_t length,
                                           std::size_t anomaly_begin,
                                           std::size_t anomaly_end,
                                           std::uint64_t seed) const;

 private:
  struct Edge {
    std::size_t to;
    double cumulative;
  };

  MarkovChainConfig config_;
  std::vector<std::vector<Edge>> edges_;
};

struct SyntheticCorpusConfig {
  MarkovChainConfig chain;
  std::size_t sequences = 100;
  std::size_t min_length = 10000;
  std::size_t max_length = 12000;
  std::uint64_t seed = 2021;
};

// Normal sequences named run-000, run-001, ...
std::vector<EventSequence> GenerateCorpus(const SyntheticCorpusConfig& config);

}  // namespace ngramlog

#endif  // NGRAMLOG_SYNTHETIC_H_
