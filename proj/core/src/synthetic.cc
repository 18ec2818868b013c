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

#include "ngramlog/synthetic.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

namespace ngramlog {
namespace {

// mt19937_64 output is fixed by the standard; these helpers keep the rest of
// the sampling platform-independent too.
double Unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t Below(std::mt19937_64& rng, std::size_t bound) {
  const std::uint64_t b = bound;
  const std::uint64_t threshold = (0 - b) % b;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return static_cast<std::size_t>(r % b);
  }
}

}  // namespace

MarkovChain::MarkovChain(const MarkovChainConfig& config) : config_(config) {
  if (config.states == 0 || config.vocab == 0 || config.min_successors == 0 ||
      config.min_successors > config.max_successors) {
    throw std::invalid_argument("invalid Markov chain configuration");
  }
  std::mt19937_64 rng(config.seed);
  edges_.resize(config.states);
  for (std::size_t s = 0; s < config.states; ++s) {
    const std::size_t fanout =
        config.min_successors +
        Below(rng, config.max_successors - config.min_successors + 1);
    std::vector<double> weights(fanout);
    double total = 0.0;
    for (auto& w : weights) {
      // Skewed weights: one dominant successor is typical of real logs.
      w = std::pow(Unit(rng), 3.0) + 1e-3;
      total += w;
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < fanout; ++k) {
      acc += weights[k] / total;
      // Mostly local moves keep the chain connected and cyclic.
      const std::size_t to = Unit(rng) < 0.8 ? (s + 1 + Below(rng, 5)) % config.states
                                             : Below(rng, config.states);
      edges_[s].push_back(Edge{to, k + 1 == fanout ? 1.0 : acc});
    }
  }
}

std::vector<EventId> MarkovChain::Generate(std::size_t length,
                                           std::uint64_t seed) const {
  return GenerateWithAnomaly(length, 0, 0, seed);
}

std::vector<EventId> MarkovChain::GenerateWithAnomaly(std::size_t length,
                                                      std::size_t anomaly_begin,
                                                      std::size_t anomaly_end,
                                                      std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::vector<EventId> out;
  out.reserve(length);
  std::size_t state = 0;
  for (std::size_t i = 0; i < length; ++i) {
    const bool anomalous = i >= anomaly_begin && i < anomaly_end;
    if (anomalous && Unit(rng) < 0.2) {
      out.emplace_back(static_cast<EventId::Rep>(config_.vocab + Below(rng, kForeignIds)));
    } else {
      out.emplace_back(static_cast<EventId::Rep>(state % config_.vocab));
    }
    if (anomalous) {
      state = Below(rng, config_.states);
    } else {
      const double u = Unit(rng);
      const auto& edges = edges_[state];
      const auto it = std::find_if(edges.begin(), edges.end(),
                                   [u](const Edge& e) { return u < e.cumulative; });
      state = (it == edges.end() ? edges.back() : *it).to;
    }
  }
  return out;
}

std::vector<EventSequence> GenerateCorpus(const SyntheticCorpusConfig& config) {
  if (config.min_length > config.max_length) {
    throw std::invalid_argument("min_length exceeds max_length");
  }
  const MarkovChain chain(config.chain);
  std::mt19937_64 rng(config.seed);
  std::vector<EventSequence> out;
  out.reserve(config.sequences);
  for (std::size_t i = 0; i < config.sequences; ++i) {
    const std::size_t length =
        config.min_length + Below(rng, config.max_length - config.min_length + 1);
    char name[32];
    std::snprintf(name, sizeof(name), "run-%03zu", i);
    out.push_back(EventSequence{name, Label::kNormal, chain.Generate(length, rng())});
  }
  return out;
}

}  // namespace ngramlog
