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

#ifndef NGRAMLOG_NGRAM_MODEL_H_
#define NGRAMLOG_NGRAM_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ngramlog/event.h"

namespace ngramlog {

// Sliding-window size n: n - 1 context events predict the n-th.
class WindowSize {
 public:
  // Throws std::invalid_argument if n < 2.
  explicit WindowSize(int n);

  int value() const { return n_; }
  std::size_t context_length() const { return static_cast<std::size_t>(n_ - 1); }

  friend bool operator==(WindowSize, WindowSize) = default;

 private:
  int n_;
};

using Context = std::span<const EventId>;

struct AnomalyScore {
  std::uint64_t occurrence = 0;
  double probability = 0.0;  // occurrence / context total; 0 if unseen

  friend bool operator==(const AnomalyScore&, const AnomalyScore&) = default;
};

struct SuccessorCount {
  EventId event;
  std::uint64_t count = 0;

  friend bool operator==(const SuccessorCount&, const SuccessorCount&) = default;
};

// Successor counts of one context, kept sorted by event id.
struct ContextStats {
  std::uint64_t total = 0;
  std::vector<SuccessorCount> successors;

  std::uint64_t CountOf(EventId event) const;
  // Returns true if `event` is a new successor.
  bool Add(EventId event, std::uint64_t count);
  // Highest count; ties go to the smallest id.
  EventId Argmax() const;
  // 1-based rank under (count desc, id asc); nullopt if never observed.
  std::optional<std::size_t> RankOf(EventId event) const;

  friend bool operator==(const ContextStats&, const ContextStats&) = default;
};

class Prediction {
 public:
  Prediction(EventId predicted, const ContextStats* stats)
      : predicted_(predicted), stats_(stats) {}

  EventId predicted() const { return predicted_; }
  // Set when the context was never seen in training and the prediction is
  // the globally most frequent event.
  bool is_fallback() const { return stats_ == nullptr; }
  // Rank of `event` among the context's successors; nullopt for an unseen
  // context or an event never observed after it.
  std::optional<std::size_t> rank_of(EventId event) const {
    return stats_ ? stats_->RankOf(event) : std::nullopt;
  }

 private:
  EventId predicted_;
  const ContextStats* stats_;  // borrowed from the model
};

struct ScoredEvent {
  std::size_t position = 0;  // 1-based; EoS is at length + 1
  EventId event;
  AnomalyScore score;
  Prediction prediction;
};

// (n - 1) x SoS, the events, one EoS.
std::vector<EventId> Pad(std::span<const EventId> events, WindowSize n);

// Counting next-event model over padded sequences.
//
// For every window of n events in a padded training sequence the first
// n - 1 form the context and the last is counted as its successor. There is
// no smoothing: unseen contexts score 0 and predict the globally most
// frequent event. A trained model is never mutated by the const API and may
// be shared across threads.
class NGramModel {
 public:
  explicit NGramModel(WindowSize n);

  static NGramModel Train(std::span<const EventSequence> sequences, WindowSize n);
  static NGramModel Train(std::span<const std::vector<EventId>> sequences,
                          WindowSize n);

  // Shards the input over `threads` workers and merges the partial models.
  static NGramModel TrainParallel(std::span<const EventSequence> sequences,
                                  WindowSize n, unsigned threads);

  // Adds one unpadded, sentinel-free sequence. Throws std::invalid_argument
  // on a sentinel.
  void AddSequence(std::span<const EventId> events);

  // Pointwise sum. Throws std::invalid_argument on mismatched n.
  void MergeFrom(const NGramModel& other);

  // Throws UntrainedModelError if the model has no data.
  Prediction Predict(Context context) const;
  EventId PredictNext(Context context) const { return Predict(context).predicted(); }

  AnomalyScore Score(Context context, EventId event) const;

  // One record per event plus one for EoS.
  std::vector<ScoredEvent> ScoreSequence(std::span<const EventId> events) const;

  // True iff `event` ranks within the top `k` successors of a seen context.
  bool IsNormalTopK(Context context, EventId event, std::size_t k = 8) const;

  const ContextStats* Find(Context context) const;

  // Globally most frequent training event (ties: smallest id). Throws
  // UntrainedModelError if the model is empty.
  EventId MostFrequent() const;

  WindowSize window() const { return n_; }
  bool empty() const { return trained_events_ == 0; }
  std::uint64_t trained_events() const { return trained_events_; }
  std::size_t context_count() const { return table_.size(); }
  // Distinct (context, next) pairs.
  std::uint64_t unique_ngrams() const { return unique_ngrams_; }
  const std::unordered_map<EventId, std::uint64_t>& global_counts() const {
    return global_counts_;
  }
  // Every event observed as a successor (all real events and EoS), sorted.
  std::vector<EventId> vocab() const;

  // Visits contexts in lexicographic order.
  void ForEachContext(
      const std::function<void(Context, const ContextStats&)>& fn) const;

  // Binary, little-endian; see README. Throws IoError / FormatError.
  void Save(std::ostream& out) const;
  void Save(const std::filesystem::path& path) const;
  static NGramModel Load(std::istream& in);
  static NGramModel Load(const std::filesystem::path& path);

  friend bool operator==(const NGramModel& a, const NGramModel& b);

 private:
  struct KeyHash {
    using is_transparent = void;
    std::size_t operator()(std::u32string_view key) const noexcept {
      return std::hash<std::u32string_view>{}(key);
    }
  };
  using Table =
      std::unordered_map<std::u32string, ContextStats, KeyHash, std::equal_to<>>;

  void Count(std::u32string_view key, EventId next, std::uint64_t count);
  const ContextStats* FindKey(std::u32string_view key) const;
  std::vector<const Table::value_type*> SortedContexts() const;

  WindowSize n_;
  Table table_;
  std::unordered_map<EventId, std::uint64_t> global_counts_;
  std::uint64_t trained_events_ = 0;
  std::uint64_t unique_ngrams_ = 0;
  std::optional<EventId> most_frequent_;
};

NGramModel Merge(const NGramModel& a, const NGramModel& b);

}  // namespace ngramlog

#endif  // NGRAMLOG_NGRAM_MODEL_H_
