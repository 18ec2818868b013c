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

#ifndef NGRAMLOG_EVAL_H_
#define NGRAMLOG_EVAL_H_

#include <algorithm>
#include <chrono>
#include <concepts>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "ngramlog/event.h"
#include "ngramlog/ngram_model.h"
#include "ngramlog/seqfile.h"

namespace ngramlog {

template <typename P>
concept NextEventPredictor = requires(const P& p, Context context) {
  { p.window() } -> std::convertible_to<WindowSize>;
  { p.PredictNext(context) } -> std::convertible_to<EventId>;
};

// Always predicts the same event.
class ConstantPredictor {
 public:
  explicit ConstantPredictor(EventId event) : event_(event) {}
  WindowSize window() const { return WindowSize(2); }
  EventId PredictNext(Context) const { return event_; }
  EventId event() const { return event_; }

 private:
  EventId event_;
};

// Most frequent event over all padded training positions, EoS included.
// Ties go to the smallest id. Throws UntrainedModelError on empty input.
EventId MostFrequentEvent(std::span<const EventSequence> train);

struct SequenceAccuracy {
  std::string session_id;
  std::uint64_t correct = 0;
  std::uint64_t total = 0;

  double accuracy() const {
    return total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
  }
  friend bool operator==(const SequenceAccuracy&, const SequenceAccuracy&) = default;
};

// Exact comparison of correct/total fractions.
int CompareAccuracy(const SequenceAccuracy& a, const SequenceAccuracy& b);

struct EvalReport {
  std::string dataset_id;
  std::string model_name;
  std::optional<WindowSize> n;  // unset for window-free baselines
  double accuracy = 0.0;
  std::uint64_t correct = 0;
  std::uint64_t total = 0;
  std::uint64_t unique_ngrams = 0;
  double train_seconds = 0.0;
  double infer_seconds = 0.0;
  std::vector<SequenceAccuracy> per_sequence;
};

struct EvalOptions {
  std::string dataset_id;
  std::string model_name = "ngram";
  unsigned threads = 1;
};

enum class Outcome { kWinA, kWinB, kTie };

struct ComparisonRow {
  std::string session_id;
  SequenceAccuracy a;
  SequenceAccuracy b;
  Outcome outcome = Outcome::kTie;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  std::size_t wins_a = 0;
  std::size_t wins_b = 0;
  std::size_t ties = 0;
};

// Wall-clock seconds spent in `fn`, on the monotonic clock.
template <typename F>
double TimeIt(F&& fn) {
  const auto start = std::chrono::steady_clock::now();
  std::forward<F>(fn)();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(stop - start).count();
}

namespace internal {

// Runs `fn(i)` for i in [0, count) on up to `threads` threads, contiguous
// blocks per thread.
template <typename F>
void ParallelFor(std::size_t count, unsigned threads, F&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(
                                                         count / 64 + 1)));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> workers;
  const std::size_t per = (count + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin = std::min(count, t * per);
    const std::size_t end = std::min(count, begin + per);
    workers.emplace_back([&fn, begin, end] {
      for (std::size_t i = begin; i < end; ++i) fn(i);
    });
  }
}

template <NextEventPredictor P>
SequenceAccuracy ScoreOne(const P& predictor, const EventSequence& seq) {
  const WindowSize n = predictor.window();
  const auto padded = Pad(seq.events, n);
  const std::size_t ctx = n.context_length();
  SequenceAccuracy acc{seq.session_id, 0, 0};
  for (std::size_t i = 0; i + ctx < padded.size(); ++i) {
    const EventId predicted = predictor.PredictNext(Context(padded.data() + i, ctx));
    acc.correct += predicted == padded[i + ctx] ? 1 : 0;
    ++acc.total;
  }
  return acc;
}

}  // namespace internal

// Next-event accuracy over every real event and the EoS of every test
// sequence. Throws std::invalid_argument("no predictions") on an empty set.
template <NextEventPredictor P>
EvalReport Accuracy(const P& predictor, std::span<const EventSequence> test,
                    const EvalOptions& options = {}) {
  if (test.empty()) throw std::invalid_argument("no predictions");
  EvalReport report;
  report.dataset_id = options.dataset_id;
  report.model_name = options.model_name;
  report.n = predictor.window();
  report.per_sequence.resize(test.size());
  report.infer_seconds = TimeIt([&] {
    internal::ParallelFor(test.size(), options.threads, [&](std::size_t i) {
      report.per_sequence[i] = internal::ScoreOne(predictor, test[i]);
    });
  });
  for (const auto& s : report.per_sequence) {
    report.correct += s.correct;
    report.total += s.total;
  }
  report.accuracy =
      static_cast<double>(report.correct) / static_cast<double>(report.total);
  if constexpr (std::same_as<P, NGramModel>) {
    report.unique_ngrams = predictor.unique_ngrams();
  }
  return report;
}

// Accuracy of the constant most-frequent-event predictor fitted on `train`.
EvalReport DummyAccuracy(std::span<const EventSequence> train,
                         std::span<const EventSequence> test,
                         const EvalOptions& options = {});

template <NextEventPredictor P>
std::vector<PredictionRow> CollectPredictions(const P& predictor,
                                              std::span<const EventSequence> test) {
  std::vector<PredictionRow> rows;
  const WindowSize n = predictor.window();
  const std::size_t ctx = n.context_length();
  for (const auto& seq : test) {
    const auto padded = Pad(seq.events, n);
    for (std::size_t i = 0; i + ctx < padded.size(); ++i) {
      rows.push_back(PredictionRow{
          seq.session_id, i + 1, padded[i + ctx],
          predictor.PredictNext(Context(padded.data() + i, ctx))});
    }
  }
  return rows;
}

// Per-session accuracy from a prediction file, in first-appearance order.
std::vector<SequenceAccuracy> PerSequenceFromPredictions(
    const std::vector<PredictionRow>& rows);

// Pairs sessions by id. Throws std::invalid_argument if the two sides do not
// cover the same sessions with the same number of predictions.
ComparisonReport Compare(const std::vector<SequenceAccuracy>& a,
                         const std::vector<SequenceAccuracy>& b);

template <NextEventPredictor A, NextEventPredictor B>
ComparisonReport Compare(const A& a, const B& b, std::span<const EventSequence> test,
                         unsigned threads = 1) {
  EvalOptions options;
  options.threads = threads;
  return Compare(Accuracy(a, test, options).per_sequence,
                 Accuracy(b, test, options).per_sequence);
}

// Trains and evaluates one n-gram model per n in [n_min, n_max]. Training
// and inference are timed separately; corpus I/O is not part of either.
std::vector<EvalReport> Sweep(std::span<const EventSequence> train,
                              std::span<const EventSequence> test, int n_min,
                              int n_max, const EvalOptions& options = {});

struct SweepWins {
  std::vector<std::size_t> wins;  // parallel to the sweep reports
  std::size_t ties = 0;
};

// A test sequence is a win for the single report with the strictly highest
// accuracy on it, otherwise a tie.
SweepWins CountSweepWins(const std::vector<EvalReport>& reports);

// `dataset,model,n,accuracy,correct,total,unique_ngrams,train_s,infer_s`
void WriteEvalCsv(std::ostream& out, const std::vector<EvalReport>& reports);
// `session_id,acc_a,acc_b,outcome`
void WriteComparisonCsv(std::ostream& out, const ComparisonReport& report);
// Transposed, one column per n, rows as in the published result tables.
std::string FormatSweepTable(const std::vector<EvalReport>& reports,
                             const SweepWins& wins);

}  // namespace ngramlog

#endif  // NGRAMLOG_EVAL_H_
