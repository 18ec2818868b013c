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

#ifndef NGRAMLOG_REPORT_H_
#define NGRAMLOG_REPORT_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "ngramlog/event.h"
#include "ngramlog/ngram_model.h"

namespace ngramlog {

// Trailing mean: out[i] = mean(values[max(0, i - window + 1) .. i]).
// Throws std::invalid_argument if window < 1.
std::vector<double> MovingAverage(std::span<const double> values,
                                  std::size_t window);

// log10(count + 1), so zero counts stay plottable at 0.
double LogScaledOccurrence(std::uint64_t count);

struct ScoreRecord {
  std::size_t position = 0;
  EventId event_id;
  std::uint64_t occurrence = 0;
  double probability = 0.0;
  std::optional<double> ma_occ_100;
  std::optional<double> ma_occ_1000;
  std::optional<double> ma_prob_100;
  std::optional<double> ma_prob_1000;
};

// Score records with trailing 100/1000-event moving averages of the raw
// occurrence count and of the probability.
std::vector<ScoreRecord> BuildScoreRecords(std::span<const ScoredEvent> scored);

// `position,event_id,occurrence,probability,ma_occ_100,ma_occ_1000,
//  ma_prob_100,ma_prob_1000`; reals with 6 decimals, absent values empty,
// EoS written as "EoS".
void WriteScoreFile(std::ostream& out, std::span<const ScoreRecord> records);
void WriteScoreFile(const std::filesystem::path& path,
                    std::span<const ScoreRecord> records);
std::vector<ScoreRecord> ReadScoreFile(std::istream& in);
std::vector<ScoreRecord> ReadScoreFile(const std::filesystem::path& path);

enum class PlotMetric { kOccurrenceLog, kProbability };

struct PlotSpec {
  PlotMetric metric = PlotMetric::kOccurrenceLog;
  bool raw = true;
  bool ma100 = true;
  bool ma1000 = true;
  std::filesystem::path output;
};

// Standalone SVG: one dot per event plus moving-average polylines.
void EmitPlot(std::span<const ScoreRecord> records, const PlotSpec& spec);
void EmitPlot(std::ostream& out, std::span<const ScoreRecord> records,
              const PlotSpec& spec);

}  // namespace ngramlog

#endif  // NGRAMLOG_REPORT_H_
