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

#include "ngramlog/report.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include "ngramlog/errors.h"
#include "ngramlog/seqfile.h"

namespace ngramlog {
namespace {

constexpr std::string_view kScoreHeader =
    "position,event_id,occurrence,probability,ma_occ_100,ma_occ_1000,"
    "ma_prob_100,ma_prob_1000";

void PutFixed(std::ostream& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  out << buf;
}

void PutOptional(std::ostream& out, const std::optional<double>& v) {
  out << ',';
  if (v) PutFixed(out, *v);
}

}  // namespace

std::vector<double> MovingAverage(std::span<const double> values,
                                  std::size_t window) {
  if (window < 1) throw std::invalid_argument("moving average window must be >= 1");
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::size_t begin = i + 1 >= window ? i + 1 - window : 0;
    double sum = 0.0;
    for (std::size_t k = begin; k <= i; ++k) sum += values[k];
    out[i] = sum / static_cast<double>(i + 1 - begin);
  }
  return out;
}

double LogScaledOccurrence(std::uint64_t count) {
  return std::log10(static_cast<double>(count) + 1.0);
}

std::vector<ScoreRecord> BuildScoreRecords(std::span<const ScoredEvent> scored) {
  std::vector<double> occ(scored.size()), prob(scored.size());
  for (std::size_t i = 0; i < scored.size(); ++i) {
    occ[i] = static_cast<double>(scored[i].score.occurrence);
    prob[i] = scored[i].score.probability;
  }
  const auto occ100 = MovingAverage(occ, 100);
  const auto occ1000 = MovingAverage(occ, 1000);
  const auto prob100 = MovingAverage(prob, 100);
  const auto prob1000 = MovingAverage(prob, 1000);

  std::vector<ScoreRecord> records(scored.size());
  for (std::size_t i = 0; i < scored.size(); ++i) {
    records[i] = ScoreRecord{scored[i].position, scored[i].event,
                             scored[i].score.occurrence, scored[i].score.probability,
                             occ100[i], occ1000[i], prob100[i], prob1000[i]};
  }
  return records;
}

void WriteScoreFile(std::ostream& out, std::span<const ScoreRecord> records) {
  out << kScoreHeader << '\n';
  for (const auto& r : records) {
    out << r.position << ',' << ToString(r.event_id) << ',' << r.occurrence << ',';
    PutFixed(out, r.probability);
    PutOptional(out, r.ma_occ_100);
    PutOptional(out, r.ma_occ_1000);
    PutOptional(out, r.ma_prob_100);
    PutOptional(out, r.ma_prob_1000);
    out << '\n';
  }
  if (!out) throw IoError("score file write failed");
}

void WriteScoreFile(const std::filesystem::path& path,
                    std::span<const ScoreRecord> records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  WriteScoreFile(out, records);
}

namespace {

template <typename T>
T ParseField(std::string_view text, std::size_t line_no) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw FormatError("score file line " + std::to_string(line_no) + ": bad field '" +
                      std::string(text) + "'");
  }
  return value;
}

std::optional<double> ParseOptional(std::string_view text, std::size_t line_no) {
  if (text.empty()) return std::nullopt;
  return ParseField<double>(text, line_no);
}

}  // namespace

std::vector<ScoreRecord> ReadScoreFile(std::istream& in) {
  std::string raw;
  if (!std::getline(in, raw) || raw != kScoreHeader) {
    throw FormatError("score file: bad header");
  }
  std::vector<ScoreRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, raw)) {
    ++line_no;
    if (raw.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view line = raw;
    for (std::size_t start = 0;;) {
      const auto comma = line.find(',', start);
      f.push_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (f.size() != 8) {
      throw FormatError("score file line " + std::to_string(line_no) +
                        ": expected 8 fields");
    }
    ScoreRecord r;
    r.position = ParseField<std::size_t>(f[0], line_no);
    r.event_id = ParseEventId(f[1]);
    r.occurrence = ParseField<std::uint64_t>(f[2], line_no);
    r.probability = ParseField<double>(f[3], line_no);
    r.ma_occ_100 = ParseOptional(f[4], line_no);
    r.ma_occ_1000 = ParseOptional(f[5], line_no);
    r.ma_prob_100 = ParseOptional(f[6], line_no);
    r.ma_prob_1000 = ParseOptional(f[7], line_no);
    records.push_back(r);
  }
  return records;
}

std::vector<ScoreRecord> ReadScoreFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return ReadScoreFile(in);
}

}  // namespace ngramlog
