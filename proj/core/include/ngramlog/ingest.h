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

#ifndef NGRAMLOG_INGEST_H_
#define NGRAMLOG_INGEST_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ngramlog/event.h"

namespace ngramlog {

struct RawLogRecord {
  std::uint64_t line_no = 0;  // 1-based within the source file
  std::string text;           // valid UTF-8, no line terminator
  std::optional<std::string> session_hint;

  friend bool operator==(const RawLogRecord&, const RawLogRecord&) = default;
};

struct LogSequence {
  std::string session_id;
  std::vector<RawLogRecord> records;
  Label label = Label::kUnlabeled;

  friend bool operator==(const LogSequence&, const LogSequence&) = default;
};

struct IngestStats {
  std::uint64_t lines_read = 0;
  // Lines that carried no session key and were discarded.
  std::uint64_t lines_without_session = 0;
  // Sessions found in the logs but missing from the label table.
  std::uint64_t unlabeled_sequences = 0;
  // Sequences removed by FilterMinLength.
  std::uint64_t filtered_sequences = 0;
  // One entry per file that could not be read ("path: reason").
  std::vector<std::string> file_errors;
};

// A corpus of raw log sequences. Immutable once built; every operation
// below returns a new corpus.
struct LabeledCorpus {
  std::string dataset;
  std::vector<std::string> source_files;
  std::vector<LogSequence> sequences;
  IngestStats stats;

  std::size_t normal_count() const;
  std::size_t anomaly_count() const;
  std::size_t unlabeled_count() const;
  std::uint64_t record_count() const;
};

// Returns the first `blk_<digits>` / `blk_-<digits>` token in `line`.
std::optional<std::string_view> FindBlockId(std::string_view line);

// Streams `path` line by line. Line numbers are 1-based, the text has any
// trailing '\r' removed and is not UTF-8 sanitized. Throws IoError.
void ForEachLine(const std::filesystem::path& path,
                 const std::function<void(std::uint64_t line_no,
                                          std::string_view text)>& fn);

// Reads a `BlockId,Label` table (header row required). Throws IoError on a
// missing file and FormatError on malformed rows or unknown labels.
std::unordered_map<std::string, Label> ReadHdfsLabels(
    const std::filesystem::path& label_path);

// Groups an HDFS log by block id. Sequences are ordered by first appearance.
LabeledCorpus LoadHdfs(const std::filesystem::path& log_path,
                       const std::filesystem::path& label_path);

using LabelRule = std::function<Label(std::string_view file_name)>;

// `match` when the file name contains `needle`, otherwise `otherwise`.
LabelRule NameContainsRule(std::string needle, Label match = Label::kAnomaly,
                           Label otherwise = Label::kNormal);

// One sequence per regular file in `dir`, ordered by file name. Unreadable
// files are recorded in stats.file_errors and skipped.
LabeledCorpus LoadPerFile(const std::filesystem::path& dir,
                          const LabelRule& label_rule);

LabeledCorpus FilterMinLength(const LabeledCorpus& corpus,
                              std::size_t min_events);
std::vector<EventSequence> FilterMinLength(
    const std::vector<EventSequence>& sequences, std::size_t min_events);

// Only sequences carrying `label`.
LabeledCorpus FilterLabel(const LabeledCorpus& corpus, Label label);
std::vector<EventSequence> FilterLabel(
    const std::vector<EventSequence>& sequences, Label label);

struct SplitSpec {
  double ratio = 0.5;  // share assigned to training, in (0, 1)
  std::uint64_t seed = 42;
};

// Index partition of [0, count): seeded Fisher-Yates shuffle, then the
// first round(ratio * count) indices go to training. Both sides are
// returned in ascending order. Throws std::invalid_argument on a bad ratio.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> SplitIndices(
    std::size_t count, const SplitSpec& spec);

// Sequence-level split of Normal-only data. Throws std::invalid_argument if
// the ratio is outside (0, 1) or a non-Normal sequence is present.
std::pair<LabeledCorpus, LabeledCorpus> Split(const LabeledCorpus& corpus,
                                              const SplitSpec& spec);
std::pair<std::vector<EventSequence>, std::vector<EventSequence>> Split(
    const std::vector<EventSequence>& sequences, const SplitSpec& spec);

}  // namespace ngramlog

#endif  // NGRAMLOG_INGEST_H_
