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

#ifndef NGRAMLOG_SEQFILE_H_
#define NGRAMLOG_SEQFILE_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ngramlog/event.h"

namespace ngramlog {

// Line-oriented sequence file:
//
//   #seqfile v1 vocab=<k>
//   <session_id>\t<label>\t<id> <id> ...
//
// Ids are template ids in [0, k); sentinels never appear.
struct SequenceFile {
  std::size_t vocab = 0;
  std::vector<EventSequence> sequences;
};

void WriteSequenceFile(std::ostream& out, const SequenceFile& file);
void WriteSequenceFile(const std::filesystem::path& path, const SequenceFile& file);
// Throws FormatError on a malformed header/row, an id >= vocab or a
// duplicate session id.
SequenceFile ReadSequenceFile(std::istream& in);
SequenceFile ReadSequenceFile(const std::filesystem::path& path);

// One next-event prediction. Positions are 1-based over the unpadded
// sequence, EoS sits at length + 1 and is written as the literal "EoS".
struct PredictionRow {
  std::string session_id;
  std::size_t position = 0;
  EventId actual;
  EventId predicted;

  friend bool operator==(const PredictionRow&, const PredictionRow&) = default;
};

// `session_id,position,actual,predicted` with a header row.
void WritePredictionFile(std::ostream& out, const std::vector<PredictionRow>& rows);
void WritePredictionFile(const std::filesystem::path& path,
                         const std::vector<PredictionRow>& rows);
std::vector<PredictionRow> ReadPredictionFile(std::istream& in);
std::vector<PredictionRow> ReadPredictionFile(const std::filesystem::path& path);

// Parses a decimal id or "SoS"/"EoS"; throws FormatError otherwise.
EventId ParseEventId(std::string_view text);

}  // namespace ngramlog

#endif  // NGRAMLOG_SEQFILE_H_
