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

#include "ngramlog/seqfile.h"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "ngramlog/errors.h"

namespace ngramlog {
namespace {

constexpr std::string_view kSeqHeader = "#seqfile v1 vocab=";
constexpr std::string_view kPredictionHeader = "session_id,position,actual,predicted";

template <typename T>
bool ParseUnsigned(std::string_view text, T& value) {
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc() && ptr == text.data() + text.size();
}

[[noreturn]] void Fail(std::size_t line_no, const std::string& what) {
  throw FormatError("line " + std::to_string(line_no) + ": " + what);
}

std::string_view StripCr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

}  // namespace

EventId ParseEventId(std::string_view text) {
  if (text == "EoS") return EventId::Eos();
  if (text == "SoS") return EventId::Sos();
  EventId::Rep value = 0;
  if (!ParseUnsigned(text, value) || value >= EventId::kFirstReserved) {
    throw FormatError("bad event id '" + std::string(text) + "'");
  }
  return EventId(value);
}

void WriteSequenceFile(std::ostream& out, const SequenceFile& file) {
  out << kSeqHeader << file.vocab << '\n';
  for (const auto& seq : file.sequences) {
    if (seq.session_id.find_first_of("\t\n\r") != std::string::npos) {
      throw FormatError("session id contains a tab or newline: " + seq.session_id);
    }
    out << seq.session_id << '\t' << ToString(seq.label) << '\t';
    for (std::size_t i = 0; i < seq.events.size(); ++i) {
      const EventId e = seq.events[i];
      if (!e.is_template() || e.value() >= file.vocab) {
        throw FormatError("sequence " + seq.session_id + " holds id " +
                          ToString(e) + " outside the vocabulary");
      }
      if (i) out << ' ';
      out << e.value();
    }
    out << '\n';
  }
  if (!out) throw IoError("sequence file write failed");
}

void WriteSequenceFile(const std::filesystem::path& path, const SequenceFile& file) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  WriteSequenceFile(out, file);
}

SequenceFile ReadSequenceFile(std::istream& in) {
  SequenceFile file;
  std::string raw;
  if (!std::getline(in, raw)) throw FormatError("sequence file: empty");
  std::string_view header = StripCr(raw);
  if (header.substr(0, kSeqHeader.size()) != kSeqHeader ||
      !ParseUnsigned(header.substr(kSeqHeader.size()), file.vocab)) {
    throw FormatError("sequence file: bad header '" + std::string(header) + "'");
  }

  std::unordered_set<std::string> seen;
  std::size_t line_no = 1;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = StripCr(raw);
    if (line.empty()) continue;
    const auto tab1 = line.find('\t');
    const auto tab2 = tab1 == std::string_view::npos ? tab1 : line.find('\t', tab1 + 1);
    if (tab2 == std::string_view::npos) Fail(line_no, "expected 3 tab-separated fields");

    EventSequence seq;
    seq.session_id = std::string(line.substr(0, tab1));
    if (seq.session_id.empty()) Fail(line_no, "empty session id");
    if (!seen.insert(seq.session_id).second) {
      Fail(line_no, "duplicate session id " + seq.session_id);
    }
    const auto label = ParseLabel(line.substr(tab1 + 1, tab2 - tab1 - 1));
    if (!label) Fail(line_no, "unknown label");
    seq.label = *label;

    std::string_view ids = line.substr(tab2 + 1);
    while (!ids.empty()) {
      const auto space = ids.find(' ');
      const auto token = ids.substr(0, space);
      EventId::Rep value = 0;
      if (!ParseUnsigned(token, value)) Fail(line_no, "bad event id '" + std::string(token) + "'");
      if (value >= file.vocab) Fail(line_no, "event id " + std::to_string(value) + " >= vocab");
      seq.events.emplace_back(value);
      if (space == std::string_view::npos) break;
      ids.remove_prefix(space + 1);
    }
    file.sequences.push_back(std::move(seq));
  }
  return file;
}

SequenceFile ReadSequenceFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return ReadSequenceFile(in);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void WritePredictionFile(std::ostream& out, const std::vector<PredictionRow>& rows) {
  out << kPredictionHeader << '\n';
  for (const auto& r : rows) {
    if (r.session_id.find_first_of(",\n\r") != std::string::npos) {
      throw FormatError("session id not representable in CSV: " + r.session_id);
    }
    out << r.session_id << ',' << r.position << ',' << ToString(r.actual) << ','
        << ToString(r.predicted) << '\n';
  }
  if (!out) throw IoError("prediction file write failed");
}

void WritePredictionFile(const std::filesystem::path& path,
                         const std::vector<PredictionRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  WritePredictionFile(out, rows);
}

std::vector<PredictionRow> ReadPredictionFile(std::istream& in) {
  std::string raw;
  if (!std::getline(in, raw) || StripCr(raw) != kPredictionHeader) {
    throw FormatError("prediction file: bad header");
  }
  std::vector<PredictionRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = StripCr(raw);
    if (line.empty()) continue;
    std::string_view fields[4];
    std::size_t start = 0;
    for (int f = 0; f < 4; ++f) {
      const auto comma = line.find(',', start);
      if ((f < 3) == (comma == std::string_view::npos)) Fail(line_no, "expected 4 fields");
      fields[f] = line.substr(start, comma - start);
      start = comma + 1;
    }
    PredictionRow row;
    row.session_id = std::string(fields[0]);
    if (!ParseUnsigned(fields[1], row.position) || row.position == 0) {
      Fail(line_no, "bad position");
    }
    try {
      row.actual = ParseEventId(fields[2]);
      row.predicted = ParseEventId(fields[3]);
    } catch (const FormatError& e) {
      Fail(line_no, e.what());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<PredictionRow> ReadPredictionFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return ReadPredictionFile(in);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace ngramlog
