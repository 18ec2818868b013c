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

#include "ngramlog/ingest.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include "ngramlog/errors.h"
#include "ngramlog/utf8.h"

namespace ngramlog {

namespace fs = std::filesystem;

std::size_t LabeledCorpus::normal_count() const {
  return static_cast<std::size_t>(
      std::count_if(sequences.begin(), sequences.end(), [](const auto& s) {
        return s.label == Label::kNormal;
      }));
}

std::size_t LabeledCorpus::anomaly_count() const {
  return static_cast<std::size_t>(
      std::count_if(sequences.begin(), sequences.end(), [](const auto& s) {
        return s.label == Label::kAnomaly;
      }));
}

std::size_t LabeledCorpus::unlabeled_count() const {
  return sequences.size() - normal_count() - anomaly_count();
}

std::uint64_t LabeledCorpus::record_count() const {
  std::uint64_t total = 0;
  for (const auto& s : sequences) total += s.records.size();
  return total;
}

std::optional<std::string_view> FindBlockId(std::string_view line) {
  constexpr std::string_view kPrefix = "blk_";
  std::size_t pos = 0;
  while ((pos = line.find(kPrefix, pos)) != std::string_view::npos) {
    std::size_t end = pos + kPrefix.size();
    if (end < line.size() && line[end] == '-') ++end;
    const std::size_t digits_begin = end;
    while (end < line.size() &&
           std::isdigit(static_cast<unsigned char>(line[end]))) {
      ++end;
    }
    if (end > digits_begin) return line.substr(pos, end - pos);
    pos += kPrefix.size();
  }
  return std::nullopt;
}

void ForEachLine(const fs::path& path,
                 const std::function<void(std::uint64_t, std::string_view)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());

  constexpr std::size_t kChunk = 1 << 20;
  std::vector<char> buffer(kChunk);
  std::string carry;
  std::uint64_t line_no = 0;

  const auto emit = [&](std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(++line_no, line);
  };

  while (in) {
    in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    const auto got = static_cast<std::size_t>(in.gcount());
    if (got == 0) break;
    std::string_view chunk(buffer.data(), got);
    std::size_t start = 0;
    for (std::size_t nl; (nl = chunk.find('\n', start)) != std::string_view::npos;
         start = nl + 1) {
      if (!carry.empty()) {
        carry.append(chunk.substr(start, nl - start));
        emit(carry);
        carry.clear();
      } else {
        emit(chunk.substr(start, nl - start));
      }
    }
    carry.append(chunk.substr(start));
  }
  if (in.bad()) throw IoError("read failed: " + path.string());
  if (!carry.empty()) emit(carry);
}

namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

std::unordered_map<std::string, Label> ReadHdfsLabels(const fs::path& label_path) {
  std::unordered_map<std::string, Label> labels;
  bool header = true;
  ForEachLine(label_path, [&](std::uint64_t line_no, std::string_view line) {
    if (header) {
      header = false;
      return;
    }
    line = Trim(line);
    if (line.empty()) return;
    const auto comma = line.find(',');
    if (comma == std::string_view::npos) {
      throw FormatError(label_path.string() + ":" + std::to_string(line_no) +
                        ": expected BlockId,Label");
    }
    const auto label = ParseLabel(Trim(line.substr(comma + 1)));
    if (!label || *label == Label::kUnlabeled) {
      throw FormatError(label_path.string() + ":" + std::to_string(line_no) +
                        ": unknown label");
    }
    labels.insert_or_assign(std::string(Trim(line.substr(0, comma))), *label);
  });
  if (header) throw FormatError(label_path.string() + ": missing header row");
  return labels;
}

LabeledCorpus LoadHdfs(const fs::path& log_path, const fs::path& label_path) {
  if (!fs::exists(log_path)) throw IoError("cannot open " + log_path.string());
  const auto labels = ReadHdfsLabels(label_path);

  LabeledCorpus corpus;
  corpus.dataset = "hdfs";
  corpus.source_files = {log_path.string(), label_path.string()};

  std::unordered_map<std::string, std::size_t> index;
  ForEachLine(log_path, [&](std::uint64_t line_no, std::string_view line) {
    ++corpus.stats.lines_read;
    const auto block = FindBlockId(line);
    if (!block) {
      ++corpus.stats.lines_without_session;
      return;
    }
    auto [it, inserted] =
        index.try_emplace(std::string(*block), corpus.sequences.size());
    if (inserted) {
      LogSequence seq;
      seq.session_id = it->first;
      corpus.sequences.push_back(std::move(seq));
    }
    corpus.sequences[it->second].records.push_back(
        RawLogRecord{line_no, SanitizeUtf8(line), it->first});
  });

  for (auto& seq : corpus.sequences) {
    const auto found = labels.find(seq.session_id);
    if (found == labels.end()) {
      seq.label = Label::kUnlabeled;
      ++corpus.stats.unlabeled_sequences;
    } else {
      seq.label = found->second;
    }
  }
  return corpus;
}

LabelRule NameContainsRule(std::string needle, Label match, Label otherwise) {
  return [needle = std::move(needle), match, otherwise](std::string_view name) {
    return name.find(needle) != std::string_view::npos ? match : otherwise;
  };
}

LabeledCorpus LoadPerFile(const fs::path& dir, const LabelRule& label_rule) {
  LabeledCorpus corpus;
  corpus.dataset = dir.filename().string();

  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw IoError("not a directory: " + dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  for (const auto& file : files) {
    LogSequence seq;
    seq.session_id = file.filename().string();
    seq.label = label_rule(seq.session_id);
    try {
      ForEachLine(file, [&](std::uint64_t line_no, std::string_view line) {
        ++corpus.stats.lines_read;
        seq.records.push_back(RawLogRecord{line_no, SanitizeUtf8(line), {}});
      });
    } catch (const IoError& e) {
      corpus.stats.file_errors.push_back(file.string() + ": " + e.what());
      continue;
    }
    corpus.source_files.push_back(file.string());
    corpus.sequences.push_back(std::move(seq));
  }
  return corpus;
}

LabeledCorpus FilterMinLength(const LabeledCorpus& corpus,
                              std::size_t min_events) {
  LabeledCorpus out;
  out.dataset = corpus.dataset;
  out.source_files = corpus.source_files;
  out.stats = corpus.stats;
  for (const auto& seq : corpus.sequences) {
    if (seq.records.size() >= min_events) {
      out.sequences.push_back(seq);
    } else {
      ++out.stats.filtered_sequences;
    }
  }
  return out;
}

std::vector<EventSequence> FilterMinLength(
    const std::vector<EventSequence>& sequences, std::size_t min_events) {
  std::vector<EventSequence> out;
  std::copy_if(sequences.begin(), sequences.end(), std::back_inserter(out),
               [&](const auto& s) { return s.events.size() >= min_events; });
  return out;
}

LabeledCorpus FilterLabel(const LabeledCorpus& corpus, Label label) {
  LabeledCorpus out;
  out.dataset = corpus.dataset;
  out.source_files = corpus.source_files;
  out.stats = corpus.stats;
  std::copy_if(corpus.sequences.begin(), corpus.sequences.end(),
               std::back_inserter(out.sequences),
               [&](const auto& s) { return s.label == label; });
  return out;
}

std::vector<EventSequence> FilterLabel(
    const std::vector<EventSequence>& sequences, Label label) {
  std::vector<EventSequence> out;
  std::copy_if(sequences.begin(), sequences.end(), std::back_inserter(out),
               [&](const auto& s) { return s.label == label; });
  return out;
}

namespace {

// Unbiased draw from [0, bound) on top of mt19937_64, whose output sequence
// is fixed by the standard (unlike std::uniform_int_distribution).
std::uint64_t UniformBelow(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

template <typename T>
std::pair<std::vector<T>, std::vector<T>> Partition(const std::vector<T>& items,
                                                    const SplitSpec& spec) {
  auto [train_idx, test_idx] = SplitIndices(items.size(), spec);
  std::pair<std::vector<T>, std::vector<T>> out;
  out.first.reserve(train_idx.size());
  out.second.reserve(test_idx.size());
  for (auto i : train_idx) out.first.push_back(items[i]);
  for (auto i : test_idx) out.second.push_back(items[i]);
  return out;
}

}  // namespace

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> SplitIndices(
    std::size_t count, const SplitSpec& spec) {
  if (!(spec.ratio > 0.0 && spec.ratio < 1.0)) {
    throw std::invalid_argument("split ratio must lie in (0, 1)");
  }
  std::vector<std::size_t> order(count);
  for (std::size_t i = 0; i < count; ++i) order[i] = i;
  std::mt19937_64 rng(spec.seed);
  for (std::size_t i = count; i > 1; --i) {
    std::swap(order[i - 1], order[UniformBelow(rng, i)]);
  }
  const auto cut = static_cast<std::size_t>(
      std::llround(spec.ratio * static_cast<double>(count)));
  std::vector<std::size_t> train(order.begin(), order.begin() + cut);
  std::vector<std::size_t> test(order.begin() + cut, order.end());
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {std::move(train), std::move(test)};
}

std::pair<LabeledCorpus, LabeledCorpus> Split(const LabeledCorpus& corpus,
                                              const SplitSpec& spec) {
  for (const auto& s : corpus.sequences) {
    if (s.label != Label::kNormal) {
      throw std::invalid_argument("split expects Normal sequences only: " +
                                  s.session_id);
    }
  }
  auto [train_seqs, test_seqs] = Partition(corpus.sequences, spec);
  std::pair<LabeledCorpus, LabeledCorpus> out;
  for (auto* side : {&out.first, &out.second}) {
    side->dataset = corpus.dataset;
    side->source_files = corpus.source_files;
  }
  out.first.sequences = std::move(train_seqs);
  out.second.sequences = std::move(test_seqs);
  return out;
}

std::pair<std::vector<EventSequence>, std::vector<EventSequence>> Split(
    const std::vector<EventSequence>& sequences, const SplitSpec& spec) {
  for (const auto& s : sequences) {
    if (s.label != Label::kNormal) {
      throw std::invalid_argument("split expects Normal sequences only: " +
                                  s.session_id);
    }
  }
  return Partition(sequences, spec);
}

}  // namespace ngramlog
