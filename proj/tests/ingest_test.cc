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

#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <random>

#include "ngramlog/errors.h"
#include "test_util.h"

namespace ngramlog {
namespace {

namespace fs = std::filesystem;
using testing::Seq;
using testing::TempDir;

const fs::path kData = NGRAMLOG_TEST_DATA;

void WriteFile(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::vector<std::uint64_t> LineNumbers(const LogSequence& s) {
  std::vector<std::uint64_t> out;
  for (const auto& r : s.records) out.push_back(r.line_no);
  return out;
}

TEST(FindBlockIdTest, FirstValidIdWins) {
  EXPECT_EQ(FindBlockId("Receiving block blk_123 src"), "blk_123");
  EXPECT_EQ(FindBlockId("x blk_-42 to blk_7"), "blk_-42");
  EXPECT_EQ(FindBlockId("blk_ pending blk_x then blk_9"), "blk_9");
  EXPECT_EQ(FindBlockId("blk_-"), std::nullopt);
  EXPECT_EQ(FindBlockId("no block here"), std::nullopt);
}

TEST(ForEachLineTest, StripsCarriageReturnAndKeepsLastLine) {
  const auto dir = TempDir("foreach");
  WriteFile(dir / "f.log", "a\r\n\nb\nc");
  std::vector<std::pair<std::uint64_t, std::string>> got;
  ForEachLine(dir / "f.log", [&](std::uint64_t n, std::string_view t) {
    got.emplace_back(n, std::string(t));
  });
  const std::vector<std::pair<std::uint64_t, std::string>> want = {
      {1, "a"}, {2, ""}, {3, "b"}, {4, "c"}};
  EXPECT_EQ(got, want);
  EXPECT_THROW(ForEachLine(dir / "missing", [](auto, auto) {}), IoError);
}

TEST(ForEachLineTest, LinesLongerThanReadChunk) {
  const auto dir = TempDir("longline");
  const std::string long_line(3 * (1 << 20) + 17, 'x');
  WriteFile(dir / "f.log", "head\n" + long_line + "\ntail\n");
  std::vector<std::size_t> sizes;
  ForEachLine(dir / "f.log", [&](auto, std::string_view t) { sizes.push_back(t.size()); });
  EXPECT_EQ(sizes, (std::vector<std::size_t>{4, long_line.size(), 4}));
}

TEST(LoadHdfsTest, GroupsByFirstBlockIdInAppearanceOrder) {
  const auto corpus = LoadHdfs(kData / "hdfs_two_blocks.log",
                               kData / "hdfs_two_blocks_labels.csv");
  ASSERT_EQ(corpus.sequences.size(), 2u);
  EXPECT_EQ(corpus.sequences[0].session_id, "blk_100");
  EXPECT_EQ(LineNumbers(corpus.sequences[0]), (std::vector<std::uint64_t>{1, 5}));
  EXPECT_EQ(corpus.sequences[0].label, Label::kAnomaly);
  EXPECT_EQ(corpus.sequences[1].session_id, "blk_-200");
  EXPECT_EQ(LineNumbers(corpus.sequences[1]), (std::vector<std::uint64_t>{2, 3}));
  EXPECT_EQ(corpus.sequences[1].label, Label::kNormal);
  EXPECT_EQ(corpus.sequences[1].records[0].session_hint, "blk_-200");

  EXPECT_EQ(corpus.stats.lines_read, 5u);
  EXPECT_EQ(corpus.stats.lines_without_session, 1u);
  EXPECT_EQ(corpus.stats.unlabeled_sequences, 0u);
  EXPECT_EQ(corpus.normal_count(), 1u);
  EXPECT_EQ(corpus.anomaly_count(), 1u);
  EXPECT_EQ(corpus.record_count(), 4u);
}

TEST(LoadHdfsTest, MiniCorpusCounts) {
  const auto corpus = LoadHdfs(kData / "hdfs_mini.log", kData / "hdfs_mini_labels.csv");
  // Figures printed by tests/data/make_hdfs_mini.py when the fixture was made.
  EXPECT_EQ(corpus.stats.lines_read, 989u);
  EXPECT_EQ(corpus.stats.lines_without_session, 13u);
  EXPECT_EQ(corpus.sequences.size(), 60u);
  EXPECT_EQ(corpus.normal_count(), 56u);
  EXPECT_EQ(corpus.anomaly_count(), 4u);
  EXPECT_EQ(FilterLabel(corpus, Label::kNormal).record_count(), 944u);
}

TEST(LoadHdfsTest, BlocksMissingFromLabelTableAreUnlabeled) {
  const auto dir = TempDir("unlabeled");
  WriteFile(dir / "labels.csv", "BlockId,Label\nblk_1,Normal\n");
  WriteFile(dir / "x.log", "a blk_1\nb blk_2\nc blk_1\n");
  const auto corpus = LoadHdfs(dir / "x.log", dir / "labels.csv");
  ASSERT_EQ(corpus.sequences.size(), 2u);
  EXPECT_EQ(corpus.sequences[1].label, Label::kUnlabeled);
  EXPECT_EQ(corpus.stats.unlabeled_sequences, 1u);
  EXPECT_EQ(corpus.unlabeled_count(), 1u);
}

TEST(LoadHdfsTest, Errors) {
  const auto dir = TempDir("hdfs_errors");
  WriteFile(dir / "x.log", "a blk_1\n");
  WriteFile(dir / "bad_label.csv", "BlockId,Label\nblk_1,Maybe\n");
  WriteFile(dir / "no_comma.csv", "BlockId,Label\nblk_1 Normal\n");
  WriteFile(dir / "empty.csv", "");
  EXPECT_THROW(LoadHdfs(dir / "x.log", dir / "bad_label.csv"), FormatError);
  EXPECT_THROW(LoadHdfs(dir / "x.log", dir / "no_comma.csv"), FormatError);
  EXPECT_THROW(LoadHdfs(dir / "x.log", dir / "empty.csv"), FormatError);
  EXPECT_THROW(LoadHdfs(dir / "x.log", dir / "none.csv"), IoError);
  EXPECT_THROW(LoadHdfs(dir / "none.log", kData / "hdfs_two_blocks_labels.csv"), IoError);
}

TEST(LoadHdfsTest, InvalidUtf8IsReplaced) {
  const auto dir = TempDir("utf8");
  WriteFile(dir / "labels.csv", "BlockId,Label\nblk_1,Normal\n");
  WriteFile(dir / "x.log", "bad \xff byte blk_1\n");
  const auto corpus = LoadHdfs(dir / "x.log", dir / "labels.csv");
  EXPECT_EQ(corpus.sequences[0].records[0].text, "bad \xEF\xBF\xBD byte blk_1");
}

// Reinterleaving lines of different blocks must not change any block's
// record list.
TEST(LoadHdfsTest, InterleavingDoesNotChangeSequences) {
  const auto dir = TempDir("interleave");
  WriteFile(dir / "labels.csv", "BlockId,Label\n");
  std::mt19937_64 rng(5);
  std::map<std::string, std::vector<std::string>> blocks;
  for (int b = 0; b < 6; ++b) {
    const std::string id = "blk_" + std::to_string(b * 37 - 60);
    for (int k = 0; k < 8; ++k) {
      blocks[id].push_back("event" + std::to_string(rng() % 4) + " " + id);
    }
  }
  for (int trial = 0; trial < 20; ++trial) {
    std::map<std::string, std::size_t> cursor;
    std::vector<std::string> pending;
    for (const auto& [id, lines] : blocks) pending.push_back(id);
    std::string text;
    while (!pending.empty()) {
      const auto pick = rng() % pending.size();
      const auto& id = pending[pick];
      text += blocks[id][cursor[id]++] + "\n";
      if (cursor[id] == blocks[id].size()) pending.erase(pending.begin() + pick);
    }
    WriteFile(dir / "x.log", text);
    const auto corpus = LoadHdfs(dir / "x.log", dir / "labels.csv");
    ASSERT_EQ(corpus.sequences.size(), blocks.size());
    for (const auto& seq : corpus.sequences) {
      std::vector<std::string> texts;
      for (const auto& r : seq.records) texts.push_back(r.text);
      EXPECT_EQ(texts, blocks[seq.session_id]);
    }
  }
}

TEST(LoadPerFileTest, OneSequencePerFileSortedByName) {
  const auto dir = TempDir("perfile");
  WriteFile(dir / "b.log", "");
  WriteFile(dir / "a.log", "one\ntwo\nthree\n");
  const auto corpus = LoadPerFile(dir, NameContainsRule("FAIL"));
  ASSERT_EQ(corpus.sequences.size(), 2u);
  EXPECT_EQ(corpus.sequences[0].session_id, "a.log");
  EXPECT_EQ(corpus.sequences[0].records.size(), 3u);
  EXPECT_EQ(corpus.sequences[0].records[2].text, "three");
  EXPECT_EQ(corpus.sequences[1].session_id, "b.log");
  EXPECT_TRUE(corpus.sequences[1].records.empty());
  EXPECT_EQ(corpus.normal_count(), 2u);
  EXPECT_EQ(corpus.stats.lines_read, 3u);
}

TEST(LoadPerFileTest, LabelRuleOnFileName) {
  const auto dir = TempDir("labelrule");
  for (int i = 0; i < 275; ++i) {
    const bool fail = i == 17 || i == 201;
    WriteFile(dir / ("run-" + std::to_string(1000 + i) + (fail ? "-FAIL" : "") + ".log"),
              "x\n");
  }
  const auto corpus = LoadPerFile(dir, NameContainsRule("FAIL"));
  EXPECT_EQ(corpus.sequences.size(), 275u);
  EXPECT_EQ(corpus.anomaly_count(), 2u);
  EXPECT_EQ(corpus.normal_count(), 273u);
  EXPECT_EQ(FilterLabel(corpus, Label::kNormal).sequences.size(), 273u);
}

TEST(LoadPerFileTest, MissingDirectory) {
  EXPECT_THROW(LoadPerFile(TempDir("gone") / "nope", NameContainsRule("x")), IoError);
}

TEST(FilterTest, MinLengthKeepsBoundaryAndCounts) {
  LabeledCorpus corpus;
  for (std::size_t len : {0u, 1u, 2u, 3u}) {
    LogSequence s;
    s.session_id = "s" + std::to_string(len);
    s.records.resize(len);
    corpus.sequences.push_back(s);
  }
  const auto kept = FilterMinLength(corpus, 2);
  ASSERT_EQ(kept.sequences.size(), 2u);
  EXPECT_EQ(kept.sequences[0].session_id, "s2");
  EXPECT_EQ(kept.stats.filtered_sequences, 2u);
  EXPECT_EQ(FilterMinLength(kept, 2).sequences, kept.sequences);
  EXPECT_EQ(FilterMinLength(corpus, 0).sequences.size(), 4u);
}

TEST(FilterTest, EventSequenceOverloads) {
  const std::vector<EventSequence> seqs = {Seq("a", {1, 2}), Seq("b", {1}, Label::kAnomaly),
                                           Seq("c", {}), Seq("d", {3, 3, 3})};
  const auto long_ones = FilterMinLength(seqs, 2);
  ASSERT_EQ(long_ones.size(), 2u);
  EXPECT_EQ(long_ones[1].session_id, "d");
  EXPECT_EQ(FilterMinLength(long_ones, 2), long_ones);
  const auto normal = FilterLabel(seqs, Label::kNormal);
  EXPECT_EQ(normal.size(), 3u);
  EXPECT_EQ(FilterLabel(normal, Label::kNormal), normal);
}

TEST(SplitTest, PartitionIsDisjointCompleteAndOrdered) {
  for (std::size_t count : {0u, 1u, 2u, 7u, 100u, 1001u}) {
    for (double ratio : {0.1, 0.5, 0.9}) {
      const auto [train, test] = SplitIndices(count, {ratio, 3});
      EXPECT_EQ(train.size(), static_cast<std::size_t>(std::llround(ratio * count)));
      std::vector<std::size_t> all = train;
      all.insert(all.end(), test.begin(), test.end());
      std::sort(all.begin(), all.end());
      for (std::size_t i = 0; i < count; ++i) ASSERT_EQ(all[i], i);
      EXPECT_EQ(all.size(), count);
      EXPECT_TRUE(std::is_sorted(train.begin(), train.end()));
      EXPECT_TRUE(std::is_sorted(test.begin(), test.end()));
    }
  }
}

TEST(SplitTest, SeedDeterminesSplit) {
  EXPECT_EQ(SplitIndices(500, {0.5, 9}), SplitIndices(500, {0.5, 9}));
  EXPECT_NE(SplitIndices(500, {0.5, 9}), SplitIndices(500, {0.5, 10}));
}

TEST(SplitTest, HalfSplitOfHundredNormals) {
  std::vector<EventSequence> seqs;
  for (int i = 0; i < 100; ++i) seqs.push_back(Seq("r" + std::to_string(i), {1, 2}));
  const auto [train, test] = Split(seqs, {});
  EXPECT_EQ(train.size(), 50u);
  EXPECT_EQ(test.size(), 50u);
  for (const auto& t : train) {
    EXPECT_EQ(std::count(test.begin(), test.end(), t), 0);
  }
}

TEST(SplitTest, RejectsBadRatioAndNonNormal) {
  EXPECT_THROW(SplitIndices(10, {0.0, 1}), std::invalid_argument);
  EXPECT_THROW(SplitIndices(10, {1.0, 1}), std::invalid_argument);
  EXPECT_THROW(SplitIndices(10, {std::nan(""), 1}), std::invalid_argument);
  const std::vector<EventSequence> mixed = {Seq("a", {1}), Seq("b", {1}, Label::kAnomaly)};
  EXPECT_THROW(Split(mixed, {}), std::invalid_argument);

  LabeledCorpus corpus;
  corpus.sequences.push_back(LogSequence{"x", {}, Label::kUnlabeled});
  EXPECT_THROW(Split(corpus, {}), std::invalid_argument);
}

TEST(SplitTest, CorpusSplitKeepsMetadata) {
  LabeledCorpus corpus;
  corpus.dataset = "d";
  for (int i = 0; i < 10; ++i) {
    corpus.sequences.push_back(LogSequence{"s" + std::to_string(i), {}, Label::kNormal});
  }
  const auto [train, test] = Split(corpus, {0.3, 1});
  EXPECT_EQ(train.sequences.size(), 3u);
  EXPECT_EQ(test.sequences.size(), 7u);
  EXPECT_EQ(train.dataset, "d");
}

}  // namespace
}  // namespace ngramlog
