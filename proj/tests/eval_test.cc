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


#include "ngramlog/eval.h"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "ngramlog/errors.h"
#include "oracle.h"
#include "test_util.h"

namespace ngramlog {
namespace {

using testing::Ids;
using testing::RandomCorpus;
using testing::Seq;

constexpr EventId::Rep A = 0, B = 1, C = 2;

std::vector<oracle::Ids> RawCorpus(const std::vector<EventSequence>& seqs) {
  std::vector<oracle::Ids> out;
  for (const auto& s : seqs) out.push_back(oracle::Raw(s.events));
  return out;
}

SequenceAccuracy Acc(std::string id, std::uint64_t correct, std::uint64_t total) {
  return {std::move(id), correct, total};
}

TEST(AccuracyTest, PerfectBigramIncludesEndOfSequence) {
  const std::vector<EventSequence> data = {Seq("s", {A, B})};
  const auto model = NGramModel::Train(data, WindowSize(2));
  const auto report = Accuracy(model, data, {"toy"});
  EXPECT_EQ(report.correct, 3u);
  EXPECT_EQ(report.total, 3u);
  EXPECT_DOUBLE_EQ(report.accuracy, 1.0);
  EXPECT_EQ(report.n->value(), 2);
  EXPECT_EQ(report.dataset_id, "toy");
  EXPECT_EQ(report.unique_ngrams, model.unique_ngrams());
  ASSERT_EQ(report.per_sequence.size(), 1u);
  EXPECT_EQ(report.per_sequence[0], Acc("s", 3, 3));
}

TEST(AccuracyTest, EmptyTestSetIsAnError) {
  const std::vector<EventSequence> data = {Seq("s", {A})};
  const auto model = NGramModel::Train(data, WindowSize(2));
  EXPECT_THROW(Accuracy(model, std::span<const EventSequence>{}), std::invalid_argument);
  EXPECT_THROW(DummyAccuracy(data, std::span<const EventSequence>{}), std::invalid_argument);
}

TEST(AccuracyTest, EmptySequenceStillPredictsEndOfSequence) {
  const std::vector<EventSequence> train = {Seq("t", {A})};
  const std::vector<EventSequence> test = {Seq("e", {})};
  const auto report = Accuracy(NGramModel::Train(train, WindowSize(3)), test);
  EXPECT_EQ(report.total, 1u);
  EXPECT_EQ(report.correct, 0u);  // SoS SoS -> A
}

TEST(DummyTest, MostFrequentWithEndOfSequence) {
  const std::vector<EventSequence> one = {Seq("s", {A})};
  EXPECT_EQ(MostFrequentEvent(one), EventId(A));  // tie with EoS, smaller id
  const auto report = DummyAccuracy(one, one, {"toy"});
  EXPECT_EQ(report.correct, 1u);
  EXPECT_EQ(report.total, 2u);
  EXPECT_DOUBLE_EQ(report.accuracy, 0.5);
  EXPECT_EQ(report.model_name, "dummy");
  EXPECT_FALSE(report.n.has_value());

  const std::vector<EventSequence> short_runs = {Seq("a", {B}), Seq("b", {C}), Seq("c", {})};
  EXPECT_EQ(MostFrequentEvent(short_runs), EventId::Eos());
  EXPECT_THROW(MostFrequentEvent(std::span<const EventSequence>{}), UntrainedModelError);
}

TEST(DummyTest, FallbackMatchesModelMostFrequent) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const auto train = RandomCorpus(rng);
    const auto model = NGramModel::Train(train, WindowSize(3));
    EXPECT_EQ(model.MostFrequent(), MostFrequentEvent(train));
    EXPECT_EQ(MostFrequentEvent(train).value(),
              oracle::GlobalMostFrequent(RawCorpus(train)));
  }
}

TEST(AccuracyTest, MatchesOracleOnRandomCorpora) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const auto train = RandomCorpus(rng);
    const auto test = RandomCorpus(rng);
    const int n = 2 + static_cast<int>(rng() % 4);
    const auto report = Accuracy(NGramModel::Train(train, WindowSize(n)), test);
    const auto want = oracle::Accuracy(RawCorpus(train), RawCorpus(test), n);
    ASSERT_EQ(report.correct, want.correct);
    ASSERT_EQ(report.total, want.total);
  }
}

TEST(AccuracyTest, ThreadCountDoesNotChangeResult) {
  std::mt19937_64 rng(4);
  std::vector<EventSequence> data;
  for (int i = 0; i < 300; ++i) {
    auto more = RandomCorpus(rng, 40, 1, 6);
    more[0].session_id = "s" + std::to_string(i);
    data.push_back(more[0]);
  }
  const auto model = NGramModel::Train(data, WindowSize(3));
  EvalOptions four;
  four.threads = 4;
  const auto a = Accuracy(model, data);
  const auto b = Accuracy(model, data, four);
  EXPECT_EQ(a.per_sequence, b.per_sequence);
  EXPECT_EQ(a.correct, b.correct);
}

TEST(CompareAccuracyTest, ExactFractions) {
  EXPECT_EQ(CompareAccuracy(Acc("a", 1, 3), Acc("a", 2, 6)), 0);
  EXPECT_EQ(CompareAccuracy(Acc("a", 1, 3), Acc("a", 333333, 1000000)), 1);
  const std::uint64_t big = 1ull << 62;
  EXPECT_EQ(CompareAccuracy(Acc("a", big - 1, big), Acc("a", big - 2, big - 1)), 1);
  EXPECT_EQ(CompareAccuracy(Acc("a", 0, 0), Acc("a", 0, 5)), 0);
}

TEST(CompareTest, CountsAndRows) {
  const std::vector<SequenceAccuracy> a = {Acc("x", 3, 4), Acc("y", 1, 4), Acc("z", 2, 4)};
  const std::vector<SequenceAccuracy> b = {Acc("z", 2, 4), Acc("x", 2, 4), Acc("y", 4, 4)};
  const auto r = Compare(a, b);
  EXPECT_EQ(r.wins_a, 1u);
  EXPECT_EQ(r.wins_b, 1u);
  EXPECT_EQ(r.ties, 1u);
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_EQ(r.rows[0].session_id, "x");
  EXPECT_EQ(r.rows[0].outcome, Outcome::kWinA);
  EXPECT_EQ(r.rows[1].outcome, Outcome::kWinB);
  EXPECT_EQ(r.rows[2].outcome, Outcome::kTie);

  std::ostringstream os;
  WriteComparisonCsv(os, r);
  EXPECT_EQ(os.str(),
            "session_id,acc_a,acc_b,outcome\n"
            "x,0.750000,0.500000,A\ny,0.250000,1.000000,B\nz,0.500000,0.500000,tie\n");
}

TEST(CompareTest, AntisymmetricAndPartitioning) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<SequenceAccuracy> a, b;
    const auto count = rng() % 20;
    for (std::size_t i = 0; i < count; ++i) {
      const auto total = 1 + rng() % 10;
      a.push_back(Acc("s" + std::to_string(i), rng() % (total + 1), total));
      b.push_back(Acc("s" + std::to_string(i), rng() % (total + 1), total));
    }
    const auto ab = Compare(a, b);
    const auto ba = Compare(b, a);
    EXPECT_EQ(ab.wins_a + ab.wins_b + ab.ties, count);
    EXPECT_EQ(ab.wins_a, ba.wins_b);
    EXPECT_EQ(ab.wins_b, ba.wins_a);
    EXPECT_EQ(ab.ties, ba.ties);
    const auto self = Compare(a, a);
    EXPECT_EQ(self.ties, count);
  }
}

TEST(CompareTest, RejectsMismatchedSets) {
  const std::vector<SequenceAccuracy> a = {Acc("x", 1, 2)};
  EXPECT_THROW(Compare(a, {}), std::invalid_argument);
  EXPECT_THROW(Compare(a, {Acc("y", 1, 2)}), std::invalid_argument);
  EXPECT_THROW(Compare(a, {Acc("x", 1, 3)}), std::invalid_argument);
  EXPECT_THROW(Compare({Acc("x", 1, 2), Acc("y", 0, 1)}, {Acc("x", 1, 2), Acc("x", 1, 2)}),
               std::invalid_argument);
}

TEST(CompareTest, PredictorsOnSameTestSet) {
  const std::vector<EventSequence> train = {Seq("t", {A, B, A, B, A})};
  const std::vector<EventSequence> test = {Seq("p", {A, B, A}), Seq("q", {C, C})};
  const auto model = NGramModel::Train(train, WindowSize(2));
  const auto r = Compare(model, ConstantPredictor(EventId(C)), test);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.rows[0].outcome, Outcome::kWinA);
  EXPECT_EQ(r.rows[1].outcome, Outcome::kWinB);
}

TEST(PredictionsTest, CollectAndAggregate) {
  const std::vector<EventSequence> train = {Seq("t", {A, B})};
  const std::vector<EventSequence> test = {Seq("p", {A, C}), Seq("q", {})};
  const auto model = NGramModel::Train(train, WindowSize(2));
  const auto rows = CollectPredictions(model, test);
  const std::vector<PredictionRow> want = {
      {"p", 1, EventId(A), EventId(A)},
      {"p", 2, EventId(C), EventId(B)},
      {"p", 3, EventId::Eos(), model.MostFrequent()},
      {"q", 1, EventId::Eos(), EventId(A)},
  };
  EXPECT_EQ(rows, want);
  const auto per = PerSequenceFromPredictions(rows);
  EXPECT_EQ(per, Accuracy(model, test).per_sequence);
}

TEST(SweepTest, IdenticalSequencesArePredictedPerfectly) {
  std::vector<EventSequence> data;
  for (int i = 0; i < 4; ++i) data.push_back(Seq("s" + std::to_string(i), {A, B, C, A, C, B}));
  const auto reports = Sweep(data, data, 2, 10);
  ASSERT_EQ(reports.size(), 9u);
  for (std::size_t i = 0; i < reports.size(); ++i) {
    EXPECT_EQ(reports[i].n->value(), static_cast<int>(i) + 2);
    if (i >= 1) EXPECT_DOUBLE_EQ(reports[i].accuracy, 1.0);  // bigrams are ambiguous here
    EXPECT_GE(reports[i].train_seconds, 0.0);
  }
  EXPECT_LT(reports[0].accuracy, 1.0);
  const auto wins = CountSweepWins(reports);
  EXPECT_EQ(wins.ties, 4u);
  EXPECT_THROW(Sweep(data, data, 5, 4), std::invalid_argument);
  EXPECT_THROW(Sweep(data, data, 1, 4), std::invalid_argument);
}

TEST(SweepTest, DeterministicAndMatchesOracle) {
  std::mt19937_64 rng(12);
  const auto train = RandomCorpus(rng, 50, 6, 4);
  const auto test = RandomCorpus(rng, 50, 6, 4);
  const auto a = Sweep(train, test, 2, 6);
  const auto b = Sweep(train, test, 2, 6);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].per_sequence, b[i].per_sequence);
    EXPECT_EQ(a[i].unique_ngrams, b[i].unique_ngrams);
    const auto want = oracle::Accuracy(RawCorpus(train), RawCorpus(test), static_cast<int>(i) + 2);
    EXPECT_EQ(a[i].correct, want.correct);
  }
}

TEST(SweepTest, DummyIsNoBetterThanBestNgramOnTrainingData) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto data = RandomCorpus(rng);
    const auto reports = Sweep(data, data, 2, 5);
    const auto dummy = DummyAccuracy(data, data);
    double best = 0.0;
    for (const auto& r : reports) best = std::max(best, r.accuracy);
    EXPECT_LE(dummy.accuracy, best + 1e-12);
  }
}

TEST(SweepWinsTest, UniqueBestWins) {
  EvalReport r2, r3, r4;
  r2.per_sequence = {Acc("a", 1, 4), Acc("b", 2, 4), Acc("c", 3, 4)};
  r3.per_sequence = {Acc("a", 2, 4), Acc("b", 2, 4), Acc("c", 1, 4)};
  r4.per_sequence = {Acc("a", 2, 4), Acc("b", 1, 4), Acc("c", 0, 4)};
  const auto wins = CountSweepWins({r2, r3, r4});
  EXPECT_EQ(wins.wins, (std::vector<std::size_t>{1, 0, 0}));
  EXPECT_EQ(wins.ties, 2u);
  EXPECT_EQ(CountSweepWins({r2}).ties, 3u);
  EvalReport shorter;
  EXPECT_THROW(CountSweepWins({r2, shorter}), std::invalid_argument);
}

TEST(EvalCsvTest, Layout) {
  EvalReport ngram;
  ngram.dataset_id = "hdfs";
  ngram.model_name = "ngram";
  ngram.n = WindowSize(5);
  ngram.accuracy = 0.8491234567;
  ngram.correct = 849;
  ngram.total = 1000;
  ngram.unique_ngrams = 3239;
  ngram.train_seconds = 12.8;
  ngram.infer_seconds = 8.6004;
  EvalReport dummy = ngram;
  dummy.model_name = "dummy";
  dummy.n.reset();
  dummy.unique_ngrams = 0;
  std::ostringstream os;
  WriteEvalCsv(os, {ngram, dummy});
  EXPECT_EQ(os.str(),
            "dataset,model,n,accuracy,correct,total,unique_ngrams,train_s,infer_s\n"
            "hdfs,ngram,5,0.849123,849,1000,3239,12.800,8.600\n"
            "hdfs,dummy,,0.849123,849,1000,0,12.800,8.600\n");
}

TEST(SweepTableTest, RowsInOrder) {
  std::vector<EvalReport> reports(2);
  reports[0].n = WindowSize(2);
  reports[1].n = WindowSize(3);
  reports[0].accuracy = 0.5;
  reports[1].accuracy = 0.75;
  reports[1].unique_ngrams = 42;
  SweepWins wins{{1, 3}, 7};
  const auto table = FormatSweepTable(reports, wins);
  std::istringstream lines(table);
  std::vector<std::string> got;
  for (std::string l; std::getline(lines, l);) got.push_back(l);
  ASSERT_EQ(got.size(), 6u);
  EXPECT_EQ(got[0].rfind("sliding window size n", 0), 0u);
  EXPECT_NE(got[1].find("0.500"), std::string::npos);
  EXPECT_NE(got[1].find("0.750"), std::string::npos);
  EXPECT_EQ(got[2].rfind("Wins in test data (tie = 7)", 0), 0u);
  EXPECT_NE(got[5].find("42"), std::string::npos);
}

}  // namespace
}  // namespace ngramlog
