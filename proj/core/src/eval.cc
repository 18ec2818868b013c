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

#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "ngramlog/errors.h"

namespace ngramlog {

EventId MostFrequentEvent(std::span<const EventSequence> train) {
  std::unordered_map<EventId, std::uint64_t> counts;
  for (const auto& seq : train) {
    for (const auto e : seq.events) ++counts[e];
    ++counts[EventId::Eos()];
  }
  if (counts.empty()) throw UntrainedModelError();
  std::optional<std::pair<EventId, std::uint64_t>> best;
  for (const auto& [e, c] : counts) {
    if (!best || c > best->second || (c == best->second && e < best->first)) {
      best = {e, c};
    }
  }
  return best->first;
}

int CompareAccuracy(const SequenceAccuracy& a, const SequenceAccuracy& b) {
  __extension__ using Wide = unsigned __int128;
  const Wide lhs = static_cast<Wide>(a.correct) * (b.total ? b.total : 1);
  const Wide rhs = static_cast<Wide>(b.correct) * (a.total ? a.total : 1);
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

EvalReport DummyAccuracy(std::span<const EventSequence> train,
                         std::span<const EventSequence> test,
                         const EvalOptions& options) {
  EvalOptions dummy_options = options;
  dummy_options.model_name = "dummy";
  ConstantPredictor predictor(EventId::Eos());
  const double train_seconds =
      TimeIt([&] { predictor = ConstantPredictor(MostFrequentEvent(train)); });
  EvalReport report = Accuracy(predictor, test, dummy_options);
  report.n.reset();
  report.train_seconds = train_seconds;
  return report;
}

std::vector<SequenceAccuracy> PerSequenceFromPredictions(
    const std::vector<PredictionRow>& rows) {
  std::vector<SequenceAccuracy> out;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& row : rows) {
    auto [it, inserted] = index.try_emplace(row.session_id, out.size());
    if (inserted) out.push_back(SequenceAccuracy{row.session_id, 0, 0});
    auto& acc = out[it->second];
    ++acc.total;
    if (row.actual == row.predicted) ++acc.correct;
  }
  return out;
}

ComparisonReport Compare(const std::vector<SequenceAccuracy>& a,
                         const std::vector<SequenceAccuracy>& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("compare: test sets differ in size");
  }
  std::unordered_map<std::string_view, const SequenceAccuracy*> by_id;
  for (const auto& s : b) {
    if (!by_id.emplace(s.session_id, &s).second) {
      throw std::invalid_argument("compare: duplicate session " + s.session_id);
    }
  }
  ComparisonReport report;
  report.rows.reserve(a.size());
  for (const auto& sa : a) {
    const auto it = by_id.find(sa.session_id);
    if (it == by_id.end()) {
      throw std::invalid_argument("compare: session missing on one side: " +
                                  sa.session_id);
    }
    const SequenceAccuracy& sb = *it->second;
    if (sa.total != sb.total) {
      throw std::invalid_argument("compare: prediction counts differ for " +
                                  sa.session_id);
    }
    ComparisonRow row{sa.session_id, sa, sb, Outcome::kTie};
    const int cmp = CompareAccuracy(sa, sb);
    if (cmp > 0) {
      row.outcome = Outcome::kWinA;
      ++report.wins_a;
    } else if (cmp < 0) {
      row.outcome = Outcome::kWinB;
      ++report.wins_b;
    } else {
      ++report.ties;
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::vector<EvalReport> Sweep(std::span<const EventSequence> train,
                              std::span<const EventSequence> test, int n_min,
                              int n_max, const EvalOptions& options) {
  if (n_min > n_max) throw std::invalid_argument("sweep: empty n range");
  std::vector<EvalReport> reports;
  for (int n = n_min; n <= n_max; ++n) {
    const WindowSize window(n);
    NGramModel model(window);
    const double train_seconds = TimeIt([&] {
      model = NGramModel::TrainParallel(train, window, options.threads);
    });
    EvalReport report = Accuracy(model, test, options);
    report.train_seconds = train_seconds;
    reports.push_back(std::move(report));
  }
  return reports;
}

SweepWins CountSweepWins(const std::vector<EvalReport>& reports) {
  SweepWins wins;
  wins.wins.assign(reports.size(), 0);
  if (reports.empty()) return wins;
  const std::size_t sequences = reports.front().per_sequence.size();
  for (const auto& r : reports) {
    if (r.per_sequence.size() != sequences) {
      throw std::invalid_argument("sweep wins: reports cover different test sets");
    }
  }
  for (std::size_t s = 0; s < sequences; ++s) {
    std::size_t best = 0;
    bool unique = true;
    for (std::size_t r = 1; r < reports.size(); ++r) {
      const int cmp = CompareAccuracy(reports[r].per_sequence[s],
                                      reports[best].per_sequence[s]);
      if (cmp > 0) {
        best = r;
        unique = true;
      } else if (cmp == 0) {
        unique = false;
      }
    }
    if (unique && reports.size() > 1) {
      ++wins.wins[best];
    } else {
      ++wins.ties;
    }
  }
  return wins;
}

namespace {

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string_view OutcomeName(Outcome o) {
  switch (o) {
    case Outcome::kWinA:
      return "A";
    case Outcome::kWinB:
      return "B";
    case Outcome::kTie:
      return "tie";
  }
  return "tie";
}

}  // namespace

void WriteEvalCsv(std::ostream& out, const std::vector<EvalReport>& reports) {
  out << "dataset,model,n,accuracy,correct,total,unique_ngrams,train_s,infer_s\n";
  for (const auto& r : reports) {
    out << r.dataset_id << ',' << r.model_name << ','
        << (r.n ? std::to_string(r.n->value()) : std::string()) << ','
        << Fixed(r.accuracy, 6) << ',' << r.correct << ',' << r.total << ','
        << r.unique_ngrams << ',' << Fixed(r.train_seconds, 3) << ','
        << Fixed(r.infer_seconds, 3) << '\n';
  }
}

void WriteComparisonCsv(std::ostream& out, const ComparisonReport& report) {
  out << "session_id,acc_a,acc_b,outcome\n";
  for (const auto& row : report.rows) {
    out << row.session_id << ',' << Fixed(row.a.accuracy(), 6) << ','
        << Fixed(row.b.accuracy(), 6) << ',' << OutcomeName(row.outcome) << '\n';
  }
}

std::string FormatSweepTable(const std::vector<EvalReport>& reports,
                             const SweepWins& wins) {
  std::ostringstream os;
  const auto row = [&](const std::string& title, auto&& cell) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%-34s", title.c_str());
    os << buf;
    for (std::size_t i = 0; i < reports.size(); ++i) {
      std::snprintf(buf, sizeof(buf), " %10s", cell(i).c_str());
      os << buf;
    }
    os << '\n';
  };
  row("sliding window size n", [&](std::size_t i) {
    return reports[i].n ? std::to_string(reports[i].n->value()) : std::string("-");
  });
  row("N-Gram accuracy in test", [&](std::size_t i) { return Fixed(reports[i].accuracy, 3); });
  row("Wins in test data (tie = " + std::to_string(wins.ties) + ")",
      [&](std::size_t i) {
        return i < wins.wins.size() ? std::to_string(wins.wins[i]) : std::string("-");
      });
  row("Training time (s)", [&](std::size_t i) { return Fixed(reports[i].train_seconds, 2); });
  row("Inference time (s)", [&](std::size_t i) { return Fixed(reports[i].infer_seconds, 2); });
  row("n-grams (unique)", [&](std::size_t i) { return std::to_string(reports[i].unique_ngrams); });
  return os.str();
}

}  // namespace ngramlog
