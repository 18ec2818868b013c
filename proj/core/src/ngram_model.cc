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

#include "ngramlog/ngram_model.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "ngramlog/errors.h"

namespace ngramlog {
namespace {

constexpr std::array<char, 4> kMagic = {'N', 'G', 'L', 'M'};
constexpr std::uint32_t kFormatVersion = 1;

// Copies a context into a contiguous key without allocating for the common
// (short) case and hands a view of it to `fn`.
template <typename F>
decltype(auto) WithKey(Context context, F&& fn) {
  constexpr std::size_t kInline = 32;
  std::array<char32_t, kInline> inline_buf;
  std::u32string heap;
  char32_t* buf = inline_buf.data();
  if (context.size() > kInline) {
    heap.resize(context.size());
    buf = heap.data();
  }
  for (std::size_t i = 0; i < context.size(); ++i) {
    buf[i] = static_cast<char32_t>(context[i].value());
  }
  return fn(std::u32string_view(buf, context.size()));
}

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  template <typename T>
  void Put(T value) {
    static_assert(std::is_unsigned_v<T>);
    std::array<char, sizeof(T)> bytes;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
    }
    out_.write(bytes.data(), bytes.size());
  }
  void Raw(const char* data, std::size_t size) {
    out_.write(data, static_cast<std::streamsize>(size));
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  template <typename T>
  T Get() {
    std::array<unsigned char, sizeof(T)> bytes;
    in_.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
    if (in_.gcount() != static_cast<std::streamsize>(bytes.size())) {
      throw FormatError("model: truncated file");
    }
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      value |= static_cast<T>(bytes[i]) << (8 * i);
    }
    return value;
  }
  void Raw(char* data, std::size_t size) {
    in_.read(data, static_cast<std::streamsize>(size));
    if (in_.gcount() != static_cast<std::streamsize>(size)) {
      throw FormatError("model: truncated file");
    }
  }
  bool AtEnd() { return in_.peek() == std::char_traits<char>::eof(); }

 private:
  std::istream& in_;
};

}  // namespace

WindowSize::WindowSize(int n) : n_(n) {
  if (n < 2) throw std::invalid_argument("window size n must be >= 2");
}

std::uint64_t ContextStats::CountOf(EventId event) const {
  auto it = std::lower_bound(
      successors.begin(), successors.end(), event,
      [](const SuccessorCount& s, EventId e) { return s.event < e; });
  return it != successors.end() && it->event == event ? it->count : 0;
}

bool ContextStats::Add(EventId event, std::uint64_t count) {
  total += count;
  auto it = std::lower_bound(
      successors.begin(), successors.end(), event,
      [](const SuccessorCount& s, EventId e) { return s.event < e; });
  if (it != successors.end() && it->event == event) {
    it->count += count;
    return false;
  }
  successors.insert(it, SuccessorCount{event, count});
  return true;
}

EventId ContextStats::Argmax() const {
  // Successors are id-ordered, so the first strict maximum wins ties.
  const SuccessorCount* best = &successors.front();
  for (const auto& s : successors) {
    if (s.count > best->count) best = &s;
  }
  return best->event;
}

std::optional<std::size_t> ContextStats::RankOf(EventId event) const {
  const std::uint64_t count = CountOf(event);
  if (count == 0) return std::nullopt;
  std::size_t ahead = 0;
  for (const auto& s : successors) {
    if (s.count > count || (s.count == count && s.event < event)) ++ahead;
  }
  return ahead + 1;
}

std::vector<EventId> Pad(std::span<const EventId> events, WindowSize n) {
  std::vector<EventId> padded;
  padded.reserve(events.size() + n.context_length() + 1);
  padded.insert(padded.end(), n.context_length(), EventId::Sos());
  padded.insert(padded.end(), events.begin(), events.end());
  padded.push_back(EventId::Eos());
  return padded;
}

NGramModel::NGramModel(WindowSize n) : n_(n) {}

NGramModel NGramModel::Train(std::span<const EventSequence> sequences,
                             WindowSize n) {
  NGramModel model(n);
  for (const auto& seq : sequences) model.AddSequence(seq.events);
  return model;
}

NGramModel NGramModel::Train(std::span<const std::vector<EventId>> sequences,
                             WindowSize n) {
  NGramModel model(n);
  for (const auto& seq : sequences) model.AddSequence(seq);
  return model;
}

NGramModel NGramModel::TrainParallel(std::span<const EventSequence> sequences,
                                     WindowSize n, unsigned threads) {
  threads = std::max(1u, threads);
  if (threads == 1 || sequences.size() < 2 * threads) return Train(sequences, n);

  std::vector<NGramModel> shards(threads, NGramModel(n));
  {
    std::vector<std::jthread> workers;
    const std::size_t per = (sequences.size() + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t begin = std::min(sequences.size(), t * per);
      const std::size_t end = std::min(sequences.size(), begin + per);
      workers.emplace_back([&, t, begin, end] {
        shards[t] = Train(sequences.subspan(begin, end - begin), n);
      });
    }
  }
  NGramModel model = std::move(shards.front());
  for (std::size_t t = 1; t < shards.size(); ++t) model.MergeFrom(shards[t]);
  return model;
}

void NGramModel::Count(std::u32string_view key, EventId next,
                       std::uint64_t count) {
  auto it = table_.find(key);
  if (it == table_.end()) it = table_.emplace(std::u32string(key), ContextStats{}).first;
  if (it->second.Add(next, count)) ++unique_ngrams_;

  const std::uint64_t global = (global_counts_[next] += count);
  trained_events_ += count;
  if (!most_frequent_) {
    most_frequent_ = next;
  } else if (*most_frequent_ != next) {
    const std::uint64_t best = global_counts_[*most_frequent_];
    if (global > best || (global == best && next < *most_frequent_)) {
      most_frequent_ = next;
    }
  }
}

void NGramModel::AddSequence(std::span<const EventId> events) {
  for (const auto e : events) {
    if (e.is_sentinel()) {
      throw std::invalid_argument("training sequence contains a sentinel");
    }
  }
  const auto padded = Pad(events, n_);
  const std::size_t ctx = n_.context_length();
  std::u32string key(ctx, U'\0');
  for (std::size_t i = 0; i + ctx < padded.size(); ++i) {
    for (std::size_t k = 0; k < ctx; ++k) {
      key[k] = static_cast<char32_t>(padded[i + k].value());
    }
    Count(key, padded[i + ctx], 1);
  }
}

void NGramModel::MergeFrom(const NGramModel& other) {
  if (!(other.n_ == n_)) {
    throw std::invalid_argument("cannot merge models with different n");
  }
  if (&other == this) {
    const NGramModel copy = other;
    MergeFrom(copy);
    return;
  }
  for (const auto& [key, stats] : other.table_) {
    for (const auto& s : stats.successors) Count(key, s.event, s.count);
  }
}

NGramModel Merge(const NGramModel& a, const NGramModel& b) {
  NGramModel out = a;
  out.MergeFrom(b);
  return out;
}

const ContextStats* NGramModel::FindKey(std::u32string_view key) const {
  auto it = table_.find(key);
  return it == table_.end() ? nullptr : &it->second;
}

const ContextStats* NGramModel::Find(Context context) const {
  if (context.size() != n_.context_length()) {
    throw std::invalid_argument("context length must be n - 1");
  }
  return WithKey(context, [&](std::u32string_view key) { return FindKey(key); });
}

EventId NGramModel::MostFrequent() const {
  if (!most_frequent_) throw UntrainedModelError();
  return *most_frequent_;
}

Prediction NGramModel::Predict(Context context) const {
  if (empty()) throw UntrainedModelError();
  if (const ContextStats* stats = Find(context)) {
    return Prediction(stats->Argmax(), stats);
  }
  return Prediction(*most_frequent_, nullptr);
}

AnomalyScore NGramModel::Score(Context context, EventId event) const {
  const ContextStats* stats = Find(context);
  if (!stats) return {};
  const std::uint64_t occurrence = stats->CountOf(event);
  return {occurrence,
          static_cast<double>(occurrence) / static_cast<double>(stats->total)};
}

std::vector<ScoredEvent> NGramModel::ScoreSequence(
    std::span<const EventId> events) const {
  if (empty()) throw UntrainedModelError();
  const auto padded = Pad(events, n_);
  const std::size_t ctx = n_.context_length();
  std::vector<ScoredEvent> out;
  out.reserve(events.size() + 1);
  for (std::size_t i = 0; i + ctx < padded.size(); ++i) {
    const Context context(padded.data() + i, ctx);
    const EventId event = padded[i + ctx];
    const ContextStats* stats = Find(context);
    AnomalyScore score;
    if (stats) {
      score.occurrence = stats->CountOf(event);
      score.probability =
          static_cast<double>(score.occurrence) / static_cast<double>(stats->total);
    }
    out.push_back(ScoredEvent{
        i + 1, event, score,
        Prediction(stats ? stats->Argmax() : *most_frequent_, stats)});
  }
  return out;
}

bool NGramModel::IsNormalTopK(Context context, EventId event,
                              std::size_t k) const {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  const ContextStats* stats = Find(context);
  if (!stats) return false;
  const auto rank = stats->RankOf(event);
  return rank && *rank <= k;
}

std::vector<EventId> NGramModel::vocab() const {
  std::vector<EventId> out;
  out.reserve(global_counts_.size());
  for (const auto& [e, c] : global_counts_) out.push_back(e);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<const NGramModel::Table::value_type*> NGramModel::SortedContexts()
    const {
  std::vector<const Table::value_type*> entries;
  entries.reserve(table_.size());
  for (const auto& entry : table_) entries.push_back(&entry);
  std::sort(entries.begin(), entries.end(),
            [](const auto* a, const auto* b) { return a->first < b->first; });
  return entries;
}

void NGramModel::ForEachContext(
    const std::function<void(Context, const ContextStats&)>& fn) const {
  std::vector<EventId> ctx(n_.context_length());
  for (const auto* entry : SortedContexts()) {
    for (std::size_t k = 0; k < ctx.size(); ++k) {
      ctx[k] = EventId(static_cast<EventId::Rep>(entry->first[k]));
    }
    fn(ctx, entry->second);
  }
}

bool operator==(const NGramModel& a, const NGramModel& b) {
  return a.n_ == b.n_ && a.trained_events_ == b.trained_events_ &&
         a.unique_ngrams_ == b.unique_ngrams_ &&
         a.global_counts_ == b.global_counts_ && a.table_ == b.table_;
}

void NGramModel::Save(std::ostream& out) const {
  Writer w(out);
  w.Raw(kMagic.data(), kMagic.size());
  w.Put<std::uint32_t>(kFormatVersion);
  w.Put<std::uint32_t>(static_cast<std::uint32_t>(n_.value()));
  const auto events = vocab();
  w.Put<std::uint64_t>(events.size());
  for (const auto e : events) {
    w.Put<std::uint32_t>(e.value());
    w.Put<std::uint64_t>(global_counts_.at(e));
  }
  w.Put<std::uint64_t>(trained_events_);
  w.Put<std::uint64_t>(table_.size());
  for (const auto* entry : SortedContexts()) {
    for (const char32_t c : entry->first) w.Put<std::uint32_t>(static_cast<std::uint32_t>(c));
    const auto& successors = entry->second.successors;
    w.Put<std::uint32_t>(static_cast<std::uint32_t>(successors.size()));
    for (const auto& s : successors) {
      w.Put<std::uint32_t>(s.event.value());
      w.Put<std::uint64_t>(s.count);
    }
  }
  if (!out) throw IoError("model write failed");
}

void NGramModel::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  Save(out);
}

NGramModel NGramModel::Load(std::istream& in) {
  Reader r(in);
  std::array<char, 4> magic;
  r.Raw(magic.data(), magic.size());
  if (magic != kMagic) throw FormatError("model: bad magic");
  const auto version = r.Get<std::uint32_t>();
  if (version != kFormatVersion) {
    throw FormatError("model: unsupported version " + std::to_string(version));
  }
  const auto n = r.Get<std::uint32_t>();
  if (n < 2 || n > (1u << 16)) throw FormatError("model: bad window size");
  NGramModel model{WindowSize(static_cast<int>(n))};

  std::unordered_map<EventId, std::uint64_t> stored_globals;
  const auto vocab_size = r.Get<std::uint64_t>();
  std::optional<EventId> prev;
  for (std::uint64_t i = 0; i < vocab_size; ++i) {
    const EventId e(r.Get<std::uint32_t>());
    const auto count = r.Get<std::uint64_t>();
    if ((prev && !(*prev < e)) || count == 0 || e == EventId::Sos()) {
      throw FormatError("model: corrupt vocabulary");
    }
    stored_globals.emplace(e, count);
    prev = e;
  }
  const auto trained = r.Get<std::uint64_t>();
  const auto contexts = r.Get<std::uint64_t>();

  const std::size_t ctx = model.n_.context_length();
  std::u32string key(ctx, U'\0'), prev_key;
  for (std::uint64_t c = 0; c < contexts; ++c) {
    for (std::size_t k = 0; k < ctx; ++k) {
      key[k] = static_cast<char32_t>(r.Get<std::uint32_t>());
    }
    if (c > 0 && !(prev_key < key)) throw FormatError("model: contexts out of order");
    const auto successors = r.Get<std::uint32_t>();
    if (successors == 0) throw FormatError("model: empty context");
    std::optional<EventId> prev_event;
    for (std::uint32_t s = 0; s < successors; ++s) {
      const EventId e(r.Get<std::uint32_t>());
      const auto count = r.Get<std::uint64_t>();
      if ((prev_event && !(*prev_event < e)) || count == 0) {
        throw FormatError("model: corrupt successor list");
      }
      model.Count(key, e, count);
      prev_event = e;
    }
    prev_key = key;
  }
  if (model.trained_events_ != trained || model.global_counts_ != stored_globals) {
    throw FormatError("model: counts are inconsistent");
  }
  if (!r.AtEnd()) throw FormatError("model: trailing data");
  return model;
}

NGramModel NGramModel::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return Load(in);
}

}  // namespace ngramlog
