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

#include "ngramlog/template_miner.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include <boost/regex.hpp>

#include "ngramlog/errors.h"
#include "ngramlog/utf8.h"

namespace ngramlog {
namespace {

constexpr std::string_view kCatalogMagic = "#ngramlog-catalog";
constexpr std::string_view kCatalogVersion = "v1";

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};

template <typename V>
using StringMap = std::unordered_map<std::string, V, StringHash, std::equal_to<>>;

std::vector<std::string_view> Tokenize(std::string_view s) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t begin = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > begin) tokens.push_back(s.substr(begin, i - begin));
  }
  return tokens;
}

bool HasDigit(std::string_view token) {
  return std::any_of(token.begin(), token.end(), [](unsigned char c) {
    return std::isdigit(c) != 0;
  });
}

std::string Join(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

std::string FormatDouble(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string_view PolicyName(UnknownLinePolicy p) {
  return p == UnknownLinePolicy::kReject ? "reject" : "overflow";
}

struct Node {
  StringMap<std::unique_ptr<Node>> children;
  std::vector<std::uint32_t> clusters;

  Node* Child(std::string_view key) const {
    auto it = children.find(key);
    return it == children.end() ? nullptr : it->second.get();
  }
  Node* AddChild(std::string_view key) {
    auto& slot = children[std::string(key)];
    if (!slot) slot = std::make_unique<Node>();
    return slot.get();
  }
};

struct Match {
  std::uint32_t index;
  double similarity;
};

}  // namespace

std::string Template::text() const { return Join(tokens); }

void MinerConfig::Validate() const {
  if (tree_depth < 3) throw std::invalid_argument("tree_depth must be >= 3");
  if (!(similarity_threshold > 0.0 && similarity_threshold <= 1.0)) {
    throw std::invalid_argument("similarity_threshold must lie in (0, 1]");
  }
  if (max_children < 2) throw std::invalid_argument("max_children must be >= 2");
  for (const auto& m : masks) {
    try {
      boost::regex re(m.pattern, boost::regex::perl);
    } catch (const boost::regex_error& e) {
      throw std::invalid_argument("bad mask pattern '" + m.pattern +
                                  "': " + e.what());
    }
  }
}

MinerConfig MinerConfig::HdfsDefaults() {
  MinerConfig config;
  config.masks = {
      // "081109 203518 143 INFO dfs.DataNode$DataXceiver: " header.
      {R"(^\d{6} \d{6} \d+ \w+ [^:\s]+: )", ""},
      {R"(blk_-?\d+)", std::string(kWildcard)},
      {R"((\d+\.){3}\d+(:\d+)?)", std::string(kWildcard)},
      {R"((?<![A-Za-z0-9])\d+(?![A-Za-z0-9]))", std::string(kWildcard)},
  };
  return config;
}

struct TemplateMiner::Impl {
  MinerConfig config;
  std::vector<boost::regex> masks;
  std::unordered_map<std::size_t, Node> by_length;
  std::vector<Template> templates;
  StringMap<std::uint32_t> by_text;
  std::optional<std::uint32_t> empty_index;

  explicit Impl(MinerConfig c) : config(std::move(c)) {
    config.Validate();
    for (const auto& m : config.masks) {
      masks.emplace_back(m.pattern, boost::regex::perl);
    }
  }

  std::size_t RoutingLayers(std::size_t token_count) const {
    return std::min<std::size_t>(static_cast<std::size_t>(config.tree_depth - 3),
                                 token_count - 1);
  }

  std::string Mask(std::string_view text) const {
    std::string s(text);
    for (std::size_t i = 0; i < masks.size(); ++i) {
      if (!boost::regex_search(s, masks[i])) continue;
      s = boost::regex_replace(s, masks[i], config.masks[i].replacement);
    }
    return s;
  }

  const Node* Search(const std::vector<std::string_view>& tokens) const {
    auto it = by_length.find(tokens.size());
    if (it == by_length.end()) return nullptr;
    const Node* node = &it->second;
    const std::size_t layers = RoutingLayers(tokens.size());
    for (std::size_t i = 0; i < layers; ++i) {
      const Node* next = node->Child(tokens[i]);
      if (!next) next = node->Child(kWildcard);
      if (!next) return nullptr;
      node = next;
    }
    return node;
  }

  std::pair<double, std::size_t> Score(const Template& t,
                                       const std::vector<std::string_view>& tokens) const {
    if (t.tokens.size() != tokens.size()) return {0.0, 0};
    if (tokens.empty()) return {1.0, 0};
    std::size_t equal = 0, params = 0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (t.tokens[i] == kWildcard) {
        ++params;
      } else if (t.tokens[i] == tokens[i]) {
        ++equal;
      }
    }
    return {static_cast<double>(equal + params) / static_cast<double>(tokens.size()),
            params};
  }

  std::optional<Match> FastMatch(const Node& leaf,
                                 const std::vector<std::string_view>& tokens) const {
    std::optional<Match> best;
    double best_sim = -1.0;
    std::size_t best_params = 0;
    for (const auto index : leaf.clusters) {
      const auto [sim, params] = Score(templates[index], tokens);
      if (sim > best_sim || (sim == best_sim && params > best_params)) {
        best = Match{index, sim};
        best_sim = sim;
        best_params = params;
      }
    }
    if (best && best->similarity >= config.similarity_threshold) return best;
    return std::nullopt;
  }

  void AddToTree(std::uint32_t index) {
    const auto& tokens = templates[index].tokens;
    Node* node = &by_length[tokens.size()];
    const std::size_t layers = RoutingLayers(tokens.size());
    const auto max_children = static_cast<std::size_t>(config.max_children);
    for (std::size_t i = 0; i < layers; ++i) {
      const std::string_view token = tokens[i];
      if (Node* next = node->Child(token)) {
        node = next;
        continue;
      }
      const std::size_t n = node->children.size();
      if (HasDigit(token)) {
        node = node->AddChild(kWildcard);
      } else if (node->Child(kWildcard)) {
        node = n < max_children ? node->AddChild(token) : node->Child(kWildcard);
      } else if (n + 1 < max_children) {
        node = node->AddChild(token);
      } else {
        node = node->AddChild(kWildcard);
      }
    }
    node->clusters.push_back(index);
  }

  std::uint32_t Create(std::vector<std::string> tokens) {
    const auto index = static_cast<std::uint32_t>(templates.size());
    if (index >= EventId::kFirstReserved) {
      throw std::length_error("template id space exhausted");
    }
    Template t{EventId(index), std::move(tokens), 1};
    by_text.emplace(t.text(), index);
    templates.push_back(std::move(t));
    return index;
  }

  EventId ParseMasked(std::string_view masked) {
    const auto tokens = Tokenize(masked);
    if (tokens.empty()) {
      if (!empty_index) empty_index = Create({});
      else ++templates[*empty_index].match_count;
      return EventId(*empty_index);
    }

    std::optional<Match> match;
    if (const Node* leaf = Search(tokens)) match = FastMatch(*leaf, tokens);

    if (!match) {
      std::vector<std::string> owned(tokens.begin(), tokens.end());
      if (auto same = by_text.find(Join(owned)); same != by_text.end()) {
        ++templates[same->second].match_count;
        return EventId(same->second);
      }
      const auto index = Create(std::move(owned));
      AddToTree(index);
      return EventId(index);
    }

    Template& t = templates[match->index];
    std::vector<std::string> merged = t.tokens;
    for (std::size_t i = 0; i < merged.size(); ++i) {
      if (merged[i] != tokens[i]) merged[i] = std::string(kWildcard);
    }
    if (merged != t.tokens) {
      std::string merged_text = Join(merged);
      auto existing = by_text.find(merged_text);
      if (existing != by_text.end()) {
        // The generalized form already exists as another template; that
        // template covers the line, so attribute it there.
        ++templates[existing->second].match_count;
        return EventId(existing->second);
      }
      by_text.erase(t.text());
      by_text.emplace(std::move(merged_text), match->index);
      t.tokens = std::move(merged);
    }
    ++t.match_count;
    return t.id;
  }

  std::optional<EventId> Lookup(std::string_view text) const {
    const std::string masked = Mask(text);
    const auto tokens = Tokenize(masked);
    if (tokens.empty()) {
      if (empty_index) return EventId(*empty_index);
    } else if (const Node* leaf = Search(tokens)) {
      if (auto m = FastMatch(*leaf, tokens)) return EventId(m->index);
    }
    if (config.unknown_policy == UnknownLinePolicy::kOverflow) {
      return EventId::Overflow();
    }
    return std::nullopt;
  }
};

TemplateMiner::TemplateMiner(MinerConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {}
TemplateMiner::~TemplateMiner() = default;
TemplateMiner::TemplateMiner(TemplateMiner&&) noexcept = default;
TemplateMiner& TemplateMiner::operator=(TemplateMiner&&) noexcept = default;

EventId TemplateMiner::ParseLine(std::string_view text) {
  return impl_->ParseMasked(impl_->Mask(text));
}

EventId TemplateMiner::ParseMasked(std::string_view masked) {
  return impl_->ParseMasked(masked);
}

std::vector<EventId> TemplateMiner::ParseBatch(
    std::span<const std::string_view> lines, unsigned threads) {
  std::vector<std::string> masked(lines.size());
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(
                                                         lines.size() / 256 + 1)));
  if (threads == 1) {
    for (std::size_t i = 0; i < lines.size(); ++i) masked[i] = Mask(lines[i]);
  } else {
    std::vector<std::jthread> workers;
    const std::size_t per = (lines.size() + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t begin = t * per;
      const std::size_t end = std::min(lines.size(), begin + per);
      workers.emplace_back([&, begin, end] {
        for (std::size_t i = begin; i < end; ++i) masked[i] = Mask(lines[i]);
      });
    }
  }
  std::vector<EventId> ids;
  ids.reserve(lines.size());
  for (const auto& m : masked) ids.push_back(impl_->ParseMasked(m));
  return ids;
}

std::optional<EventId> TemplateMiner::Lookup(std::string_view text) const {
  return impl_->Lookup(text);
}

std::string TemplateMiner::Mask(std::string_view text) const {
  return impl_->Mask(text);
}

double TemplateMiner::Similarity(EventId id, std::string_view masked) const {
  const auto tokens = Tokenize(masked);
  return impl_->Score(impl_->templates.at(id.value()), tokens).first;
}

const MinerConfig& TemplateMiner::config() const { return impl_->config; }

const std::vector<Template>& TemplateMiner::templates() const {
  return impl_->templates;
}

void TemplateMiner::Save(std::ostream& out) const {
  const auto& c = impl_->config;
  out << kCatalogMagic << ' ' << kCatalogVersion
      << " tree_depth=" << c.tree_depth
      << " similarity_threshold=" << FormatDouble(c.similarity_threshold)
      << " max_children=" << c.max_children
      << " unknown_policy=" << PolicyName(c.unknown_policy)
      << " masks=" << c.masks.size()
      << " templates=" << impl_->templates.size() << '\n';
  for (const auto& m : c.masks) {
    for (const auto& field : {m.pattern, m.replacement}) {
      if (field.find_first_of("\t\n\r") != std::string::npos) {
        throw FormatError("mask contains a tab or newline: " + m.pattern);
      }
    }
    out << "#mask\t" << m.pattern << '\t' << m.replacement << '\n';
  }
  for (const auto& t : impl_->templates) {
    out << t.id.value() << '\t' << t.match_count << '\t' << t.text() << '\n';
  }
  if (!out) throw IoError("catalog write failed");
}

void TemplateMiner::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  Save(out);
}

namespace {

template <typename T>
T ParseNumber(std::string_view text, std::string_view what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw FormatError("catalog: bad " + std::string(what) + " '" +
                      std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> SplitOn(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

TemplateMiner TemplateMiner::Load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("catalog: empty file");
  const auto header = SplitOn(line, ' ');
  if (header.size() < 2 || header[0] != kCatalogMagic) {
    throw FormatError("catalog: bad magic");
  }
  if (header[1] != kCatalogVersion) {
    throw FormatError("catalog: unsupported version " + std::string(header[1]));
  }

  MinerConfig config;
  std::size_t mask_count = 0, template_count = 0;
  for (std::size_t i = 2; i < header.size(); ++i) {
    const auto eq = header[i].find('=');
    if (eq == std::string_view::npos) throw FormatError("catalog: bad header field");
    const auto key = header[i].substr(0, eq);
    const auto value = header[i].substr(eq + 1);
    if (key == "tree_depth") {
      config.tree_depth = ParseNumber<int>(value, key);
    } else if (key == "similarity_threshold") {
      config.similarity_threshold = ParseNumber<double>(value, key);
    } else if (key == "max_children") {
      config.max_children = ParseNumber<int>(value, key);
    } else if (key == "unknown_policy") {
      if (value == "overflow") config.unknown_policy = UnknownLinePolicy::kOverflow;
      else if (value == "reject") config.unknown_policy = UnknownLinePolicy::kReject;
      else throw FormatError("catalog: bad unknown_policy");
    } else if (key == "masks") {
      mask_count = ParseNumber<std::size_t>(value, key);
    } else if (key == "templates") {
      template_count = ParseNumber<std::size_t>(value, key);
    } else {
      throw FormatError("catalog: unknown header field " + std::string(key));
    }
  }

  for (std::size_t i = 0; i < mask_count; ++i) {
    if (!std::getline(in, line)) throw FormatError("catalog: truncated masks");
    const auto parts = SplitOn(line, '\t');
    if (parts.size() != 3 || parts[0] != "#mask") {
      throw FormatError("catalog: bad mask line");
    }
    config.masks.push_back({std::string(parts[1]), std::string(parts[2])});
  }

  TemplateMiner miner = [&] {
    try {
      return TemplateMiner(std::move(config));
    } catch (const std::invalid_argument& e) {
      throw FormatError(std::string("catalog: ") + e.what());
    }
  }();
  Impl& impl = *miner.impl_;
  for (std::size_t i = 0; i < template_count; ++i) {
    if (!std::getline(in, line)) throw FormatError("catalog: truncated templates");
    const auto parts = SplitOn(line, '\t');
    if (parts.size() != 3) throw FormatError("catalog: bad template line");
    const auto id = ParseNumber<std::uint32_t>(parts[0], "template id");
    if (id != i) throw FormatError("catalog: template ids must be dense");
    const auto count = ParseNumber<std::uint64_t>(parts[1], "match count");
    std::vector<std::string> tokens;
    for (auto tok : Tokenize(parts[2])) tokens.emplace_back(tok);
    if (tokens.empty()) {
      if (impl.empty_index) throw FormatError("catalog: duplicate empty template");
      impl.empty_index = id;
    }
    Template t{EventId(id), std::move(tokens), count};
    if (!impl.by_text.emplace(t.text(), id).second) {
      throw FormatError("catalog: duplicate template " + t.text());
    }
    impl.templates.push_back(std::move(t));
    if (!impl.templates.back().tokens.empty()) impl.AddToTree(id);
  }
  if (std::getline(in, line) && !line.empty()) {
    throw FormatError("catalog: trailing data");
  }
  return miner;
}

TemplateMiner TemplateMiner::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return Load(in);
}

ParsedCorpus ParseCorpus(const LabeledCorpus& corpus, TemplateMiner& miner,
                         unsigned threads) {
  constexpr std::size_t kBatch = 1 << 16;
  ParsedCorpus out;
  out.sequences.reserve(corpus.sequences.size());
  for (const auto& seq : corpus.sequences) {
    out.sequences.push_back(EventSequence{seq.session_id, seq.label, {}});
    out.sequences.back().events.reserve(seq.records.size());
  }

  std::vector<std::string_view> batch;
  std::vector<std::size_t> owner;
  const auto flush = [&] {
    const auto ids = miner.ParseBatch(batch, threads);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      out.sequences[owner[i]].events.push_back(ids[i]);
    }
    batch.clear();
    owner.clear();
  };
  for (std::size_t s = 0; s < corpus.sequences.size(); ++s) {
    for (const auto& record : corpus.sequences[s].records) {
      batch.push_back(record.text);
      owner.push_back(s);
      if (batch.size() == kBatch) flush();
    }
  }
  flush();
  out.catalog = miner.templates();
  return out;
}

ParsedCorpus ParseCorpus(const LabeledCorpus& corpus, const MinerConfig& config,
                         unsigned threads) {
  TemplateMiner miner(config);
  return ParseCorpus(corpus, miner, threads);
}

ParsedCorpus ParseHdfsLog(const std::filesystem::path& log_path,
                          const std::filesystem::path& label_path,
                          TemplateMiner& miner, unsigned threads,
                          IngestStats* stats) {
  if (!std::filesystem::exists(log_path)) {
    throw IoError("cannot open " + log_path.string());
  }
  const auto labels = ReadHdfsLabels(label_path);
  IngestStats local;
  ParsedCorpus out;
  std::unordered_map<std::string, std::size_t> index;

  constexpr std::size_t kBatch = 1 << 16;
  std::vector<std::string> texts;
  std::vector<std::size_t> owner;
  const auto flush = [&] {
    std::vector<std::string_view> views(texts.begin(), texts.end());
    const auto ids = miner.ParseBatch(views, threads);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      out.sequences[owner[i]].events.push_back(ids[i]);
    }
    texts.clear();
    owner.clear();
  };
  ForEachLine(log_path, [&](std::uint64_t, std::string_view line) {
    ++local.lines_read;
    const auto block = FindBlockId(line);
    if (!block) {
      ++local.lines_without_session;
      return;
    }
    auto [it, inserted] = index.try_emplace(std::string(*block), out.sequences.size());
    if (inserted) out.sequences.push_back(EventSequence{it->first, Label::kUnlabeled, {}});
    texts.push_back(SanitizeUtf8(line));
    owner.push_back(it->second);
    if (texts.size() == kBatch) flush();
  });
  flush();

  for (auto& seq : out.sequences) {
    const auto found = labels.find(seq.session_id);
    if (found == labels.end()) {
      ++local.unlabeled_sequences;
    } else {
      seq.label = found->second;
    }
  }
  out.catalog = miner.templates();
  if (stats) *stats = std::move(local);
  return out;
}

}  // namespace ngramlog
