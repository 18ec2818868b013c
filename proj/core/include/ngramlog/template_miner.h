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

#ifndef NGRAMLOG_TEMPLATE_MINER_H_
#define NGRAMLOG_TEMPLATE_MINER_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ngramlog/event.h"
#include "ngramlog/ingest.h"

namespace ngramlog {

// Wildcard token, both in stored templates and as the mask placeholder.
inline constexpr std::string_view kWildcard = "<*>";

struct MaskRule {
  std::string pattern;  // Perl-syntax regular expression
  std::string replacement;

  friend bool operator==(const MaskRule&, const MaskRule&) = default;
};

// What a frozen (lookup-only) miner returns for a line it cannot match.
enum class UnknownLinePolicy { kOverflow, kReject };

struct MinerConfig {
  int tree_depth = 4;  // root + length layer + (depth - 3) token layers + leaf
  double similarity_threshold = 0.4;
  int max_children = 100;
  std::vector<MaskRule> masks;
  UnknownLinePolicy unknown_policy = UnknownLinePolicy::kOverflow;

  // Throws std::invalid_argument if a field is out of range or a mask
  // pattern does not compile.
  void Validate() const;

  // Header stripping, block ids, IPv4[:port] and bare integers.
  static MinerConfig HdfsDefaults();

  friend bool operator==(const MinerConfig&, const MinerConfig&) = default;
};

struct Template {
  EventId id;
  std::vector<std::string> tokens;  // wildcard positions hold kWildcard
  std::uint64_t match_count = 0;

  bool is_wildcard(std::size_t i) const { return tokens[i] == kWildcard; }
  std::string text() const;  // space-joined tokens

  friend bool operator==(const Template&, const Template&) = default;
};

// Online fixed-depth parse-tree template miner.
//
// Lines are masked, split on whitespace runs and routed by token count and
// then by up to (tree_depth - 3) leading tokens to a leaf holding candidate
// templates. The most similar candidate wins if its similarity reaches the
// threshold; differing positions then become wildcards. Otherwise the line
// starts a new template with the next dense id. Empty lines (after masking)
// share one dedicated template with an empty token list.
//
// ParseLine mutates and must be externally serialized. Lookup is const and
// safe to call concurrently as long as nobody calls ParseLine.
class TemplateMiner {
 public:
  explicit TemplateMiner(MinerConfig config = {});
  ~TemplateMiner();
  TemplateMiner(TemplateMiner&&) noexcept;
  TemplateMiner& operator=(TemplateMiner&&) noexcept;

  EventId ParseLine(std::string_view text);

  // Like ParseLine for text that Mask() already processed.
  EventId ParseMasked(std::string_view masked);

  // Parses a batch, masking lines on up to `threads` threads. Ids are
  // identical to calling ParseLine on each line in order.
  std::vector<EventId> ParseBatch(std::span<const std::string_view> lines,
                                  unsigned threads);

  // Read-only match against the current templates. Unmatched lines yield
  // EventId::Overflow() or std::nullopt depending on unknown_policy.
  std::optional<EventId> Lookup(std::string_view text) const;

  std::string Mask(std::string_view text) const;

  // Similarity of `masked` against template `id`: equal or wildcard
  // positions divided by length; 0 if the lengths differ.
  double Similarity(EventId id, std::string_view masked) const;

  const MinerConfig& config() const;
  const std::vector<Template>& templates() const;
  std::size_t size() const { return templates().size(); }

  // Versioned text catalog; see README for the layout. Throws IoError /
  // FormatError.
  void Save(std::ostream& out) const;
  void Save(const std::filesystem::path& path) const;
  static TemplateMiner Load(std::istream& in);
  static TemplateMiner Load(const std::filesystem::path& path);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct ParsedCorpus {
  std::vector<EventSequence> sequences;
  std::vector<Template> catalog;
};

// Maps every record of every sequence to an EventId, in input order.
ParsedCorpus ParseCorpus(const LabeledCorpus& corpus, TemplateMiner& miner,
                         unsigned threads = 1);
ParsedCorpus ParseCorpus(const LabeledCorpus& corpus, const MinerConfig& config,
                         unsigned threads = 1);

// LoadHdfs followed by parsing, without keeping raw text around. Lines are
// parsed in file order. Sequences, labels and `stats` match LoadHdfs.
ParsedCorpus ParseHdfsLog(const std::filesystem::path& log_path,
                          const std::filesystem::path& label_path,
                          TemplateMiner& miner, unsigned threads = 1,
                          IngestStats* stats = nullptr);

}  // namespace ngramlog

#endif  // NGRAMLOG_TEMPLATE_MINER_H_
