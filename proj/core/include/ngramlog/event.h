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

#ifndef NGRAMLOG_EVENT_H_
#define NGRAMLOG_EVENT_H_

#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace ngramlog {

// Identifier of a mined log template. Template ids are dense, starting at 0
// in discovery order. The top of the 32-bit range is reserved for sentinels,
// so sentinels sort after every template id.
class EventId {
 public:
  using Rep = std::uint32_t;

  constexpr EventId() = default;
  constexpr explicit EventId(Rep value) : value_(value) {}

  static constexpr EventId Sos() { return EventId(kSos); }
  static constexpr EventId Eos() { return EventId(kEos); }
  // Returned by a frozen miner for lines that match no known template.
  static constexpr EventId Overflow() { return EventId(kOverflow); }

  constexpr Rep value() const { return value_; }
  // SoS or EoS; these only ever appear in padded sequences.
  constexpr bool is_sentinel() const { return value_ == kSos || value_ == kEos; }
  constexpr bool is_template() const { return value_ < kFirstReserved; }

  constexpr auto operator<=>(const EventId&) const = default;

  static constexpr Rep kSos = std::numeric_limits<Rep>::max();
  static constexpr Rep kEos = kSos - 1;
  static constexpr Rep kOverflow = kSos - 2;
  static constexpr Rep kFirstReserved = kOverflow;

 private:
  Rep value_ = 0;
};

// "SoS", "EoS", "OVF" or the decimal template id.
std::string ToString(EventId id);
std::ostream& operator<<(std::ostream& os, EventId id);

enum class Label { kNormal, kAnomaly, kUnlabeled };

std::string_view ToString(Label label);
// Case-insensitive; accepts "normal", "anomaly" and "unlabeled".
std::optional<Label> ParseLabel(std::string_view text);

// One parsed test run / session: template ids in original log order.
struct EventSequence {
  std::string session_id;
  Label label = Label::kUnlabeled;
  std::vector<EventId> events;

  friend bool operator==(const EventSequence&, const EventSequence&) = default;
};

}  // namespace ngramlog

template <>
struct std::hash<ngramlog::EventId> {
  std::size_t operator()(ngramlog::EventId id) const noexcept {
    return std::hash<ngramlog::EventId::Rep>{}(id.value());
  }
};

#endif  // NGRAMLOG_EVENT_H_
