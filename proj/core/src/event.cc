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

#include "ngramlog/event.h"

#include <algorithm>
#include <cctype>

namespace ngramlog {

std::string ToString(EventId id) {
  switch (id.value()) {
    case EventId::kSos:
      return "SoS";
    case EventId::kEos:
      return "EoS";
    case EventId::kOverflow:
      return "OVF";
    default:
      return std::to_string(id.value());
  }
}

std::ostream& operator<<(std::ostream& os, EventId id) {
  return os << ToString(id);
}

std::string_view ToString(Label label) {
  switch (label) {
    case Label::kNormal:
      return "Normal";
    case Label::kAnomaly:
      return "Anomaly";
    case Label::kUnlabeled:
      return "Unlabeled";
  }
  return "Unlabeled";
}

std::optional<Label> ParseLabel(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "normal") return Label::kNormal;
  if (lower == "anomaly") return Label::kAnomaly;
  if (lower == "unlabeled") return Label::kUnlabeled;
  return std::nullopt;
}

}  // namespace ngramlog
