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

#ifndef NGRAMLOG_UTF8_H_
#define NGRAMLOG_UTF8_H_

#include <string>
#include <string_view>

namespace ngramlog {

// Returns `bytes` with every invalid UTF-8 sequence replaced by U+FFFD.
// Valid input is returned unchanged.
std::string SanitizeUtf8(std::string_view bytes);

}  // namespace ngramlog

#endif  // NGRAMLOG_UTF8_H_
