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

#ifndef NGRAMLOG_ERRORS_H_
#define NGRAMLOG_ERRORS_H_

#include <stdexcept>
#include <string>

namespace ngramlog {

// A file could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A file was readable but its content violates the expected format
// (bad magic, unsupported version, malformed row, out-of-range id).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Prediction was requested from a model that has seen no training data.
class UntrainedModelError : public std::logic_error {
 public:
  UntrainedModelError() : std::logic_error("untrained model") {}
};

}  // namespace ngramlog

#endif  // NGRAMLOG_ERRORS_H_
