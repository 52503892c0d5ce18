// Copyright 2026 The EcoDigger Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ECODIGGER_CORE_ERROR_HPP_
#define ECODIGGER_CORE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace ecodigger {

// Mirrors ed_status in the public C header (minus ED_OK).
enum class ErrorCode {
  kInvalidArgument = 1,
  kIo = 2,
  kParse = 3,
  kNotFound = 4,
  kUnknownLabelId = 5,
  kUnknownLabelType = 6,
  kConflict = 7,
  kCycle = 8,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ecodigger

#endif  // ECODIGGER_CORE_ERROR_HPP_
