// Copyright 2026 The vflow Authors.
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

#ifndef VFLOW_ERROR_H_
#define VFLOW_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace vflow {

enum class ErrorCode {
  kInvalidImageSize,
  kInvalidBox,
  kParseError,
  kUnknownClass,
  kInvalidAnnotation,
  kInvalidFractions,
  kInvalidInput,
  kDuplicateNode,
  kUnknownNode,
  kSelfLoop,
  kInvalidLength,
  kClassMapMismatch,
  kSnapshotError,
  kWireError,
  kVersionError,
  kIOError,
};

std::string_view ErrorCodeName(ErrorCode code);

// Single exception type for the library; callers dispatch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidImageSize: return "InvalidImageSize";
    case ErrorCode::kInvalidBox: return "InvalidBox";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kUnknownClass: return "UnknownClass";
    case ErrorCode::kInvalidAnnotation: return "InvalidAnnotation";
    case ErrorCode::kInvalidFractions: return "InvalidFractions";
    case ErrorCode::kInvalidInput: return "InvalidInput";
    case ErrorCode::kDuplicateNode: return "DuplicateNode";
    case ErrorCode::kUnknownNode: return "UnknownNode";
    case ErrorCode::kSelfLoop: return "SelfLoop";
    case ErrorCode::kInvalidLength: return "InvalidLength";
    case ErrorCode::kClassMapMismatch: return "ClassMapMismatch";
    case ErrorCode::kSnapshotError: return "SnapshotError";
    case ErrorCode::kWireError: return "WireError";
    case ErrorCode::kVersionError: return "VersionError";
    case ErrorCode::kIOError: return "IOError";
  }
  return "Unknown";
}

}  // namespace vflow

#endif  // VFLOW_ERROR_H_
