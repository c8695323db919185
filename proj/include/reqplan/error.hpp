// Copyright 2026 The reqplan Authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace reqplan {

enum class ErrorCode {
  kMissingEvaluations,
  kNoRatings,
  kIndexOutOfRange,
  kEmptyMatrix,
  kTooLarge,
  kIncompletePlan,
  kIncompletePreferences,
  kInconsistentBackground,
  kUnknownRequirement,
  kUnknownDimension,
  kParseError,
  kValidationError,
  kInvalidArgument,
};

inline std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingEvaluations: return "MissingEvaluations";
    case ErrorCode::kNoRatings: return "NoRatings";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kEmptyMatrix: return "EmptyMatrix";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kIncompletePlan: return "IncompletePlan";
    case ErrorCode::kIncompletePreferences: return "IncompletePreferences";
    case ErrorCode::kInconsistentBackground: return "InconsistentBackground";
    case ErrorCode::kUnknownRequirement: return "UnknownRequirement";
    case ErrorCode::kUnknownDimension: return "UnknownDimension";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kValidationError: return "ValidationError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

// All engine failures are reported through this type; the code identifies
// the failure class so callers (CLI, HTTP service) can map it to an exit
// code or a status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  // The message without the error class prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace reqplan
