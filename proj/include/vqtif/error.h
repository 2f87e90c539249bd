// Copyright 2026 The vqtif Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VQTIF_ERROR_H_
#define VQTIF_ERROR_H_

#include <stdexcept>
#include <string>

namespace vqtif {

enum class ErrorCode {
  kIo,
  kParse,
  kUnsupported,
  kTruncated,
  kDimensionMismatch,
  kFrameCountMismatch,
  kFormatMismatch,
  kLengthMismatch,
  kGeometryMismatch,
  kInvalidModel,
  kInvalidArgument,
  kUndefined,
};

inline const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo: return "io";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kUnsupported: return "unsupported";
    case ErrorCode::kTruncated: return "truncated";
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kFrameCountMismatch: return "frame-count-mismatch";
    case ErrorCode::kFormatMismatch: return "format-mismatch";
    case ErrorCode::kLengthMismatch: return "length-mismatch";
    case ErrorCode::kGeometryMismatch: return "geometry-mismatch";
    case ErrorCode::kInvalidModel: return "invalid-model";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kUndefined: return "undefined";
  }
  return "unknown";
}

// All library failures surface as this exception type. The code lets callers
// (and tests) distinguish failure classes without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace vqtif

#endif  // VQTIF_ERROR_H_
