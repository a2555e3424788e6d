// Copyright 2026 The speval Authors
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

#ifndef SPEVAL_ERROR_H_
#define SPEVAL_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace speval {

// Every failure surfaced by the library carries one of these codes so callers
// (and the HTTP layer) can branch without parsing messages.
enum class ErrorCode {
  kInvalidArgument,
  // audio-io
  kFileNotFound,
  kUnsupportedFormat,
  kCorruptHeader,
  kIoError,
  // loudness / metrics
  kTooShort,
  kAllSilent,
  kLengthMismatch,
  kZeroReference,
  kParseError,
  kRangeViolation,
  // rt60
  kZeroSignal,
  kInsufficientDecay,
  kTooFew,
  // mixgen
  kCatalogTooSmall,
  kNoActivityPattern,
  kInsufficientMaterial,
  kSilentComponent,
  // stats
  kEmptyVotes,
  kDegenerateInput,
  kMissingMetric,
  kIncompleteMatrix,
  kDegenerateVariance,
  // campaign
  kMissingOutput,
  kEmptyTable,
  // listening test
  kValidationError,
  kNotFound,
  kNotEnrolled,
  kPanelFull,
  kAlreadyPlayed,
  kOutOfOrder,
  kNotPlayedYet,
  kDuplicateVote,
  kInvalidVote,
  kOutOfRange,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace speval

#endif  // SPEVAL_ERROR_H_
