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

#include "speval/error.h"

namespace speval {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kFileNotFound: return "FileNotFound";
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kCorruptHeader: return "CorruptHeader";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kTooShort: return "TooShort";
    case ErrorCode::kAllSilent: return "AllSilent";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kZeroReference: return "ZeroReference";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kRangeViolation: return "RangeViolation";
    case ErrorCode::kZeroSignal: return "ZeroSignal";
    case ErrorCode::kInsufficientDecay: return "InsufficientDecay";
    case ErrorCode::kTooFew: return "TooFew";
    case ErrorCode::kCatalogTooSmall: return "CatalogTooSmall";
    case ErrorCode::kNoActivityPattern: return "NoActivityPattern";
    case ErrorCode::kInsufficientMaterial: return "InsufficientMaterial";
    case ErrorCode::kSilentComponent: return "SilentComponent";
    case ErrorCode::kEmptyVotes: return "EmptyVotes";
    case ErrorCode::kDegenerateInput: return "DegenerateInput";
    case ErrorCode::kMissingMetric: return "MissingMetric";
    case ErrorCode::kIncompleteMatrix: return "IncompleteMatrix";
    case ErrorCode::kDegenerateVariance: return "DegenerateVariance";
    case ErrorCode::kMissingOutput: return "MissingOutput";
    case ErrorCode::kEmptyTable: return "EmptyTable";
    case ErrorCode::kValidationError: return "ValidationError";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kNotEnrolled: return "NotEnrolled";
    case ErrorCode::kPanelFull: return "PanelFull";
    case ErrorCode::kAlreadyPlayed: return "AlreadyPlayed";
    case ErrorCode::kOutOfOrder: return "OutOfOrder";
    case ErrorCode::kNotPlayedYet: return "NotPlayedYet";
    case ErrorCode::kDuplicateVote: return "DuplicateVote";
    case ErrorCode::kInvalidVote: return "InvalidVote";
    case ErrorCode::kOutOfRange: return "OutOfRange";
  }
  return "Unknown";
}

}  // namespace speval
