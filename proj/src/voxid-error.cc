// src/voxid-error.cc

// Copyright 2026  The voxid Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "voxid/voxid-error.h"

namespace voxid {

std::string_view ErrorName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUnsupportedSampleRate: return "UnsupportedSampleRate";
    case ErrorKind::kUnsupportedEncoding: return "UnsupportedEncoding";
    case ErrorKind::kMalformedContainer: return "MalformedContainer";
    case ErrorKind::kEmptyAudio: return "EmptyAudio";
    case ErrorKind::kSignalTooShort: return "SignalTooShort";
    case ErrorKind::kFrameTooShort: return "FrameTooShort";
    case ErrorKind::kInvalidDftSize: return "InvalidDftSize";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kInvalidConfig: return "InvalidConfig";
    case ErrorKind::kEmptyFeatureMatrix: return "EmptyFeatureMatrix";
    case ErrorKind::kTooFewFrames: return "TooFewFrames";
    case ErrorKind::kDegenerateComponent: return "DegenerateComponent";
    case ErrorKind::kNegativeRelevance: return "NegativeRelevance";
    case ErrorKind::kRankTooLarge: return "RankTooLarge";
    case ErrorKind::kNumericalFailure: return "NumericalFailure";
    case ErrorKind::kDegenerateCohort: return "DegenerateCohort";
    case ErrorKind::kZeroVector: return "ZeroVector";
    case ErrorKind::kNotADistribution: return "NotADistribution";
    case ErrorKind::kEmptyRegistry: return "EmptyRegistry";
    case ErrorKind::kModeMismatch: return "ModeMismatch";
    case ErrorKind::kEmptyScoreSet: return "EmptyScoreSet";
    case ErrorKind::kInvalidExperimentConfig: return "InvalidExperimentConfig";
    case ErrorKind::kDuplicateSpeakerId: return "DuplicateSpeakerId";
    case ErrorKind::kIoFailure: return "IoFailure";
    case ErrorKind::kWrongKind: return "WrongKind";
    case ErrorKind::kUnsupportedVersion: return "UnsupportedVersion";
    case ErrorKind::kCorruptArtifact: return "CorruptArtifact";
    case ErrorKind::kUsage: return "UsageError";
  }
  return "UnknownError";
}

ErrorCategory CategoryOf(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUnsupportedSampleRate:
    case ErrorKind::kUnsupportedEncoding:
    case ErrorKind::kMalformedContainer:
    case ErrorKind::kEmptyAudio:
    case ErrorKind::kSignalTooShort:
    case ErrorKind::kIoFailure:
    case ErrorKind::kWrongKind:
    case ErrorKind::kUnsupportedVersion:
    case ErrorKind::kCorruptArtifact:
      return ErrorCategory::kInputData;
    case ErrorKind::kInvalidConfig:
    case ErrorKind::kInvalidExperimentConfig:
    case ErrorKind::kUsage:
      return ErrorCategory::kUsage;
    default:
      return ErrorCategory::kDomain;
  }
}

}  // namespace voxid
