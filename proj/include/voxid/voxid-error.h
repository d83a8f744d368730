// include/voxid/voxid-error.h

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

#ifndef VOXID_VOXID_ERROR_H_
#define VOXID_VOXID_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace voxid {

/// Every failure the toolkit reports has one of these kinds.  The CLI prints
/// ErrorName(kind) on stderr and derives its exit status from ErrorCategory.
enum class ErrorKind {
  // audio
  kUnsupportedSampleRate,
  kUnsupportedEncoding,
  kMalformedContainer,
  kEmptyAudio,
  // front end
  kSignalTooShort,
  kFrameTooShort,
  kInvalidDftSize,
  kDimensionMismatch,
  kInvalidConfig,
  // models
  kEmptyFeatureMatrix,
  kTooFewFrames,
  kDegenerateComponent,
  kNegativeRelevance,
  kRankTooLarge,
  kNumericalFailure,
  // scoring / evaluation
  kDegenerateCohort,
  kZeroVector,
  kNotADistribution,
  kEmptyRegistry,
  kModeMismatch,
  kEmptyScoreSet,
  kInvalidExperimentConfig,
  kDuplicateSpeakerId,
  // persistence
  kIoFailure,
  kWrongKind,
  kUnsupportedVersion,
  kCorruptArtifact,
  // command line
  kUsage,
};

enum class ErrorCategory { kDomain, kInputData, kUsage };

std::string_view ErrorName(ErrorKind kind);
ErrorCategory CategoryOf(ErrorKind kind);

class VoxError : public std::runtime_error {
 public:
  VoxError(ErrorKind kind, const std::string &message)
      : std::runtime_error(std::string(ErrorName(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void Fail(ErrorKind kind, const std::string &message) {
  throw VoxError(kind, message);
}

}  // namespace voxid

#endif  // VOXID_VOXID_ERROR_H_
