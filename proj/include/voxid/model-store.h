// include/voxid/model-store.h

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

#ifndef VOXID_MODEL_STORE_H_
#define VOXID_MODEL_STORE_H_

// On-disk artifacts.  Feature matrices use the binary VOXF1 layout:
//
//   "VOXF1" | dim (u32 LE) | count (u32 LE) | count*dim float32 LE, by frame
//
// Everything else is a JSON document
//
//   { "format_version": 1, "kind": "<kind>", "payload": { ... } }
//
// in which every real number is a decimal string that parses back to the
// identical double.  docs/formats.md lists the payloads.  Loading checks the
// kind, the version and the invariants of the in-memory type; writes go to a
// temporary file that is then renamed over the target.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "voxid/evaluation.h"

namespace voxid {

enum class ArtifactKind {
  kFeatures,
  kGmm,
  kUbm,
  kSpeakerModel,
  kTvModel,
  kIvector,
  kRegistry,
  kReport,
};

inline constexpr int kFormatVersion = 1;

std::string_view ArtifactKindName(ArtifactKind kind);
/// Throws CorruptArtifact for an unknown name.
ArtifactKind ParseArtifactKind(std::string_view name);

/// Shortest decimal text that parses back to exactly `value`.
std::string FormatReal(double value);
/// Throws CorruptArtifact unless the whole string is a number.
double ParseReal(std::string_view text);

// Features.  Values are stored as float32, so a round trip is exact only for
// values representable in single precision.
std::vector<std::uint8_t> EncodeFeatures(const FeatureMatrix &features);
FeatureMatrix DecodeFeatures(std::span<const std::uint8_t> bytes);

// JSON artifacts, as text.
std::string GmmToText(const DiagonalGmm &gmm);
std::string UbmToText(const Ubm &ubm);
std::string SpeakerModelToText(const SpeakerModel &model);
std::string TvModelToText(const TotalVariabilityModel &tv);
std::string IvectorToText(const IVector &ivector);
std::string RegistryToText(const SpeakerRegistry &registry);
std::string ReportToText(const EvalReport &report);

DiagonalGmm GmmFromText(std::string_view text);
Ubm UbmFromText(std::string_view text);
SpeakerModel SpeakerModelFromText(std::string_view text);
TotalVariabilityModel TvModelFromText(std::string_view text);
IVector IvectorFromText(std::string_view text);
SpeakerRegistry RegistryFromText(std::string_view text);
EvalReport ReportFromText(std::string_view text);

/// One row per (trial, ranked speaker):
/// trial_id,speaker_id,raw_score,normalized_score,decision
std::string ReportToCsv(const EvalReport &report);

// Files.  Save* throw IoFailure; Load* throw IoFailure, WrongKind,
// UnsupportedVersion or CorruptArtifact.
void SaveFeatures(const FeatureMatrix &features, const std::filesystem::path &path);
void SaveGmm(const DiagonalGmm &gmm, const std::filesystem::path &path);
void SaveUbm(const Ubm &ubm, const std::filesystem::path &path);
void SaveSpeakerModel(const SpeakerModel &model, const std::filesystem::path &path);
void SaveTvModel(const TotalVariabilityModel &tv, const std::filesystem::path &path);
void SaveIvector(const IVector &ivector, const std::filesystem::path &path);
void SaveRegistry(const SpeakerRegistry &registry, const std::filesystem::path &path);
void SaveReport(const EvalReport &report, const std::filesystem::path &path);

FeatureMatrix LoadFeatures(const std::filesystem::path &path);
DiagonalGmm LoadGmm(const std::filesystem::path &path);
Ubm LoadUbm(const std::filesystem::path &path);
SpeakerModel LoadSpeakerModel(const std::filesystem::path &path);
TotalVariabilityModel LoadTvModel(const std::filesystem::path &path);
IVector LoadIvector(const std::filesystem::path &path);
SpeakerRegistry LoadRegistry(const std::filesystem::path &path);
EvalReport LoadReport(const std::filesystem::path &path);

/// Kind of the artifact stored at `path`, from the VOXF1 magic or the JSON
/// envelope.  Throws like the loaders.
ArtifactKind PeekArtifactKind(const std::filesystem::path &path);

std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path &path);
/// Temp file in the target directory, then rename.  Throws IoFailure.
void WriteFileAtomic(const std::filesystem::path &path,
                     std::span<const std::uint8_t> bytes);
void WriteFileAtomic(const std::filesystem::path &path, std::string_view text);

}  // namespace voxid

#endif  // VOXID_MODEL_STORE_H_
