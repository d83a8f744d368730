// include/voxid/synthetic.h

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

#ifndef VOXID_SYNTHETIC_H_
#define VOXID_SYNTHETIC_H_

// Synthetic speaker population for desk-scale experiments.  A "world" GMM
// plays the role of the population's acoustic space; each speaker's true
// GMM shares its weights and variances and shifts its means by
//   offset = S y_speaker + residual,
// S a planted (C k) x rank matrix.  Every utterance adds a small session
// shift to all means.  All randomness is keyed by (seed, label), so a given
// speaker or utterance is the same object whatever else is generated.

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include "voxid/gmm-core.h"

namespace voxid {

/// SplitMix64 finaliser applied to seed xor FNV-1a(label).
std::uint64_t DeriveSeed(std::uint64_t seed, std::string_view label);

/// Draws n frames: component by weight, then a diagonal Gaussian sample.
FeatureMatrix SampleFrames(const DiagonalGmm &gmm, std::size_t num_frames,
                           std::mt19937_64 *rng);

struct SyntheticWorldConfig {
  int feature_dim = 8;
  int num_components = 16;
  double frames_per_second = 100.0;
  /// Std of the world component means around the origin.
  double component_spread = 3.0;
  /// Per-coordinate std of a speaker's mean offsets.
  double speaker_spread = 1.0;
  /// Rank of the planted speaker subspace; 0 gives full-rank offsets.
  int speaker_subspace_rank = 8;
  /// Fraction of the offset variance that lies outside the subspace.
  double residual_fraction = 0.05;
  /// Per-coordinate std of the per-utterance shift.
  double session_spread = 0.1;
  int background_speakers = 60;
  double background_seconds = 10.0;

  void Validate() const;  // throws InvalidConfig
};

class SyntheticWorld {
 public:
  SyntheticWorld(const SyntheticWorldConfig &config, std::uint64_t seed);

  const SyntheticWorldConfig &config() const { return config_; }
  const DiagonalGmm &population() const { return population_; }

  DiagonalGmm SpeakerGmm(std::string_view speaker_id) const;

  /// seconds * frames_per_second frames (at least one) of speaker_id's voice
  /// in the session named by utterance_label.
  FeatureMatrix SampleUtterance(std::string_view speaker_id,
                                std::string_view utterance_label,
                                double seconds) const;

  /// Id of the i-th background (UBM / TV training) speaker.
  static std::string BackgroundSpeakerId(int i);

 private:
  SyntheticWorldConfig config_;
  std::uint64_t seed_;
  DiagonalGmm population_;
  Eigen::MatrixXd subspace_;
};

}  // namespace voxid

#endif  // VOXID_SYNTHETIC_H_
