// include/voxid/scoring.h

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

#ifndef VOXID_SCORING_H_
#define VOXID_SCORING_H_

#include <span>
#include <string_view>

#include "voxid/speaker-models.h"
#include "voxid/total-variability.h"

namespace voxid {

/// log P(X | speaker) - log P(X | UBM).
double LlrScore(const FeatureMatrix &features, const SpeakerModel &speaker,
                const Ubm &ubm);

/// Location and spread of a set of raw scores, used for z-style normalisation.
struct CohortStats {
  double mean_mu = 0.0;
  double std_sigma = 1.0;
};

/// (raw - mu) / sigma.  Throws DegenerateCohort unless sigma > 0.
double NormalizeScore(double raw, const CohortStats &cohort);

/// Sample mean and sample standard deviation (divisor n - 1).  Throws
/// DegenerateCohort for fewer than two scores or zero spread.
CohortStats CohortFromScores(std::span<const double> scores);

/// w_a . w_b / (|w_a| |w_b|), clamped to [-1, 1].  Throws ZeroVector,
/// DimensionMismatch.
double CosineScore(const IVector &target, const IVector &test);
double CosineScore(std::span<const double> a, std::span<const double> b);

/// sum_i sqrt(p_i q_i) for two distributions over the same classes.  Throws
/// NotADistribution (negative entry, or sum off 1 by more than 1e-9),
/// DimensionMismatch.
double BhattacharyyaCoefficient(std::span<const double> p, std::span<const double> q);

enum class ScoringMode { kLlr, kCosine };

std::string_view ScoringModeName(ScoringMode mode);
/// "llr" or "cosine"; throws InvalidConfig otherwise.
ScoringMode ParseScoringMode(std::string_view name);

struct DecisionPolicy {
  double threshold = 1.0;
  ScoringMode mode = ScoringMode::kLlr;

  /// Cosine thresholds must lie in [-1, 1].  Throws InvalidConfig.
  void Validate() const;
};

enum class Decision { kReject, kAccept };

/// Accept iff score > threshold; a tie rejects.
Decision Decide(double score, const DecisionPolicy &policy);

}  // namespace voxid

#endif  // VOXID_SCORING_H_
