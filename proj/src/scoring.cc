// src/scoring.cc

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

#include "voxid/scoring.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "voxid/voxid-error.h"

namespace voxid {

double LlrScore(const FeatureMatrix &features, const SpeakerModel &speaker,
                const Ubm &ubm) {
  if (speaker.gmm.Dim() != ubm.Dim())
    Fail(ErrorKind::kDimensionMismatch, "speaker model and UBM dimensions differ");
  return SequenceLogLikelihood(features, speaker.gmm) -
         SequenceLogLikelihood(features, ubm.gmm);
}

double NormalizeScore(double raw, const CohortStats &cohort) {
  if (!(cohort.std_sigma > 0.0) || !std::isfinite(cohort.std_sigma))
    Fail(ErrorKind::kDegenerateCohort, "cohort standard deviation must be positive");
  return (raw - cohort.mean_mu) / cohort.std_sigma;
}

CohortStats CohortFromScores(std::span<const double> scores) {
  if (scores.size() < 2)
    Fail(ErrorKind::kDegenerateCohort,
         "a cohort needs at least two scores, got " + std::to_string(scores.size()));
  double sum = 0.0;
  for (double s : scores) sum += s;
  const double mean = sum / scores.size();
  double ss = 0.0;
  for (double s : scores) ss += (s - mean) * (s - mean);
  const double sd = std::sqrt(ss / (scores.size() - 1));
  if (!(sd > 0.0) || !std::isfinite(sd))
    Fail(ErrorKind::kDegenerateCohort, "cohort scores have no spread");
  return CohortStats{mean, sd};
}

double CosineScore(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    Fail(ErrorKind::kDimensionMismatch,
         "cosine of vectors of length " + std::to_string(a.size()) + " and " +
             std::to_string(b.size()));
  double dot = 0.0, norm_a = 0.0, norm_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    norm_a += a[i] * a[i];
    norm_b += b[i] * b[i];
  }
  if (norm_a == 0.0 || norm_b == 0.0)
    Fail(ErrorKind::kZeroVector, "cosine score of a zero vector");
  double denom = std::sqrt(norm_a * norm_b);
  if (!std::isfinite(denom) || denom == 0.0) denom = std::sqrt(norm_a) * std::sqrt(norm_b);
  return std::clamp(dot / denom, -1.0, 1.0);
}

double CosineScore(const IVector &target, const IVector &test) {
  return CosineScore(std::span<const double>(target.w.data(), target.size()),
                     std::span<const double>(test.w.data(), test.size()));
}

double BhattacharyyaCoefficient(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size())
    Fail(ErrorKind::kDimensionMismatch, "distributions over different class counts");
  auto check = [](std::span<const double> d) {
    double sum = 0.0;
    for (double v : d) {
      if (!(v >= 0.0) || !std::isfinite(v))
        Fail(ErrorKind::kNotADistribution, "negative or non-finite probability");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      Fail(ErrorKind::kNotADistribution,
           "probabilities sum to " + std::to_string(sum));
  };
  check(p);
  check(q);
  double rho = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) rho += std::sqrt(p[i] * q[i]);
  return std::min(rho, 1.0);
}

std::string_view ScoringModeName(ScoringMode mode) {
  return mode == ScoringMode::kLlr ? "llr" : "cosine";
}

ScoringMode ParseScoringMode(std::string_view name) {
  if (name == "llr") return ScoringMode::kLlr;
  if (name == "cosine") return ScoringMode::kCosine;
  Fail(ErrorKind::kInvalidConfig,
       "scoring mode must be 'llr' or 'cosine', got '" + std::string(name) + "'");
}

void DecisionPolicy::Validate() const {
  if (!std::isfinite(threshold))
    Fail(ErrorKind::kInvalidConfig, "decision threshold must be finite");
  if (mode == ScoringMode::kCosine && (threshold < -1.0 || threshold > 1.0))
    Fail(ErrorKind::kInvalidConfig, "cosine threshold must lie in [-1, 1]");
}

Decision Decide(double score, const DecisionPolicy &policy) {
  return score > policy.threshold ? Decision::kAccept : Decision::kReject;
}

}  // namespace voxid
