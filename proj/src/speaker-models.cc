// src/speaker-models.cc

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

#include "voxid/speaker-models.h"

#include <algorithm>
#include <cmath>

#include "voxid/voxid-error.h"

namespace voxid {

BaumWelchStats &BaumWelchStats::operator+=(const BaumWelchStats &other) {
  if (NumComponents() != other.NumComponents() || Dim() != other.Dim())
    Fail(ErrorKind::kDimensionMismatch, "adding statistics of different shapes");
  zeroth += other.zeroth;
  first += other.first;
  return *this;
}

BaumWelchStats BaumWelchStats::Zero(std::size_t num_components, std::size_t dim) {
  return {Eigen::VectorXd::Zero(static_cast<Eigen::Index>(num_components)),
          RowMatrix::Zero(static_cast<Eigen::Index>(num_components),
                          static_cast<Eigen::Index>(dim))};
}

Ubm TrainUbm(std::vector<Utterance> pooled, const GmmTrainingConfig &config,
             EmTrace *trace) {
  if (pooled.empty())
    Fail(ErrorKind::kEmptyFeatureMatrix, "no utterances to train the UBM on");
  std::sort(pooled.begin(), pooled.end(),
            [](const Utterance &a, const Utterance &b) { return a.id < b.id; });
  for (std::size_t i = 1; i < pooled.size(); ++i)
    if (pooled[i].id == pooled[i - 1].id)
      Fail(ErrorKind::kInvalidConfig, "duplicate utterance id '" + pooled[i].id + "'");

  const std::size_t dim = pooled.front().features.Dim();
  Eigen::Index total = 0;
  for (const auto &utt : pooled) {
    if (utt.features.Dim() != dim && !utt.features.Empty())
      Fail(ErrorKind::kDimensionMismatch,
           "utterance '" + utt.id + "' has a different feature dimension");
    total += static_cast<Eigen::Index>(utt.features.NumFrames());
  }
  if (total == 0) Fail(ErrorKind::kEmptyFeatureMatrix, "pooled data has no frames");
  RowMatrix all(total, static_cast<Eigen::Index>(dim));
  Eigen::Index row = 0;
  for (const auto &utt : pooled) {
    const auto n = static_cast<Eigen::Index>(utt.features.NumFrames());
    if (n == 0) continue;
    all.middleRows(row, n) = utt.features.frames();
    row += n;
  }
  return Ubm{EmFit(FeatureMatrix(std::move(all)), config, trace)};
}

BaumWelchStats AccumulateStats(const FeatureMatrix &features, const Ubm &ubm) {
  CheckFeatures(features, ubm.Dim());
  const std::size_t num_comp = ubm.NumComponents();
  BaumWelchStats stats = BaumWelchStats::Zero(num_comp, ubm.Dim());
  std::vector<double> terms(num_comp);
  for (std::size_t t = 0; t < features.NumFrames(); ++t) {
    const auto x = features.Frame(t);
    ubm.gmm.WeightedComponentLogDensities(x, terms);
    const double norm = LogSumExp(terms);
    for (std::size_t c = 0; c < num_comp; ++c) {
      const double gamma = std::exp(terms[c] - norm);
      if (gamma == 0.0) continue;
      stats.zeroth[c] += gamma;
      double *row = stats.first.data() + c * x.size();
      for (std::size_t d = 0; d < x.size(); ++d) row[d] += gamma * x[d];
    }
  }
  return stats;
}

SpeakerModel MapAdapt(const BaumWelchStats &stats, const Ubm &ubm,
                      double relevance, std::string speaker_id) {
  if (!(relevance >= 0.0) || !std::isfinite(relevance))
    Fail(ErrorKind::kNegativeRelevance,
         "relevance factor must be a non-negative finite number");
  if (stats.NumComponents() != ubm.NumComponents() || stats.Dim() != ubm.Dim())
    Fail(ErrorKind::kDimensionMismatch, "statistics do not match the UBM");

  const RowMatrix &prior = ubm.gmm.means();
  RowMatrix means = prior;
  for (Eigen::Index c = 0; c < means.rows(); ++c) {
    const double occ = stats.zeroth[c];
    if (occ <= 0.0) continue;
    const double alpha = occ / (occ + relevance);
    for (Eigen::Index d = 0; d < means.cols(); ++d) {
      const double ml = stats.first(c, d) / occ;
      const double adapted = alpha * ml + (1.0 - alpha) * prior(c, d);
      // Rounding must not push the result off the [prior, ml] segment.
      means(c, d) = std::clamp(adapted, std::min(ml, prior(c, d)),
                               std::max(ml, prior(c, d)));
    }
  }
  return SpeakerModel{std::move(speaker_id), ubm.gmm.WithMeans(std::move(means))};
}

Supervector BuildSupervector(const DiagonalGmm &gmm) {
  const RowMatrix &means = gmm.means();
  return Supervector{Eigen::Map<const Eigen::VectorXd>(means.data(), means.size())};
}

Eigen::VectorXd VarianceSupervector(const Ubm &ubm) {
  const RowMatrix &vars = ubm.gmm.variances();
  return Eigen::Map<const Eigen::VectorXd>(vars.data(), vars.size());
}

}  // namespace voxid
