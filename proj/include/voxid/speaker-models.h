// include/voxid/speaker-models.h

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

#ifndef VOXID_SPEAKER_MODELS_H_
#define VOXID_SPEAKER_MODELS_H_

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "voxid/gmm-core.h"

namespace voxid {

/// Universal background model: one GMM trained on pooled speech from many
/// speakers.
struct Ubm {
  DiagonalGmm gmm;

  std::size_t NumComponents() const { return gmm.NumComponents(); }
  std::size_t Dim() const { return gmm.Dim(); }
  bool operator==(const Ubm &other) const = default;
};

/// A speaker GMM obtained by adapting the UBM means.  Weights and variances
/// are the UBM's, unchanged.
struct SpeakerModel {
  std::string speaker_id;
  DiagonalGmm gmm;

  bool operator==(const SpeakerModel &other) const = default;
};

/// Zeroth- and first-order Baum-Welch statistics of one utterance against a
/// UBM: zeroth[c] = sum_t gamma_c(t), first.row(c) = sum_t gamma_c(t) x_t.
struct BaumWelchStats {
  Eigen::VectorXd zeroth;
  RowMatrix first;

  std::size_t NumComponents() const { return static_cast<std::size_t>(zeroth.size()); }
  std::size_t Dim() const { return static_cast<std::size_t>(first.cols()); }

  BaumWelchStats &operator+=(const BaumWelchStats &other);
  bool operator==(const BaumWelchStats &other) const {
    return zeroth == other.zeroth && first == other.first;
  }

  static BaumWelchStats Zero(std::size_t num_components, std::size_t dim);
};

/// Component means concatenated in component order; length C * k.
struct Supervector {
  Eigen::VectorXd values;

  std::size_t size() const { return static_cast<std::size_t>(values.size()); }
};

struct Utterance {
  std::string id;
  FeatureMatrix features;
};

/// Pools all frames (utterances concatenated in ascending id order, so the
/// input order does not matter) and fits them with EmFit.  Utterance ids must
/// be unique.
Ubm TrainUbm(std::vector<Utterance> pooled, const GmmTrainingConfig &config,
             EmTrace *trace = nullptr);

BaumWelchStats AccumulateStats(const FeatureMatrix &features, const Ubm &ubm);

/// Relevance-MAP adaptation of the means:
///   alpha_c = N_c / (N_c + r),
///   mean_c  = alpha_c F_c / N_c + (1 - alpha_c) ubm_mean_c,
/// and the UBM mean where N_c = 0.  Throws NegativeRelevance, DimensionMismatch.
SpeakerModel MapAdapt(const BaumWelchStats &stats, const Ubm &ubm,
                      double relevance, std::string speaker_id = {});

Supervector BuildSupervector(const DiagonalGmm &gmm);
inline Supervector BuildSupervector(const Ubm &ubm) { return BuildSupervector(ubm.gmm); }
inline Supervector BuildSupervector(const SpeakerModel &model) {
  return BuildSupervector(model.gmm);
}

/// UBM variances laid out like BuildSupervector lays out means.
Eigen::VectorXd VarianceSupervector(const Ubm &ubm);

}  // namespace voxid

#endif  // VOXID_SPEAKER_MODELS_H_
