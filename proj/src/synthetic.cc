// src/synthetic.cc

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

#include "voxid/synthetic.h"

#include <cmath>
#include <cstdio>
#include <string>

#include "voxid/voxid-error.h"

namespace voxid {

namespace {

DiagonalGmm MakePopulation(const SyntheticWorldConfig &config, std::uint64_t seed) {
  config.Validate();
  std::mt19937_64 rng(DeriveSeed(seed, "population"));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.5, 1.5);
  const int num_comp = config.num_components;
  const int dim = config.feature_dim;
  Eigen::VectorXd weights(num_comp);
  RowMatrix means(num_comp, dim);
  RowMatrix variances(num_comp, dim);
  for (int c = 0; c < num_comp; ++c) {
    weights[c] = uniform(rng);
    for (int d = 0; d < dim; ++d) {
      means(c, d) = config.component_spread * normal(rng);
      variances(c, d) = uniform(rng);
    }
  }
  weights /= weights.sum();
  return DiagonalGmm(std::move(weights), std::move(means), std::move(variances));
}

}  // namespace

std::uint64_t DeriveSeed(std::uint64_t seed, std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : label) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::uint64_t z = seed ^ h;
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

FeatureMatrix SampleFrames(const DiagonalGmm &gmm, std::size_t num_frames,
                           std::mt19937_64 *rng) {
  const std::size_t dim = gmm.Dim();
  std::vector<double> cumulative(gmm.NumComponents());
  double acc = 0.0;
  for (std::size_t c = 0; c < cumulative.size(); ++c) {
    acc += gmm.weights()[c];
    cumulative[c] = acc;
  }
  std::uniform_real_distribution<double> uniform(0.0, acc);
  std::normal_distribution<double> normal(0.0, 1.0);
  RowMatrix frames(static_cast<Eigen::Index>(num_frames), static_cast<Eigen::Index>(dim));
  for (std::size_t t = 0; t < num_frames; ++t) {
    const double u = uniform(*rng);
    std::size_t c = 0;
    while (c + 1 < cumulative.size() && u >= cumulative[c]) ++c;
    const auto mean = gmm.Mean(c);
    const auto var = gmm.Variance(c);
    for (std::size_t d = 0; d < dim; ++d)
      frames(t, d) = mean[d] + std::sqrt(var[d]) * normal(*rng);
  }
  return FeatureMatrix(std::move(frames));
}

void SyntheticWorldConfig::Validate() const {
  auto bad = [](const std::string &what) {
    Fail(ErrorKind::kInvalidConfig, "synthetic world: " + what);
  };
  if (feature_dim < 1) bad("feature_dim must be positive");
  if (num_components < 1) bad("num_components must be positive");
  if (!(frames_per_second > 0.0)) bad("frames_per_second must be positive");
  if (!(component_spread >= 0.0) || !(speaker_spread >= 0.0) || !(session_spread >= 0.0))
    bad("spreads must be non-negative");
  if (speaker_subspace_rank < 0 ||
      speaker_subspace_rank > feature_dim * num_components)
    bad("speaker_subspace_rank must lie in [0, C k]");
  if (!(residual_fraction >= 0.0 && residual_fraction <= 1.0))
    bad("residual_fraction must lie in [0, 1]");
  if (background_speakers < 1) bad("background_speakers must be positive");
  if (!(background_seconds > 0.0)) bad("background_seconds must be positive");
}

SyntheticWorld::SyntheticWorld(const SyntheticWorldConfig &config, std::uint64_t seed)
    : config_(config), seed_(seed), population_(MakePopulation(config, seed)) {
  const int sv_dim = config_.feature_dim * config_.num_components;
  const int rank = config_.speaker_subspace_rank;
  if (rank > 0) {
    std::mt19937_64 rng(DeriveSeed(seed_, "subspace"));
    std::normal_distribution<double> normal(0.0, 1.0);
    subspace_.resize(sv_dim, rank);
    // Entry variance 1/rank gives unit per-coordinate variance for y ~ N(0, I).
    const double scale = 1.0 / std::sqrt(static_cast<double>(rank));
    for (int r = 0; r < sv_dim; ++r)
      for (int j = 0; j < rank; ++j) subspace_(r, j) = scale * normal(rng);
  }
}

DiagonalGmm SyntheticWorld::SpeakerGmm(std::string_view speaker_id) const {
  std::mt19937_64 rng(DeriveSeed(seed_, "speaker:" + std::string(speaker_id)));
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto sv_dim = static_cast<Eigen::Index>(config_.feature_dim) * config_.num_components;
  Eigen::VectorXd offset = Eigen::VectorXd::Zero(sv_dim);
  double in_subspace = 1.0;
  double residual = 1.0;
  if (subspace_.cols() > 0) {
    in_subspace = std::sqrt(1.0 - config_.residual_fraction);
    residual = std::sqrt(config_.residual_fraction);
    Eigen::VectorXd y(subspace_.cols());
    for (Eigen::Index j = 0; j < y.size(); ++j) y[j] = normal(rng);
    offset = in_subspace * (subspace_ * y);
  }
  for (Eigen::Index i = 0; i < sv_dim; ++i) offset[i] += residual * normal(rng);
  offset *= config_.speaker_spread;

  RowMatrix means = population_.means();
  Eigen::Map<Eigen::VectorXd>(means.data(), means.size()) += offset;
  return population_.WithMeans(std::move(means));
}

FeatureMatrix SyntheticWorld::SampleUtterance(std::string_view speaker_id,
                                              std::string_view utterance_label,
                                              double seconds) const {
  const DiagonalGmm speaker = SpeakerGmm(speaker_id);
  std::mt19937_64 rng(DeriveSeed(
      seed_, "utterance:" + std::string(speaker_id) + ":" + std::string(utterance_label)));
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::RowVectorXd session(config_.feature_dim);
  for (Eigen::Index d = 0; d < session.size(); ++d)
    session[d] = config_.session_spread * normal(rng);
  RowMatrix means = speaker.means();
  means.rowwise() += session;
  const auto num_frames = static_cast<std::size_t>(
      std::max(1.0, std::round(seconds * config_.frames_per_second)));
  return SampleFrames(speaker.WithMeans(std::move(means)), num_frames, &rng);
}

std::string SyntheticWorld::BackgroundSpeakerId(int i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "bg%04d", i);
  return buf;
}

}  // namespace voxid
