// src/gmm-core.cc

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

#include "voxid/gmm-core.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "voxid/voxid-error.h"

namespace voxid {

namespace {

const double kLog2Pi = std::log(2.0 * std::numbers::pi);

// Occupation below which a component is considered dead during EM.
constexpr double kMinOccupancy = 1e-8;

double LogNormalizer(std::span<const double> variance) {
  double sum = 0.0;
  for (double v : variance) sum += kLog2Pi + std::log(v);
  return sum;
}

double Mahalanobis(std::span<const double> x, std::span<const double> mean,
                   std::span<const double> variance) {
  double sum = 0.0;
  for (std::size_t d = 0; d < x.size(); ++d) {
    const double diff = x[d] - mean[d];
    sum += diff * diff / variance[d];
  }
  return sum;
}

void CheckDim(std::size_t got, std::size_t want, const char *what) {
  if (got != want)
    Fail(ErrorKind::kDimensionMismatch,
         std::string(what) + " has dimension " + std::to_string(got) +
             ", expected " + std::to_string(want));
}

double SquaredDistance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) sum += (a[d] - b[d]) * (a[d] - b[d]);
  return sum;
}

// k-means++ seeding followed by Lloyd iterations; returns the initial model.
DiagonalGmm KMeansInit(const FeatureMatrix &features,
                       const GmmTrainingConfig &config, std::mt19937_64 *rng) {
  const std::size_t num_frames = features.NumFrames();
  const std::size_t dim = features.Dim();
  const std::size_t num_comp = config.num_components;
  const RowMatrix &x = features.frames();

  RowMatrix centers(num_comp, dim);
  std::vector<double> nearest(num_frames, std::numeric_limits<double>::infinity());
  std::uniform_int_distribution<std::size_t> pick(0, num_frames - 1);
  std::size_t first = pick(*rng);
  centers.row(0) = x.row(first);
  for (std::size_t c = 1; c < num_comp; ++c) {
    double total = 0.0;
    for (std::size_t t = 0; t < num_frames; ++t) {
      nearest[t] = std::min(nearest[t],
                            SquaredDistance(features.Frame(t),
                                            RowSpan(centers, c - 1)));
      total += nearest[t];
    }
    std::size_t chosen = 0;
    if (total > 0.0) {
      double u = std::uniform_real_distribution<double>(0.0, total)(*rng);
      double acc = 0.0;
      chosen = num_frames - 1;
      for (std::size_t t = 0; t < num_frames; ++t) {
        acc += nearest[t];
        if (u < acc && nearest[t] > 0.0) {
          chosen = t;
          break;
        }
      }
    } else {
      chosen = pick(*rng);
    }
    centers.row(c) = x.row(chosen);
  }

  std::vector<std::size_t> assign(num_frames, 0);
  std::vector<double> assign_dist(num_frames, 0.0);
  std::vector<std::size_t> counts(num_comp, 0);
  for (int iter = 0; iter <= config.kmeans_iterations; ++iter) {
    bool changed = false;
    for (std::size_t t = 0; t < num_frames; ++t) {
      std::size_t best = 0;
      double best_dist = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < num_comp; ++c) {
        double d2 = SquaredDistance(features.Frame(t), RowSpan(centers, c));
        if (d2 < best_dist) {
          best_dist = d2;
          best = c;
        }
      }
      if (iter == 0 || assign[t] != best) changed = true;
      assign[t] = best;
      assign_dist[t] = best_dist;
    }
    if (!changed || iter == config.kmeans_iterations) break;
    RowMatrix sums = RowMatrix::Zero(num_comp, dim);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t t = 0; t < num_frames; ++t) {
      sums.row(assign[t]) += x.row(t);
      ++counts[assign[t]];
    }
    std::vector<bool> taken(num_frames, false);
    for (std::size_t c = 0; c < num_comp; ++c) {
      if (counts[c] > 0) {
        centers.row(c) = sums.row(c) / static_cast<double>(counts[c]);
      } else {
        // Empty cluster: move it to the worst-represented frame.
        std::size_t worst = 0;
        double worst_dist = -1.0;
        for (std::size_t t = 0; t < num_frames; ++t) {
          if (!taken[t] && assign_dist[t] > worst_dist) {
            worst_dist = assign_dist[t];
            worst = t;
          }
        }
        taken[worst] = true;
        centers.row(c) = x.row(worst);
      }
    }
  }

  // Moments of the final partition.
  Eigen::RowVectorXd global_mean = x.colwise().mean();
  Eigen::RowVectorXd global_var =
      (x.rowwise() - global_mean).array().square().colwise().mean();
  global_var = global_var.cwiseMax(config.variance_floor);

  std::fill(counts.begin(), counts.end(), 0);
  RowMatrix sums = RowMatrix::Zero(num_comp, dim);
  for (std::size_t t = 0; t < num_frames; ++t) {
    sums.row(assign[t]) += x.row(t);
    ++counts[assign[t]];
  }
  RowMatrix means = centers;
  RowMatrix sq = RowMatrix::Zero(num_comp, dim);
  for (std::size_t c = 0; c < num_comp; ++c)
    if (counts[c] > 0) means.row(c) = sums.row(c) / static_cast<double>(counts[c]);
  for (std::size_t t = 0; t < num_frames; ++t)
    sq.row(assign[t]) += (x.row(t) - means.row(assign[t])).array().square().matrix();

  Eigen::VectorXd weights(num_comp);
  RowMatrix variances(num_comp, dim);
  for (std::size_t c = 0; c < num_comp; ++c) {
    weights[c] = std::max<double>(counts[c], 1.0) / num_frames;
    if (counts[c] >= 2)
      variances.row(c) =
          (sq.row(c) / static_cast<double>(counts[c])).cwiseMax(config.variance_floor);
    else
      variances.row(c) = global_var;
  }
  weights /= weights.sum();
  return DiagonalGmm(std::move(weights), std::move(means), std::move(variances));
}

}  // namespace

double ComponentLogDensity(std::span<const double> x,
                           std::span<const double> mean,
                           std::span<const double> variance) {
  CheckDim(mean.size(), x.size(), "mean");
  CheckDim(variance.size(), x.size(), "variance");
  return -0.5 * (LogNormalizer(variance) + Mahalanobis(x, mean, variance));
}

double LogSumExp(std::span<const double> values) {
  if (values.empty()) return -std::numeric_limits<double>::infinity();
  const double max = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(max)) return max;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - max);
  return max + std::log(sum);
}

DiagonalGmm::DiagonalGmm(Eigen::VectorXd weights, RowMatrix means,
                         RowMatrix variances)
    : weights_(std::move(weights)),
      means_(std::move(means)),
      variances_(std::move(variances)) {
  const auto num_comp = weights_.size();
  if (num_comp == 0 || means_.cols() == 0)
    Fail(ErrorKind::kDimensionMismatch, "GMM needs at least one component and dimension");
  if (means_.rows() != num_comp || variances_.rows() != num_comp ||
      variances_.cols() != means_.cols())
    Fail(ErrorKind::kDimensionMismatch, "GMM weight/mean/variance shapes disagree");
  if (!weights_.allFinite() || !means_.allFinite() || !variances_.allFinite())
    Fail(ErrorKind::kInvalidConfig, "GMM has non-finite parameters");
  if ((weights_.array() <= 0.0).any())
    Fail(ErrorKind::kInvalidConfig, "GMM weights must be positive");
  if (std::abs(weights_.sum() - 1.0) > 1e-12)
    Fail(ErrorKind::kInvalidConfig, "GMM weights sum to " + std::to_string(weights_.sum()));
  if ((variances_.array() <= 0.0).any())
    Fail(ErrorKind::kInvalidConfig, "GMM variances must be positive");

  log_weights_.resize(num_comp);
  log_normalizers_.resize(num_comp);
  for (Eigen::Index i = 0; i < num_comp; ++i) {
    log_weights_[i] = std::log(weights_[i]);
    log_normalizers_[i] = LogNormalizer(Variance(i));
  }
}

void DiagonalGmm::WeightedComponentLogDensities(std::span<const double> x,
                                                std::span<double> out) const {
  for (std::size_t i = 0; i < NumComponents(); ++i)
    out[i] = log_weights_[i] +
             -0.5 * (log_normalizers_[i] + Mahalanobis(x, Mean(i), Variance(i)));
}

DiagonalGmm DiagonalGmm::WithMeans(RowMatrix means) const {
  if (means.rows() != means_.rows() || means.cols() != means_.cols())
    Fail(ErrorKind::kDimensionMismatch, "replacement means have the wrong shape");
  return DiagonalGmm(weights_, std::move(means), variances_);
}

bool DiagonalGmm::operator==(const DiagonalGmm &other) const {
  return weights_.size() == other.weights_.size() && Dim() == other.Dim() &&
         weights_ == other.weights_ && means_ == other.means_ &&
         variances_ == other.variances_;
}

double MixtureLogLikelihood(std::span<const double> x, const DiagonalGmm &gmm) {
  CheckDim(x.size(), gmm.Dim(), "frame");
  std::vector<double> terms(gmm.NumComponents());
  gmm.WeightedComponentLogDensities(x, terms);
  return LogSumExp(terms);
}

double SequenceLogLikelihood(const FeatureMatrix &features, const DiagonalGmm &gmm) {
  CheckFeatures(features, gmm.Dim());
  std::vector<double> terms(gmm.NumComponents());
  double total = 0.0;
  for (std::size_t t = 0; t < features.NumFrames(); ++t) {
    gmm.WeightedComponentLogDensities(features.Frame(t), terms);
    total += LogSumExp(terms);
  }
  return total;
}

Eigen::VectorXd Responsibilities(std::span<const double> x, const DiagonalGmm &gmm) {
  CheckDim(x.size(), gmm.Dim(), "frame");
  std::vector<double> terms(gmm.NumComponents());
  gmm.WeightedComponentLogDensities(x, terms);
  const double norm = LogSumExp(terms);
  Eigen::VectorXd gamma(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) gamma[i] = std::exp(terms[i] - norm);
  return gamma;
}

void GmmTrainingConfig::Validate() const {
  if (num_components < 1)
    Fail(ErrorKind::kInvalidConfig, "num_components must be at least 1");
  if (max_iterations < 0)
    Fail(ErrorKind::kInvalidConfig, "max_iterations must be non-negative");
  if (!(convergence_tol > 0.0))
    Fail(ErrorKind::kInvalidConfig, "convergence_tol must be positive");
  if (!(variance_floor > 0.0))
    Fail(ErrorKind::kInvalidConfig, "variance_floor must be positive");
  if (kmeans_iterations < 0)
    Fail(ErrorKind::kInvalidConfig, "kmeans_iterations must be non-negative");
}

DiagonalGmm EmFit(const FeatureMatrix &features, const GmmTrainingConfig &config,
                  EmTrace *trace) {
  config.Validate();
  if (features.Empty())
    Fail(ErrorKind::kEmptyFeatureMatrix, "no frames to train on");
  const std::size_t num_frames = features.NumFrames();
  const std::size_t dim = features.Dim();
  const std::size_t num_comp = config.num_components;
  if (num_frames < num_comp)
    Fail(ErrorKind::kTooFewFrames,
         std::to_string(num_frames) + " frames cannot train " +
             std::to_string(num_comp) + " components");

  std::mt19937_64 rng(config.rng_seed);
  DiagonalGmm model = KMeansInit(features, config, &rng);
  EmTrace local;
  EmTrace &tr = trace ? *trace : local;
  tr = EmTrace{};

  const RowMatrix &x = features.frames();
  RowMatrix gamma(num_frames, num_comp);
  std::vector<double> frame_ll(num_frames);
  double prev_ll = 0.0;
  for (int iter = 0;; ++iter) {
    // E-step.
    double total_ll = 0.0;
    for (std::size_t t = 0; t < num_frames; ++t) {
      std::span<double> row(gamma.data() + t * num_comp, num_comp);
      model.WeightedComponentLogDensities(features.Frame(t), row);
      const double ll = LogSumExp(row);
      for (double &g : row) g = std::exp(g - ll);
      frame_ll[t] = ll;
      total_ll += ll;
    }
    tr.log_likelihoods.push_back(total_ll);
    if (iter > 0 && (total_ll - prev_ll) < config.convergence_tol * std::abs(prev_ll)) {
      tr.converged = true;
      break;
    }
    if (iter == config.max_iterations) break;
    prev_ll = total_ll;

    // M-step, two-pass so the variance is a sum of squares.
    Eigen::VectorXd occ = gamma.colwise().sum().transpose();
    RowMatrix means = gamma.transpose() * x;
    RowMatrix variances = RowMatrix::Zero(num_comp, dim);
    for (std::size_t c = 0; c < num_comp; ++c)
      if (occ[c] >= kMinOccupancy) means.row(c) /= occ[c];
    for (std::size_t t = 0; t < num_frames; ++t)
      for (std::size_t c = 0; c < num_comp; ++c)
        if (occ[c] >= kMinOccupancy)
          variances.row(c) +=
              gamma(t, c) * (x.row(t) - means.row(c)).array().square().matrix();

    std::vector<std::size_t> worst_frames;
    for (std::size_t c = 0; c < num_comp; ++c) {
      if (occ[c] >= kMinOccupancy) {
        variances.row(c) = (variances.row(c) / occ[c]).cwiseMax(config.variance_floor);
        continue;
      }
      // Dead component: re-seed it at the frame the model explains worst.
      std::size_t worst = 0;
      double worst_ll = std::numeric_limits<double>::infinity();
      for (std::size_t t = 0; t < num_frames; ++t) {
        if (frame_ll[t] < worst_ll &&
            std::find(worst_frames.begin(), worst_frames.end(), t) == worst_frames.end()) {
          worst_ll = frame_ll[t];
          worst = t;
        }
      }
      worst_frames.push_back(worst);
      means.row(c) = x.row(worst);
      variances.row(c) = model.variances().colwise().maxCoeff().cwiseMax(config.variance_floor);
      occ[c] = 1.0;
      ++tr.reseeded_components;
    }
    Eigen::VectorXd weights = occ / occ.sum();
    model = DiagonalGmm(std::move(weights), std::move(means), std::move(variances));
    tr.iterations = iter + 1;
  }
  return model;
}

}  // namespace voxid
