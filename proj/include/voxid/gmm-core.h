// include/voxid/gmm-core.h

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

#ifndef VOXID_GMM_CORE_H_
#define VOXID_GMM_CORE_H_

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "voxid/feature-matrix.h"

namespace voxid {

/// log N(x; mean, diag(variance))
///   = -0.5 * ( sum_d [log(2 pi) + log var_d] + sum_d (x_d - mean_d)^2 / var_d ).
/// DiagonalGmm evaluates its components with the same operation order, so a
/// one-component mixture reproduces this value bit for bit.
double ComponentLogDensity(std::span<const double> x,
                           std::span<const double> mean,
                           std::span<const double> variance);

/// log(sum_i exp(v_i)) without overflow or underflow; -inf for empty input.
double LogSumExp(std::span<const double> values);

/// Mixture of l diagonal-covariance Gaussians over k dimensions.  Immutable;
/// the constructor enforces the invariants (weights positive and summing to
/// one within 1e-12, variances positive, finite values, consistent shapes).
class DiagonalGmm {
 public:
  DiagonalGmm(Eigen::VectorXd weights, RowMatrix means, RowMatrix variances);

  std::size_t NumComponents() const { return static_cast<std::size_t>(weights_.size()); }
  std::size_t Dim() const { return static_cast<std::size_t>(means_.cols()); }

  const Eigen::VectorXd &weights() const { return weights_; }
  const RowMatrix &means() const { return means_; }
  const RowMatrix &variances() const { return variances_; }
  std::span<const double> Mean(std::size_t i) const {
    return RowSpan(means_, static_cast<Eigen::Index>(i));
  }
  std::span<const double> Variance(std::size_t i) const {
    return RowSpan(variances_, static_cast<Eigen::Index>(i));
  }

  /// log w_i + log N(x; mu_i, Sigma_i) for every component.  No dimension
  /// check; callers have done it.
  void WeightedComponentLogDensities(std::span<const double> x,
                                     std::span<double> out) const;

  /// Same model with the means replaced (shape must match).
  DiagonalGmm WithMeans(RowMatrix means) const;

  bool operator==(const DiagonalGmm &other) const;

 private:
  Eigen::VectorXd weights_;
  RowMatrix means_;
  RowMatrix variances_;
  // Cached per component: log w_i and sum_d [log(2 pi) + log var_d].
  std::vector<double> log_weights_;
  std::vector<double> log_normalizers_;
};

/// log sum_i w_i N(x; mu_i, Sigma_i).  Throws DimensionMismatch.
double MixtureLogLikelihood(std::span<const double> x, const DiagonalGmm &gmm);

/// sum_t log P(x_t | gmm).  Throws EmptyFeatureMatrix, DimensionMismatch.
double SequenceLogLikelihood(const FeatureMatrix &features, const DiagonalGmm &gmm);

/// Posterior component occupation probabilities for one frame.
Eigen::VectorXd Responsibilities(std::span<const double> x, const DiagonalGmm &gmm);

struct GmmTrainingConfig {
  int num_components = 64;
  int max_iterations = 100;
  double convergence_tol = 1e-5;
  double variance_floor = 1e-3;
  std::uint64_t rng_seed = 0;
  int kmeans_iterations = 10;

  void Validate() const;  // throws InvalidConfig
};

/// What happened during EmFit.  log_likelihoods[i] is the training-data
/// log-likelihood of the model after i M-steps (index 0 is the k-means
/// initialisation).
struct EmTrace {
  std::vector<double> log_likelihoods;
  int iterations = 0;
  bool converged = false;
  /// Components re-seeded because their occupation fell below 1e-8.
  int reseeded_components = 0;
};

/// Maximum-likelihood training: k-means++ seeding and Lloyd iterations for
/// the initial model, then EM until the relative log-likelihood gain drops
/// below convergence_tol or max_iterations M-steps have run.  Variances are
/// floored after every M-step.  Throws TooFewFrames, EmptyFeatureMatrix.
DiagonalGmm EmFit(const FeatureMatrix &features, const GmmTrainingConfig &config,
                  EmTrace *trace = nullptr);

}  // namespace voxid

#endif  // VOXID_GMM_CORE_H_
