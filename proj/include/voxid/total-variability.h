// include/voxid/total-variability.h

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

#ifndef VOXID_TOTAL_VARIABILITY_H_
#define VOXID_TOTAL_VARIABILITY_H_

// Total-variability model: an utterance's mean supervector is
//
//   M = m + T w,     w ~ N(0, I_R),
//
// with m the UBM mean supervector and T a (C k) x R matrix.  Given the
// utterance's Baum-Welch statistics, the posterior of w is Gaussian with
//
//   precision  L = I + sum_c N_c T_c' Sigma_c^-1 T_c
//   mean       w = L^-1 sum_c T_c' Sigma_c^-1 (F_c - N_c m_c)
//
// where T_c is the k x R block of rows belonging to component c and Sigma_c
// the UBM's diagonal covariance.  The posterior mean is the i-vector.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "voxid/speaker-models.h"

namespace voxid {

class TotalVariabilityModel {
 public:
  /// Throws RankTooLarge (rank >= C k or rank < 1), DimensionMismatch, or
  /// InvalidConfig (non-positive sigma, non-finite T).
  TotalVariabilityModel(std::size_t num_components, std::size_t dim,
                        Eigen::VectorXd mean_supervector,
                        Eigen::VectorXd variance_supervector,
                        Eigen::MatrixXd t_matrix);

  std::size_t NumComponents() const { return num_components_; }
  std::size_t Dim() const { return dim_; }
  std::size_t Rank() const { return static_cast<std::size_t>(t_.cols()); }
  std::size_t SupervectorDim() const { return num_components_ * dim_; }

  const Eigen::VectorXd &m() const { return m_; }
  const Eigen::VectorXd &sigma() const { return sigma_; }
  const Eigen::MatrixXd &t_matrix() const { return t_; }

  TotalVariabilityModel WithTMatrix(Eigen::MatrixXd t_matrix) const;

  bool operator==(const TotalVariabilityModel &other) const;

 private:
  std::size_t num_components_;
  std::size_t dim_;
  Eigen::VectorXd m_;
  Eigen::VectorXd sigma_;
  Eigen::MatrixXd t_;
};

struct IVector {
  Eigen::VectorXd w;

  std::size_t size() const { return static_cast<std::size_t>(w.size()); }
  bool operator==(const IVector &other) const {
    return w.size() == other.w.size() && w == other.w;
  }
};

/// m and sigma from the UBM; T drawn from a seeded standard normal scaled by
/// 0.1 * mean(sqrt(sigma)).
TotalVariabilityModel InitTv(const Ubm &ubm, std::size_t rank, std::uint64_t rng_seed);

/// Posterior of w for one utterance.
struct IvectorPosterior {
  Eigen::VectorXd mean;
  Eigen::MatrixXd precision;
  Eigen::LLT<Eigen::MatrixXd> factor;  // of precision

  Eigen::MatrixXd Covariance() const;
};

/// Throws DimensionMismatch or NumericalFailure (precision not SPD).
IvectorPosterior ComputeIvectorPosterior(const BaumWelchStats &stats,
                                         const TotalVariabilityModel &tv);

IVector ExtractIvector(const BaumWelchStats &stats, const TotalVariabilityModel &tv);

/// Per-iteration summary of TrainTv.
struct TvTrace {
  /// Mean over utterances of the squared posterior-mean norm, per iteration.
  std::vector<double> mean_ivector_sq_norm;
};

/// EM for T with m and sigma fixed.  E-step per utterance u: posterior mean
/// w_u and covariance L_u^-1; accumulate A_c = sum_u N_c(u) (L_u^-1 + w_u w_u')
/// and B = sum_u Ftilde(u) w_u'.  M-step: T_c A_c = B_c per component.
/// Components with no occupation anywhere keep their rows.
TotalVariabilityModel TrainTv(const std::vector<BaumWelchStats> &stats_set,
                              const TotalVariabilityModel &tv, int iterations,
                              TvTrace *trace = nullptr);

}  // namespace voxid

#endif  // VOXID_TOTAL_VARIABILITY_H_
