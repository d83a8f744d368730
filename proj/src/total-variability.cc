// src/total-variability.cc

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

#include "voxid/total-variability.h"

#include <cmath>
#include <random>
#include <string>

#include "voxid/voxid-error.h"

namespace voxid {

namespace {

// T_c' Sigma_c^-1 T_c for every component; symmetric by construction.
std::vector<Eigen::MatrixXd> ComponentPrecisions(const TotalVariabilityModel &tv) {
  const auto k = static_cast<Eigen::Index>(tv.Dim());
  std::vector<Eigen::MatrixXd> out(tv.NumComponents());
  for (std::size_t c = 0; c < tv.NumComponents(); ++c) {
    const auto rows = static_cast<Eigen::Index>(c) * k;
    auto tc = tv.t_matrix().middleRows(rows, k);
    Eigen::MatrixXd scaled =
        tv.sigma().segment(rows, k).cwiseInverse().asDiagonal() * tc;
    Eigen::MatrixXd p = tc.transpose() * scaled;
    out[c] = p.selfadjointView<Eigen::Upper>();
  }
  return out;
}

// Centred first-order statistics F_c - N_c m_c as one supervector.
Eigen::VectorXd CentredFirstOrder(const BaumWelchStats &stats,
                                  const TotalVariabilityModel &tv) {
  const auto k = static_cast<Eigen::Index>(tv.Dim());
  Eigen::VectorXd out(static_cast<Eigen::Index>(tv.SupervectorDim()));
  for (Eigen::Index c = 0; c < stats.zeroth.size(); ++c)
    out.segment(c * k, k) =
        stats.first.row(c).transpose() - stats.zeroth[c] * tv.m().segment(c * k, k);
  return out;
}

void CheckStats(const BaumWelchStats &stats, const TotalVariabilityModel &tv) {
  if (stats.NumComponents() != tv.NumComponents() || stats.Dim() != tv.Dim())
    Fail(ErrorKind::kDimensionMismatch,
         "statistics are " + std::to_string(stats.NumComponents()) + "x" +
             std::to_string(stats.Dim()) + ", model expects " +
             std::to_string(tv.NumComponents()) + "x" + std::to_string(tv.Dim()));
}

IvectorPosterior Posterior(const BaumWelchStats &stats, const TotalVariabilityModel &tv,
                           const std::vector<Eigen::MatrixXd> &comp_prec) {
  CheckStats(stats, tv);
  const auto rank = static_cast<Eigen::Index>(tv.Rank());
  IvectorPosterior post;
  post.precision = Eigen::MatrixXd::Identity(rank, rank);
  for (std::size_t c = 0; c < comp_prec.size(); ++c)
    if (stats.zeroth[c] != 0.0) post.precision += stats.zeroth[c] * comp_prec[c];

  const Eigen::VectorXd centred = CentredFirstOrder(stats, tv);
  const Eigen::VectorXd linear =
      tv.t_matrix().transpose() * centred.cwiseQuotient(tv.sigma());
  post.factor.compute(post.precision);
  if (post.factor.info() != Eigen::Success)
    Fail(ErrorKind::kNumericalFailure, "i-vector precision is not positive definite");
  post.mean = post.factor.solve(linear);
  if (!post.mean.allFinite())
    Fail(ErrorKind::kNumericalFailure, "i-vector solve produced non-finite values");
  return post;
}

}  // namespace

TotalVariabilityModel::TotalVariabilityModel(std::size_t num_components,
                                             std::size_t dim,
                                             Eigen::VectorXd mean_supervector,
                                             Eigen::VectorXd variance_supervector,
                                             Eigen::MatrixXd t_matrix)
    : num_components_(num_components),
      dim_(dim),
      m_(std::move(mean_supervector)),
      sigma_(std::move(variance_supervector)),
      t_(std::move(t_matrix)) {
  const auto sv_dim = static_cast<Eigen::Index>(num_components_ * dim_);
  if (sv_dim == 0)
    Fail(ErrorKind::kDimensionMismatch, "total-variability model has no dimensions");
  if (m_.size() != sv_dim || sigma_.size() != sv_dim || t_.rows() != sv_dim)
    Fail(ErrorKind::kDimensionMismatch, "m, sigma and T disagree with C x k");
  if (t_.cols() < 1 || t_.cols() >= sv_dim)
    Fail(ErrorKind::kRankTooLarge,
         "rank " + std::to_string(t_.cols()) + " must lie in [1, " +
             std::to_string(sv_dim - 1) + "]");
  if (!m_.allFinite() || !sigma_.allFinite() || !t_.allFinite())
    Fail(ErrorKind::kInvalidConfig, "total-variability model has non-finite values");
  if ((sigma_.array() <= 0.0).any())
    Fail(ErrorKind::kInvalidConfig, "sigma entries must be positive");
}

TotalVariabilityModel TotalVariabilityModel::WithTMatrix(Eigen::MatrixXd t_matrix) const {
  return TotalVariabilityModel(num_components_, dim_, m_, sigma_, std::move(t_matrix));
}

bool TotalVariabilityModel::operator==(const TotalVariabilityModel &other) const {
  return num_components_ == other.num_components_ && dim_ == other.dim_ &&
         t_.rows() == other.t_.rows() && t_.cols() == other.t_.cols() &&
         m_ == other.m_ && sigma_ == other.sigma_ && t_ == other.t_;
}

TotalVariabilityModel InitTv(const Ubm &ubm, std::size_t rank, std::uint64_t rng_seed) {
  const std::size_t sv_dim = ubm.NumComponents() * ubm.Dim();
  if (rank < 1 || rank >= sv_dim)
    Fail(ErrorKind::kRankTooLarge,
         "rank " + std::to_string(rank) + " must lie in [1, " +
             std::to_string(sv_dim - 1) + "]");
  Eigen::VectorXd m = BuildSupervector(ubm).values;
  Eigen::VectorXd sigma = VarianceSupervector(ubm);
  const double scale = 0.1 * sigma.cwiseSqrt().mean();
  std::mt19937_64 rng(rng_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd t(static_cast<Eigen::Index>(sv_dim), static_cast<Eigen::Index>(rank));
  // Filled row by row so the draw order does not depend on Eigen's layout.
  for (Eigen::Index r = 0; r < t.rows(); ++r)
    for (Eigen::Index j = 0; j < t.cols(); ++j) t(r, j) = scale * normal(rng);
  return TotalVariabilityModel(ubm.NumComponents(), ubm.Dim(), std::move(m),
                               std::move(sigma), std::move(t));
}

Eigen::MatrixXd IvectorPosterior::Covariance() const {
  return factor.solve(Eigen::MatrixXd::Identity(precision.rows(), precision.cols()));
}

IvectorPosterior ComputeIvectorPosterior(const BaumWelchStats &stats,
                                         const TotalVariabilityModel &tv) {
  CheckStats(stats, tv);
  return Posterior(stats, tv, ComponentPrecisions(tv));
}

IVector ExtractIvector(const BaumWelchStats &stats, const TotalVariabilityModel &tv) {
  return IVector{ComputeIvectorPosterior(stats, tv).mean};
}

TotalVariabilityModel TrainTv(const std::vector<BaumWelchStats> &stats_set,
                              const TotalVariabilityModel &tv, int iterations,
                              TvTrace *trace) {
  if (iterations <= 0) return tv;
  if (stats_set.empty())
    Fail(ErrorKind::kEmptyFeatureMatrix, "no utterance statistics to train on");
  for (const auto &stats : stats_set) CheckStats(stats, tv);

  const auto rank = static_cast<Eigen::Index>(tv.Rank());
  const auto k = static_cast<Eigen::Index>(tv.Dim());
  const std::size_t num_comp = tv.NumComponents();
  TotalVariabilityModel model = tv;
  for (int iter = 0; iter < iterations; ++iter) {
    const auto comp_prec = ComponentPrecisions(model);
    std::vector<Eigen::MatrixXd> a(num_comp, Eigen::MatrixXd::Zero(rank, rank));
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(model.t_matrix().rows(), rank);
    Eigen::VectorXd total_occ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(num_comp));
    double sq_norm = 0.0;
    for (const auto &stats : stats_set) {
      const IvectorPosterior post = Posterior(stats, model, comp_prec);
      const Eigen::MatrixXd second =
          post.Covariance() + post.mean * post.mean.transpose();
      for (std::size_t c = 0; c < num_comp; ++c)
        if (stats.zeroth[c] != 0.0) a[c] += stats.zeroth[c] * second;
      b.noalias() += CentredFirstOrder(stats, model) * post.mean.transpose();
      total_occ += stats.zeroth;
      sq_norm += post.mean.squaredNorm();
    }
    if (trace) trace->mean_ivector_sq_norm.push_back(sq_norm / stats_set.size());

    Eigen::MatrixXd t = model.t_matrix();
    for (std::size_t c = 0; c < num_comp; ++c) {
      if (total_occ[c] <= 0.0) continue;
      Eigen::LLT<Eigen::MatrixXd> llt(a[c]);
      if (llt.info() != Eigen::Success)
        Fail(ErrorKind::kNumericalFailure,
             "second-order accumulator of component " + std::to_string(c) +
                 " is not positive definite");
      const auto rows = static_cast<Eigen::Index>(c) * k;
      // T_c A_c = B_c  <=>  A_c T_c' = B_c'  (A_c symmetric).
      t.middleRows(rows, k) = llt.solve(b.middleRows(rows, k).transpose()).transpose();
    }
    model = model.WithTMatrix(std::move(t));
  }
  return model;
}

}  // namespace voxid
