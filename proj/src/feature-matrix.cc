// src/feature-matrix.cc

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

#include "voxid/feature-matrix.h"

#include <string>

#include "voxid/voxid-error.h"

namespace voxid {

FeatureMatrix::FeatureMatrix(RowMatrix frames) : frames_(std::move(frames)) {
  if (frames_.cols() == 0)
    Fail(ErrorKind::kDimensionMismatch, "feature dimension must be positive");
  if (!frames_.allFinite())
    Fail(ErrorKind::kInvalidConfig, "feature matrix has non-finite entries");
}

FeatureMatrix::FeatureMatrix(std::size_t num_frames, std::size_t dim,
                             std::span<const double> row_major_values) {
  if (row_major_values.size() != num_frames * dim)
    Fail(ErrorKind::kDimensionMismatch, "value count does not match L x k");
  RowMatrix m(static_cast<Eigen::Index>(num_frames), static_cast<Eigen::Index>(dim));
  std::copy(row_major_values.begin(), row_major_values.end(), m.data());
  *this = FeatureMatrix(std::move(m));
}

FeatureMatrix FeatureMatrix::Concatenate(const FeatureMatrix &other) const {
  if (Dim() != other.Dim())
    Fail(ErrorKind::kDimensionMismatch,
         "cannot concatenate dims " + std::to_string(Dim()) + " and " +
             std::to_string(other.Dim()));
  RowMatrix joined(frames_.rows() + other.frames_.rows(), frames_.cols());
  joined.topRows(frames_.rows()) = frames_;
  joined.bottomRows(other.frames_.rows()) = other.frames_;
  return FeatureMatrix(std::move(joined));
}

void CheckFeatures(const FeatureMatrix &features, std::size_t expected_dim) {
  if (features.Empty())
    Fail(ErrorKind::kEmptyFeatureMatrix, "feature matrix has no frames");
  if (features.Dim() != expected_dim)
    Fail(ErrorKind::kDimensionMismatch,
         "features have dimension " + std::to_string(features.Dim()) +
             ", model expects " + std::to_string(expected_dim));
}

}  // namespace voxid
