// include/voxid/feature-matrix.h

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

#ifndef VOXID_FEATURE_MATRIX_H_
#define VOXID_FEATURE_MATRIX_H_

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace voxid {

/// Row-major so that each row (a frame, a component mean) is contiguous and
/// can be handed out as a span.
using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline std::span<const double> RowSpan(const RowMatrix &m, Eigen::Index row) {
  return {m.data() + row * m.cols(), static_cast<std::size_t>(m.cols())};
}

/// L frames of k-dimensional acoustic features, one frame per row.  Zero
/// frames is a representable state (an empty file on disk); every consumer
/// that needs data rejects it with EmptyFeatureMatrix.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  /// Throws DimensionMismatch for dim 0 and InvalidConfig for non-finite data.
  explicit FeatureMatrix(RowMatrix frames);
  FeatureMatrix(std::size_t num_frames, std::size_t dim,
                std::span<const double> row_major_values);

  std::size_t NumFrames() const { return static_cast<std::size_t>(frames_.rows()); }
  std::size_t Dim() const { return static_cast<std::size_t>(frames_.cols()); }
  bool Empty() const { return frames_.rows() == 0; }

  std::span<const double> Frame(std::size_t i) const {
    return RowSpan(frames_, static_cast<Eigen::Index>(i));
  }
  const RowMatrix &frames() const { return frames_; }

  /// Frames of *this followed by frames of other.
  FeatureMatrix Concatenate(const FeatureMatrix &other) const;

  bool operator==(const FeatureMatrix &other) const {
    return Dim() == other.Dim() && frames_ == other.frames_;
  }

 private:
  RowMatrix frames_;
};

/// Throws EmptyFeatureMatrix when the matrix has no frames, DimensionMismatch
/// when its dimension differs from expected_dim.
void CheckFeatures(const FeatureMatrix &features, std::size_t expected_dim);

}  // namespace voxid

#endif  // VOXID_FEATURE_MATRIX_H_
