// include/voxid/dsp-frontend.h

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

#ifndef VOXID_DSP_FRONTEND_H_
#define VOXID_DSP_FRONTEND_H_

#include <complex>
#include <span>
#include <vector>

#include "voxid/audio-io.h"
#include "voxid/feature-matrix.h"

namespace voxid {

/// MFCC front end: pre-emphasis, framing, Hamming window, power spectrum,
/// mel filter bank, log, DCT-II and (optionally) per-utterance CMVN.
struct MfccConfig {
  double pre_emphasis_alpha = 0.97;
  double frame_length_ms = 25.0;
  double frame_shift_ms = 10.0;
  int dft_size = 0;  // 0 selects the next power of two >= frame length
  int num_mel_filters = 26;
  int num_cepstra = 13;
  bool apply_cmvn = true;
  double log_floor = 1e-10;

  int FrameLengthSamples(int sample_rate_hz) const;
  int FrameShiftSamples(int sample_rate_hz) const;
  /// dft_size, or the automatic choice when dft_size is 0.
  int DftSize(int sample_rate_hz) const;

  /// Throws InvalidConfig.  The rate is needed for the dft_size check.
  void Validate(int sample_rate_hz) const;
};

std::vector<double> PreEmphasize(std::span<const double> signal, double alpha);

/// Frames of FrameLengthSamples advanced by FrameShiftSamples; a trailing
/// partial frame is dropped.  Throws SignalTooShort.
std::vector<std::vector<double>> FrameSignal(std::span<const double> signal,
                                             const MfccConfig &config,
                                             int sample_rate_hz);

/// out[n] = frame[n] * (0.54 - 0.46 cos(2 pi n / (N - 1))).  Throws
/// FrameTooShort for N < 2.
std::vector<double> HammingWindow(std::span<const double> frame);

bool IsPowerOfTwo(int n);

/// In-place iterative radix-2 decimation-in-time FFT (forward, unscaled).
/// Throws InvalidDftSize unless the length is a power of two.
void Fft(std::span<std::complex<double>> data);

/// |DFT| of the zero-padded frame, bins 0 .. dft_size/2.
std::vector<double> MagnitudeSpectrum(std::span<const double> frame,
                                      int dft_size);

double HzToMel(double hz);
double MelToHz(double mel);

/// Triangular filters whose centres are equally spaced on the mel scale
/// between 0 Hz and the Nyquist frequency.  Immutable once built.
class MelFilterBank {
 public:
  MelFilterBank(int num_filters, int dft_size, int sample_rate_hz);

  int NumFilters() const { return static_cast<int>(weights_.rows()); }
  int NumBins() const { return static_cast<int>(weights_.cols()); }
  int DftSize() const { return dft_size_; }
  int SampleRate() const { return sample_rate_hz_; }

  /// Centre frequency of filter j in Hz.
  double CenterHz(int j) const { return center_hz_[j]; }
  /// Weight of filter j on spectrum bin m.
  double Weight(int j, int m) const { return weights_(j, m); }

  /// ln(max(sum_m weight_j(m) |X(m)|^2, floor)) for each filter.  Throws
  /// DimensionMismatch when the spectrum has the wrong number of bins.
  std::vector<double> Apply(std::span<const double> magnitude_spectrum,
                            double floor = 1e-10) const;

 private:
  int dft_size_;
  int sample_rate_hz_;
  std::vector<double> center_hz_;
  RowMatrix weights_;
};

/// Orthonormal DCT-II, first num_cepstra coefficients (c_0 included).
std::vector<double> DctCepstra(std::span<const double> log_energies,
                               int num_cepstra);

/// Shifts and scales each column to zero mean and unit (population)
/// variance.  Columns with zero variance are only centred.
void ApplyCmvn(RowMatrix *frames);

FeatureMatrix ExtractMfcc(const AudioClip &clip, const MfccConfig &config);

}  // namespace voxid

#endif  // VOXID_DSP_FRONTEND_H_
