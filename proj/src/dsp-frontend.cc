// src/dsp-frontend.cc

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

#include "voxid/dsp-frontend.h"

#include <cmath>
#include <numbers>
#include <string>

#include "voxid/voxid-error.h"

namespace voxid {

int MfccConfig::FrameLengthSamples(int sample_rate_hz) const {
  return static_cast<int>(std::lround(frame_length_ms * sample_rate_hz / 1000.0));
}

int MfccConfig::FrameShiftSamples(int sample_rate_hz) const {
  return static_cast<int>(std::lround(frame_shift_ms * sample_rate_hz / 1000.0));
}

int MfccConfig::DftSize(int sample_rate_hz) const {
  if (dft_size != 0) return dft_size;
  int n = 1;
  while (n < FrameLengthSamples(sample_rate_hz)) n <<= 1;
  return n;
}

void MfccConfig::Validate(int sample_rate_hz) const {
  auto bad = [](const std::string &what) {
    Fail(ErrorKind::kInvalidConfig, "MfccConfig: " + what);
  };
  if (!(pre_emphasis_alpha >= 0.0 && pre_emphasis_alpha < 1.0))
    bad("pre_emphasis_alpha must lie in [0, 1)");
  if (!(frame_length_ms > 0.0) || !(frame_shift_ms > 0.0))
    bad("frame length and shift must be positive");
  if (frame_shift_ms > frame_length_ms)
    bad("frame_shift_ms exceeds frame_length_ms");
  if (FrameLengthSamples(sample_rate_hz) < 2 ||
      FrameShiftSamples(sample_rate_hz) < 1)
    bad("frame is shorter than two samples at this rate");
  if (dft_size != 0 &&
      (!IsPowerOfTwo(dft_size) || dft_size < FrameLengthSamples(sample_rate_hz)))
    bad("dft_size must be a power of two no smaller than the frame");
  if (num_mel_filters < 1) bad("num_mel_filters must be positive");
  if (num_cepstra < 1 || num_cepstra > num_mel_filters)
    bad("num_cepstra must lie in [1, num_mel_filters]");
  if (!(log_floor > 0.0)) bad("log_floor must be positive");
}

std::vector<double> PreEmphasize(std::span<const double> signal, double alpha) {
  std::vector<double> out(signal.begin(), signal.end());
  for (std::size_t n = signal.size(); n-- > 1;)
    out[n] = signal[n] - alpha * signal[n - 1];
  return out;
}

std::vector<std::vector<double>> FrameSignal(std::span<const double> signal,
                                             const MfccConfig &config,
                                             int sample_rate_hz) {
  const std::size_t length = config.FrameLengthSamples(sample_rate_hz);
  const std::size_t shift = config.FrameShiftSamples(sample_rate_hz);
  if (signal.size() < length)
    Fail(ErrorKind::kSignalTooShort,
         std::to_string(signal.size()) + " samples is less than one frame (" +
             std::to_string(length) + ")");
  std::vector<std::vector<double>> frames;
  frames.reserve((signal.size() - length) / shift + 1);
  for (std::size_t start = 0; start + length <= signal.size(); start += shift)
    frames.emplace_back(signal.begin() + start, signal.begin() + start + length);
  return frames;
}

std::vector<double> HammingWindow(std::span<const double> frame) {
  const std::size_t n_total = frame.size();
  if (n_total < 2)
    Fail(ErrorKind::kFrameTooShort, "Hamming window needs at least 2 samples");
  std::vector<double> out(n_total);
  const double denom = static_cast<double>(n_total - 1);
  for (std::size_t n = 0; n < n_total; ++n)
    out[n] = frame[n] *
             (0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * n / denom));
  return out;
}

bool IsPowerOfTwo(int n) { return n > 0 && (n & (n - 1)) == 0; }

void Fft(std::span<std::complex<double>> data) {
  const std::size_t n = data.size();
  if (n > static_cast<std::size_t>(1) << 30 || !IsPowerOfTwo(static_cast<int>(n)))
    Fail(ErrorKind::kInvalidDftSize,
         "FFT length " + std::to_string(n) + " is not a power of two");
  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    // Twiddles come straight from cos/sin rather than a recurrence, which
    // keeps the error at the level of a direct DFT.
    for (std::size_t k = 0; k < half; ++k) {
      const double angle = -2.0 * std::numbers::pi * k / len;
      const std::complex<double> w(std::cos(angle), std::sin(angle));
      for (std::size_t start = 0; start < n; start += len) {
        std::complex<double> u = data[start + k];
        std::complex<double> v = data[start + k + half] * w;
        data[start + k] = u + v;
        data[start + k + half] = u - v;
      }
    }
  }
}

std::vector<double> MagnitudeSpectrum(std::span<const double> frame,
                                      int dft_size) {
  if (!IsPowerOfTwo(dft_size) || static_cast<std::size_t>(dft_size) < frame.size())
    Fail(ErrorKind::kInvalidDftSize,
         "dft_size " + std::to_string(dft_size) +
             " must be a power of two no smaller than the frame (" +
             std::to_string(frame.size()) + ")");
  std::vector<std::complex<double>> buf(dft_size);
  std::copy(frame.begin(), frame.end(), buf.begin());
  Fft(buf);
  std::vector<double> mag(dft_size / 2 + 1);
  for (std::size_t m = 0; m < mag.size(); ++m) mag[m] = std::abs(buf[m]);
  return mag;
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double MelToHz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

MelFilterBank::MelFilterBank(int num_filters, int dft_size, int sample_rate_hz)
    : dft_size_(dft_size), sample_rate_hz_(sample_rate_hz) {
  if (num_filters < 1)
    Fail(ErrorKind::kInvalidConfig, "filter bank needs at least one filter");
  if (!IsPowerOfTwo(dft_size) || dft_size < 2)
    Fail(ErrorKind::kInvalidDftSize, "filter bank dft_size must be a power of two");
  if (sample_rate_hz <= 0)
    Fail(ErrorKind::kInvalidConfig, "sample rate must be positive");

  const int num_bins = dft_size / 2 + 1;
  const double mel_high = HzToMel(sample_rate_hz / 2.0);
  const double mel_step = mel_high / (num_filters + 1);
  weights_ = RowMatrix::Zero(num_filters, num_bins);
  center_hz_.resize(num_filters);
  for (int j = 0; j < num_filters; ++j) {
    const double left = j * mel_step;
    const double center = (j + 1) * mel_step;
    const double right = (j + 2) * mel_step;
    center_hz_[j] = MelToHz(center);
    for (int m = 0; m < num_bins; ++m) {
      const double mel =
          HzToMel(static_cast<double>(m) * sample_rate_hz / dft_size);
      if (mel > left && mel <= center)
        weights_(j, m) = (mel - left) / (center - left);
      else if (mel > center && mel < right)
        weights_(j, m) = (right - mel) / (right - center);
    }
  }
}

std::vector<double> MelFilterBank::Apply(std::span<const double> magnitude_spectrum,
                                         double floor) const {
  if (magnitude_spectrum.size() != static_cast<std::size_t>(NumBins()))
    Fail(ErrorKind::kDimensionMismatch,
         "spectrum has " + std::to_string(magnitude_spectrum.size()) +
             " bins, filter bank expects " + std::to_string(NumBins()));
  std::vector<double> out(NumFilters());
  for (int j = 0; j < NumFilters(); ++j) {
    double energy = 0.0;
    for (int m = 0; m < NumBins(); ++m) {
      const double w = weights_(j, m);
      if (w != 0.0) energy += w * magnitude_spectrum[m] * magnitude_spectrum[m];
    }
    out[j] = std::log(std::max(energy, floor));
  }
  return out;
}

std::vector<double> DctCepstra(std::span<const double> log_energies,
                               int num_cepstra) {
  const std::size_t num_in = log_energies.size();
  if (num_cepstra < 0 || static_cast<std::size_t>(num_cepstra) > num_in)
    Fail(ErrorKind::kDimensionMismatch,
         "asked for " + std::to_string(num_cepstra) + " cepstra from " +
             std::to_string(num_in) + " log energies");
  std::vector<double> out(num_cepstra);
  const double j_total = static_cast<double>(num_in);
  for (int q = 0; q < num_cepstra; ++q) {
    double sum = 0.0;
    for (std::size_t j = 0; j < num_in; ++j)
      sum += log_energies[j] *
             std::cos(std::numbers::pi * q * (j + 0.5) / j_total);
    out[q] = (q == 0 ? std::sqrt(1.0 / j_total) : std::sqrt(2.0 / j_total)) * sum;
  }
  return out;
}

void ApplyCmvn(RowMatrix *frames) {
  const Eigen::Index rows = frames->rows();
  if (rows == 0) return;
  for (Eigen::Index d = 0; d < frames->cols(); ++d) {
    auto col = frames->col(d);
    const double mean = col.mean();
    col.array() -= mean;
    const double var = col.squaredNorm() / static_cast<double>(rows);
    if (var > 0.0) col /= std::sqrt(var);
  }
}

FeatureMatrix ExtractMfcc(const AudioClip &clip, const MfccConfig &config) {
  const int rate = clip.sample_rate_hz();
  config.Validate(rate);
  const int dft_size = config.DftSize(rate);
  const MelFilterBank bank(config.num_mel_filters, dft_size, rate);

  const auto emphasized = PreEmphasize(clip.samples(), config.pre_emphasis_alpha);
  const auto frames = FrameSignal(emphasized, config, rate);
  RowMatrix out(static_cast<Eigen::Index>(frames.size()), config.num_cepstra);
  for (std::size_t t = 0; t < frames.size(); ++t) {
    const auto windowed = HammingWindow(frames[t]);
    const auto spectrum = MagnitudeSpectrum(windowed, dft_size);
    const auto log_energies = bank.Apply(spectrum, config.log_floor);
    const auto cepstra = DctCepstra(log_energies, config.num_cepstra);
    for (int q = 0; q < config.num_cepstra; ++q)
      out(static_cast<Eigen::Index>(t), q) = cepstra[q];
  }
  if (config.apply_cmvn) ApplyCmvn(&out);
  return FeatureMatrix(std::move(out));
}

}  // namespace voxid
