// include/voxid/audio-io.h

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

#ifndef VOXID_AUDIO_IO_H_
#define VOXID_AUDIO_IO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace voxid {

/// Mono PCM signal with amplitudes in [-1, 1].  Only 4, 8 and 16 kHz are
/// accepted; there is no resampling anywhere in the toolkit.
class AudioClip {
 public:
  /// Throws UnsupportedSampleRate, EmptyAudio, or InvalidConfig (amplitude
  /// outside [-1, 1] or non-finite).
  AudioClip(std::vector<double> samples, int sample_rate_hz);

  const std::vector<double> &samples() const { return samples_; }
  int sample_rate_hz() const { return sample_rate_hz_; }
  std::size_t size() const { return samples_.size(); }

  static bool IsSupportedRate(int sample_rate_hz);

 private:
  std::vector<double> samples_;
  int sample_rate_hz_;
};

/// Parses a RIFF/WAVE image.  Requires "fmt " and "data" chunks, PCM 16-bit
/// little endian.  Other chunks are skipped.  Channels are averaged to mono
/// and the result scaled by 1/32768.
AudioClip DecodeWav(std::span<const std::uint8_t> bytes);

AudioClip ReadWav(const std::filesystem::path &path);

/// Mono PCM-16 encoding; amplitudes are rounded to the nearest step and
/// clipped to [-32768, 32767].
std::vector<std::uint8_t> EncodeWav(const AudioClip &clip);

void WriteWav(const AudioClip &clip, const std::filesystem::path &path);

}  // namespace voxid

#endif  // VOXID_AUDIO_IO_H_
