// src/audio-io.cc

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

#include "voxid/audio-io.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>

#include "voxid/voxid-error.h"

namespace voxid {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;
constexpr double kPcmScale = 32768.0;

std::uint16_t ReadU16(std::span<const std::uint8_t> b, std::size_t pos) {
  return static_cast<std::uint16_t>(b[pos] | (b[pos + 1] << 8));
}

std::uint32_t ReadU32(std::span<const std::uint8_t> b, std::size_t pos) {
  return static_cast<std::uint32_t>(b[pos]) |
         (static_cast<std::uint32_t>(b[pos + 1]) << 8) |
         (static_cast<std::uint32_t>(b[pos + 2]) << 16) |
         (static_cast<std::uint32_t>(b[pos + 3]) << 24);
}

bool TagIs(std::span<const std::uint8_t> b, std::size_t pos, const char *tag) {
  return std::equal(tag, tag + 4, b.begin() + pos,
                    [](char c, std::uint8_t u) {
                      return static_cast<std::uint8_t>(c) == u;
                    });
}

void PutU16(std::vector<std::uint8_t> *out, std::uint16_t v) {
  out->push_back(v & 0xFF);
  out->push_back(v >> 8);
}

void PutU32(std::vector<std::uint8_t> *out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out->push_back((v >> (8 * i)) & 0xFF);
}

void PutTag(std::vector<std::uint8_t> *out, const char *tag) {
  out->insert(out->end(), tag, tag + 4);
}

struct FormatChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits = 0;
};

}  // namespace

AudioClip::AudioClip(std::vector<double> samples, int sample_rate_hz)
    : samples_(std::move(samples)), sample_rate_hz_(sample_rate_hz) {
  if (!IsSupportedRate(sample_rate_hz_))
    Fail(ErrorKind::kUnsupportedSampleRate,
         "sample rate " + std::to_string(sample_rate_hz_) +
             " Hz is not one of 4000, 8000, 16000");
  if (samples_.empty()) Fail(ErrorKind::kEmptyAudio, "clip has no samples");
  for (double s : samples_) {
    if (!std::isfinite(s) || s < -1.0 || s > 1.0)
      Fail(ErrorKind::kInvalidConfig, "amplitude outside [-1, 1]");
  }
}

bool AudioClip::IsSupportedRate(int sample_rate_hz) {
  return sample_rate_hz == 4000 || sample_rate_hz == 8000 ||
         sample_rate_hz == 16000;
}

AudioClip DecodeWav(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || !TagIs(bytes, 0, "RIFF") || !TagIs(bytes, 8, "WAVE"))
    Fail(ErrorKind::kMalformedContainer, "missing RIFF/WAVE header");

  std::optional<FormatChunk> fmt;
  std::optional<std::span<const std::uint8_t>> data;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    std::uint32_t chunk_size = ReadU32(bytes, pos + 4);
    std::size_t body = pos + 8;
    if (chunk_size > bytes.size() - body)
      Fail(ErrorKind::kMalformedContainer,
           "chunk extends past end of file (declared " +
               std::to_string(chunk_size) + " bytes)");
    if (TagIs(bytes, pos, "fmt ")) {
      if (chunk_size < 16)
        Fail(ErrorKind::kMalformedContainer, "fmt chunk too short");
      FormatChunk f;
      f.format = ReadU16(bytes, body);
      f.channels = ReadU16(bytes, body + 2);
      f.sample_rate = ReadU32(bytes, body + 4);
      f.block_align = ReadU16(bytes, body + 12);
      f.bits = ReadU16(bytes, body + 14);
      if (f.format == kFormatExtensible) {
        // The sub-format GUID starts with the real format tag.
        if (chunk_size < 40)
          Fail(ErrorKind::kMalformedContainer, "extensible fmt chunk too short");
        f.format = ReadU16(bytes, body + 24);
      }
      fmt = f;
    } else if (TagIs(bytes, pos, "data")) {
      data = bytes.subspan(body, chunk_size);
    }
    // Chunks are padded to even length.
    pos = body + chunk_size + (chunk_size & 1);
  }
  if (!fmt) Fail(ErrorKind::kMalformedContainer, "no fmt chunk");
  if (!data) Fail(ErrorKind::kMalformedContainer, "no data chunk");
  if (fmt->format != kFormatPcm || fmt->bits != 16)
    Fail(ErrorKind::kUnsupportedEncoding,
         "only PCM 16-bit is accepted (format " + std::to_string(fmt->format) +
             ", " + std::to_string(fmt->bits) + " bits)");
  if (fmt->channels == 0 || fmt->block_align != 2 * fmt->channels)
    Fail(ErrorKind::kMalformedContainer, "inconsistent channel layout");
  if (data->size() % fmt->block_align != 0)
    Fail(ErrorKind::kMalformedContainer,
         "data chunk is not a whole number of frames");
  if (!AudioClip::IsSupportedRate(static_cast<int>(fmt->sample_rate)))
    Fail(ErrorKind::kUnsupportedSampleRate,
         "sample rate " + std::to_string(fmt->sample_rate) +
             " Hz is not one of 4000, 8000, 16000");

  std::size_t num_frames = data->size() / fmt->block_align;
  if (num_frames == 0) Fail(ErrorKind::kEmptyAudio, "data chunk is empty");
  std::vector<double> samples(num_frames);
  for (std::size_t t = 0; t < num_frames; ++t) {
    long sum = 0;
    for (std::size_t c = 0; c < fmt->channels; ++c) {
      auto raw = ReadU16(*data, t * fmt->block_align + 2 * c);
      sum += static_cast<std::int16_t>(raw);
    }
    samples[t] = static_cast<double>(sum) / fmt->channels / kPcmScale;
  }
  return AudioClip(std::move(samples), static_cast<int>(fmt->sample_rate));
}

AudioClip ReadWav(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIoFailure, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return DecodeWav(bytes);
}

std::vector<std::uint8_t> EncodeWav(const AudioClip &clip) {
  const auto &samples = clip.samples();
  std::uint32_t data_bytes = static_cast<std::uint32_t>(2 * samples.size());
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  PutTag(&out, "RIFF");
  PutU32(&out, 36 + data_bytes);
  PutTag(&out, "WAVE");
  PutTag(&out, "fmt ");
  PutU32(&out, 16);
  PutU16(&out, kFormatPcm);
  PutU16(&out, 1);
  PutU32(&out, clip.sample_rate_hz());
  PutU32(&out, 2 * clip.sample_rate_hz());
  PutU16(&out, 2);
  PutU16(&out, 16);
  PutTag(&out, "data");
  PutU32(&out, data_bytes);
  for (double s : samples) {
    double q = std::clamp(std::nearbyint(s * kPcmScale), -32768.0, 32767.0);
    PutU16(&out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }
  return out;
}

void WriteWav(const AudioClip &clip, const std::filesystem::path &path) {
  auto bytes = EncodeWav(clip);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorKind::kIoFailure, "cannot write " + path.string());
  out.write(reinterpret_cast<const char *>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) Fail(ErrorKind::kIoFailure, "short write to " + path.string());
}

}  // namespace voxid
