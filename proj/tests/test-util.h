// tests/test-util.h

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

#ifndef VOXID_TESTS_TEST_UTIL_H_
#define VOXID_TESTS_TEST_UTIL_H_

// Independent reference implementations used as oracles by the unit tests
// and the acceptance suite, plus small fixtures.  Nothing here calls the
// code it is used to check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "voxid/gmm-core.h"
#include "voxid/voxid-error.h"

namespace voxid::testing {

/// Runs f and reports the ErrorKind it threw, or nullopt-like sentinel -1.
template <typename F>
int ThrownKind(F &&f) {
  try {
    f();
  } catch (const VoxError &e) {
    return static_cast<int>(e.kind());
  }
  return -1;
}

inline int K(ErrorKind kind) { return static_cast<int>(kind); }

/// X[m] = sum_n x[n] exp(-2 pi i m n / N), evaluated term by term in long
/// double.
inline std::vector<std::complex<double>> DirectDft(const std::vector<std::complex<double>> &x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  for (std::size_t m = 0; m < n; ++m) {
    long double re = 0.0L, im = 0.0L;
    for (std::size_t t = 0; t < n; ++t) {
      const long double angle = -two_pi * static_cast<long double>((m * t) % n) / n;
      const long double c = std::cos(angle), s = std::sin(angle);
      re += x[t].real() * c - x[t].imag() * s;
      im += x[t].real() * s + x[t].imag() * c;
    }
    out[m] = {static_cast<double>(re), static_cast<double>(im)};
  }
  return out;
}

/// log sum_i w_i prod_d N(x_d; mu_id, var_id), with the densities
/// multiplied out directly in long double (no log-domain tricks).
inline double NaiveMixtureLogLikelihood(const std::vector<double> &x,
                                        const std::vector<double> &weights,
                                        const std::vector<std::vector<double>> &means,
                                        const std::vector<std::vector<double>> &variances) {
  long double total = 0.0L;
  const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    long double p = weights[i];
    for (std::size_t d = 0; d < x.size(); ++d) {
      const long double diff = static_cast<long double>(x[d]) - means[i][d];
      p *= std::exp(-diff * diff / (2.0L * variances[i][d])) /
           std::sqrt(two_pi * variances[i][d]);
    }
    total += p;
  }
  return static_cast<double>(std::log(total));
}

/// For every candidate threshold in the score union, counts errors by
/// scanning every score, and keeps the first threshold (in increasing order)
/// with the smallest |FAR - FRR|.
inline double BruteForceEer(const std::vector<double> &targets,
                            const std::vector<double> &nontargets) {
  std::vector<double> candidates = targets;
  candidates.insert(candidates.end(), nontargets.begin(), nontargets.end());
  std::sort(candidates.begin(), candidates.end());
  double best_gap = std::numeric_limits<double>::infinity(), eer = 0.0;
  for (double theta : candidates) {
    int fa = 0, fr = 0;
    for (double s : nontargets) fa += s > theta;
    for (double s : targets) fr += s <= theta;
    const double far = static_cast<double>(fa) / nontargets.size();
    const double frr = static_cast<double>(fr) / targets.size();
    if (std::abs(far - frr) < best_gap) {
      best_gap = std::abs(far - frr);
      eer = (far + frr) / 2.0;
    }
  }
  return eer;
}

/// Largest principal angle, in degrees, between the column spans of a and b.
inline double MaxPrincipalAngleDegrees(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b) {
  const Eigen::MatrixXd qa =
      Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ() *
      Eigen::MatrixXd::Identity(a.rows(), a.cols());
  const Eigen::MatrixXd qb =
      Eigen::HouseholderQR<Eigen::MatrixXd>(b).householderQ() *
      Eigen::MatrixXd::Identity(b.rows(), b.cols());
  const Eigen::VectorXd sv =
      Eigen::JacobiSVD<Eigen::MatrixXd>(qa.transpose() * qb).singularValues();
  const double smallest = std::clamp(sv.minCoeff(), -1.0, 1.0);
  return std::acos(smallest) * 180.0 / std::numbers::pi;
}

/// Random valid diagonal GMM.
inline DiagonalGmm RandomGmm(std::mt19937_64 *rng, int num_components, int dim,
                             double mean_spread = 3.0) {
  std::normal_distribution<double> normal(0.0, mean_spread);
  std::uniform_real_distribution<double> uniform(0.3, 2.0);
  Eigen::VectorXd w(num_components);
  RowMatrix means(num_components, dim), vars(num_components, dim);
  for (int c = 0; c < num_components; ++c) {
    w[c] = uniform(*rng);
    for (int d = 0; d < dim; ++d) {
      means(c, d) = normal(*rng);
      vars(c, d) = uniform(*rng);
    }
  }
  w /= w.sum();
  return DiagonalGmm(w, means, vars);
}

/// Hand-assembled RIFF/WAVE image.
struct WavSpec {
  int format_tag = 1;
  int channels = 1;
  int sample_rate = 16000;
  int bits = 16;
  std::vector<std::int16_t> samples;  // interleaved
  bool junk_chunk_before_data = false;
  int declared_block_align = -1;  // -1: consistent value
  std::int64_t data_size_adjust = 0;
};

inline void PutLe(std::vector<std::uint8_t> *b, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) b->push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline std::vector<std::uint8_t> BuildWav(const WavSpec &s) {
  std::vector<std::uint8_t> body;
  const int block_align =
      s.declared_block_align >= 0 ? s.declared_block_align : s.channels * s.bits / 8;
  body.insert(body.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  PutLe(&body, 16, 4);
  PutLe(&body, s.format_tag, 2);
  PutLe(&body, s.channels, 2);
  PutLe(&body, s.sample_rate, 4);
  PutLe(&body, static_cast<std::uint64_t>(s.sample_rate) * block_align, 4);
  PutLe(&body, block_align, 2);
  PutLe(&body, s.bits, 2);
  if (s.junk_chunk_before_data) {
    body.insert(body.end(), {'L', 'I', 'S', 'T'});
    PutLe(&body, 3, 4);
    body.insert(body.end(), {'a', 'b', 'c', 0});  // odd size plus pad byte
  }
  body.insert(body.end(), {'d', 'a', 't', 'a'});
  const std::int64_t data_bytes = static_cast<std::int64_t>(s.samples.size()) * 2;
  PutLe(&body, static_cast<std::uint64_t>(data_bytes + s.data_size_adjust), 4);
  for (std::int16_t v : s.samples) PutLe(&body, static_cast<std::uint16_t>(v), 2);
  std::vector<std::uint8_t> out{'R', 'I', 'F', 'F'};
  PutLe(&out, body.size(), 4);
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

/// Harmonic "voice" for speaker index s: pitch and two spectral peaks depend
/// on s, phases, pitch drift and noise on utterance_seed.
inline std::vector<std::int16_t> SyntheticVoice(int speaker, std::uint64_t utterance_seed,
                                                double seconds, int rate = 16000) {
  std::mt19937_64 rng(utterance_seed * 7919 + static_cast<std::uint64_t>(speaker));
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> noise(0.0, 0.01);
  const double f0 = 90.0 + 41.0 * speaker;
  const double f1 = 450.0 + 350.0 * speaker, f2 = 1400.0 + 450.0 * speaker;
  const double drift = std::uniform_real_distribution<double>(0.5, 2.0)(rng);
  std::vector<double> phases(40);
  for (auto &p : phases) p = phase(rng);
  const auto n = static_cast<std::size_t>(seconds * rate);
  std::vector<std::int16_t> out(n);
  double theta = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / rate;
    const double f = f0 * (1.0 + 0.06 * std::sin(2.0 * std::numbers::pi * drift * t));
    theta += 2.0 * std::numbers::pi * f / rate;
    double v = 0.0;
    for (int h = 1; h <= 40 && h * f < rate / 2.0; ++h) {
      const double fh = h * f;
      const double amp = std::exp(-std::pow((fh - f1) / 250.0, 2)) +
                         0.6 * std::exp(-std::pow((fh - f2) / 350.0, 2)) + 0.02;
      v += amp * std::sin(h * theta + phases[h - 1]);
    }
    const double envelope = 0.6 + 0.4 * std::sin(2.0 * std::numbers::pi * 3.0 * t);
    v = 0.08 * envelope * v + noise(rng);
    out[i] = static_cast<std::int16_t>(std::clamp(v, -1.0, 1.0) * 32767.0);
  }
  return out;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path ScratchDir(const std::string &name) {
  const auto dir = std::filesystem::temp_directory_path() / ("voxid-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace voxid::testing

#endif  // VOXID_TESTS_TEST_UTIL_H_
