// tests/scoring-test.cc

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test-util.h"
#include "voxid/scoring.h"
#include "voxid/synthetic.h"

using namespace voxid;
using namespace voxid::testing;

namespace {

std::vector<double> RandomDistribution(std::mt19937_64 *rng, int n) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(n);
  double sum = 0.0;
  for (auto &v : p) sum += (v = e(*rng));
  for (auto &v : p) v /= sum;
  return p;
}

std::vector<double> RandomVector(std::mt19937_64 *rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(n);
  for (auto &x : v) x = g(*rng);
  return v;
}

// Long double inner product over product of norms.
double OracleCosine(const std::vector<double> &a, const std::vector<double> &b) {
  long double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<long double>(a[i]) * b[i];
    na += static_cast<long double>(a[i]) * a[i];
    nb += static_cast<long double>(b[i]) * b[i];
  }
  return static_cast<double>(dot / std::sqrt(na * nb));
}

}  // namespace

TEST_CASE("LLR score") {
  std::mt19937_64 rng(1);
  const Ubm ubm{RandomGmm(&rng, 4, 3)};
  const FeatureMatrix x = SampleFrames(ubm.gmm, 200, &rng);
  CHECK(LlrScore(x, SpeakerModel{"u", ubm.gmm}, ubm) == 0.0);

  RowMatrix shifted = ubm.gmm.means().array() + 2.0;
  const SpeakerModel spk{"s", ubm.gmm.WithMeans(shifted)};
  const FeatureMatrix own = SampleFrames(spk.gmm, 200, &rng);
  CHECK(LlrScore(own, spk, ubm) > 0.0);

  const FeatureMatrix one(1, 3, own.Frame(0));
  CHECK(LlrScore(one.Concatenate(one), spk, ubm) == 2.0 * LlrScore(one, spk, ubm));
  CHECK(LlrScore(own.Concatenate(own), spk, ubm) ==
        doctest::Approx(2.0 * LlrScore(own, spk, ubm)).epsilon(1e-13));

  // Frame order does not matter beyond summation rounding.
  RowMatrix rev = own.frames().colwise().reverse();
  CHECK(LlrScore(FeatureMatrix(rev), spk, ubm) ==
        doctest::Approx(LlrScore(own, spk, ubm)).epsilon(1e-12));

  CHECK(ThrownKind([&] { LlrScore(FeatureMatrix(RowMatrix(0, 3)), spk, ubm); }) ==
        K(ErrorKind::kEmptyFeatureMatrix));
  CHECK(ThrownKind([&] { LlrScore(FeatureMatrix(RowMatrix::Zero(2, 2)), spk, ubm); }) ==
        K(ErrorKind::kDimensionMismatch));
}

TEST_CASE("score normalisation") {
  const CohortStats c{3.0, 2.0};
  CHECK(NormalizeScore(3.0, c) == 0.0);
  CHECK(NormalizeScore(5.0, c) == 1.0);
  const double a = 4.0, b = -1.5;
  CHECK(NormalizeScore(a * 7.25 + b, CohortStats{a * 3.0 + b, a * 2.0}) ==
        doctest::Approx(NormalizeScore(7.25, c)).epsilon(1e-15));
  CHECK(ThrownKind([] { NormalizeScore(1.0, CohortStats{0.0, 0.0}); }) ==
        K(ErrorKind::kDegenerateCohort));

  const std::vector<double> two{0.0, 2.0};
  const CohortStats ct = CohortFromScores(two);
  CHECK(ct.mean_mu == 1.0);
  CHECK(ct.std_sigma == std::sqrt(2.0));
  CHECK(ThrownKind([] { CohortFromScores(std::vector<double>{1.0, 1.0, 1.0}); }) ==
        K(ErrorKind::kDegenerateCohort));
  CHECK(ThrownKind([] { CohortFromScores(std::vector<double>{1.0}); }) ==
        K(ErrorKind::kDegenerateCohort));

  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> s = RandomVector(&rng, 7);
    const CohortStats base = CohortFromScores(s);
    for (auto &v : s) v += 12.5;
    const CohortStats moved = CohortFromScores(s);
    CHECK(moved.mean_mu == doctest::Approx(base.mean_mu + 12.5).epsilon(1e-13));
    CHECK(moved.std_sigma == doctest::Approx(base.std_sigma).epsilon(1e-12));
  }
}

TEST_CASE("normalisation preserves the ranking") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<double> raw = RandomVector(&rng, 6);
    const CohortStats c = CohortFromScores(raw);
    const auto raw_best = std::max_element(raw.begin(), raw.end()) - raw.begin();
    std::vector<double> norm;
    for (double r : raw) norm.push_back(NormalizeScore(r, c));
    CHECK(std::max_element(norm.begin(), norm.end()) - norm.begin() == raw_best);
    for (std::size_t i = 0; i < raw.size(); ++i)
      for (std::size_t j = 0; j < raw.size(); ++j)
        if (raw[i] < raw[j]) CHECK(norm[i] < norm[j]);
  }
}

TEST_CASE("cosine score") {
  const std::vector<double> u{0.3, -1.2, 2.5};
  CHECK(CosineScore(u, u) == 1.0);
  CHECK(CosineScore(std::vector<double>{1, 0}, std::vector<double>{0, 1}) == 0.0);
  CHECK(CosineScore(std::vector<double>{1, 0}, std::vector<double>{-3, 0}) == -1.0);
  CHECK(ThrownKind([] { CosineScore(std::vector<double>{0, 0}, std::vector<double>{1, 0}); }) ==
        K(ErrorKind::kZeroVector));
  CHECK(ThrownKind([] { CosineScore(std::vector<double>{1}, std::vector<double>{1, 0}); }) ==
        K(ErrorKind::kDimensionMismatch));

  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const std::vector<double> a = RandomVector(&rng, 8), b = RandomVector(&rng, 8);
    const double s = CosineScore(a, b);
    CHECK(s == CosineScore(b, a));
    CHECK(std::abs(s) <= 1.0);
    CHECK(std::abs(s - OracleCosine(a, b)) <= 1e-14);
    // Power-of-two scalings are exact in binary floating point.
    std::vector<double> a4 = a, b8 = b;
    for (auto &v : a4) v *= 4.0;
    for (auto &v : b8) v *= 0.125;
    CHECK(CosineScore(a4, b8) == s);
    // Other positive scalings agree to rounding.
    std::vector<double> a3 = a;
    for (auto &v : a3) v *= 3.7;
    CHECK(std::abs(CosineScore(a3, b) - s) <= 1e-15);
  }
  IVector iv{Eigen::Vector3d(1, 2, 2)};
  CHECK(CosineScore(iv, iv) == 1.0);
}

TEST_CASE("Bhattacharyya coefficient") {
  const std::vector<double> p{0.2, 0.3, 0.5};
  CHECK(std::abs(BhattacharyyaCoefficient(p, p) - 1.0) <= 1e-12);
  CHECK(BhattacharyyaCoefficient(std::vector<double>{1, 0}, std::vector<double>{0, 1}) == 0.0);
  CHECK(BhattacharyyaCoefficient(std::vector<double>{0.5, 0.5}, std::vector<double>{0.5, 0.5}) ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(ThrownKind([] {
          BhattacharyyaCoefficient(std::vector<double>{0.5, 0.6}, std::vector<double>{0.5, 0.5});
        }) == K(ErrorKind::kNotADistribution));
  CHECK(ThrownKind([] {
          BhattacharyyaCoefficient(std::vector<double>{1.5, -0.5}, std::vector<double>{0.5, 0.5});
        }) == K(ErrorKind::kNotADistribution));
  CHECK(ThrownKind([] {
          BhattacharyyaCoefficient(std::vector<double>{1.0}, std::vector<double>{0.5, 0.5});
        }) == K(ErrorKind::kDimensionMismatch));

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::vector<double> a = RandomDistribution(&rng, 6), b = RandomDistribution(&rng, 6);
    const double rho = BhattacharyyaCoefficient(a, b);
    CHECK(rho >= 0.0);
    CHECK(rho <= 1.0);
    std::vector<double> ra, rb;
    double l1 = 0.0;
    for (int i = 0; i < 6; ++i) {
      ra.push_back(std::sqrt(a[i]));
      rb.push_back(std::sqrt(b[i]));
      l1 += std::abs(a[i] - b[i]);
    }
    CHECK(std::abs(rho - OracleCosine(ra, rb)) <= 1e-12);
    if (l1 > 1e-3) CHECK(rho < 1.0 - 1e-9);
  }
}

TEST_CASE("decisions") {
  const DecisionPolicy llr{1.0, ScoringMode::kLlr};
  CHECK(Decide(2.2, llr) == Decision::kAccept);
  for (double s : {0.0, 0.45, 0.34}) CHECK(Decide(s, llr) == Decision::kReject);
  CHECK(Decide(1.0, llr) == Decision::kReject);
  CHECK(Decide(std::nextafter(1.0, 2.0), llr) == Decision::kAccept);
  const DecisionPolicy cos{0.5, ScoringMode::kCosine};
  CHECK(Decide(0.5, cos) == Decision::kReject);
  CHECK(ThrownKind([] { DecisionPolicy{1.5, ScoringMode::kCosine}.Validate(); }) ==
        K(ErrorKind::kInvalidConfig));
  CHECK(ThrownKind([] { DecisionPolicy{1.5, ScoringMode::kLlr}.Validate(); }) == -1);
  CHECK(ParseScoringMode("cosine") == ScoringMode::kCosine);
  CHECK(ScoringModeName(ScoringMode::kLlr) == "llr");
  CHECK(ThrownKind([] { ParseScoringMode("plda"); }) == K(ErrorKind::kInvalidConfig));
}
