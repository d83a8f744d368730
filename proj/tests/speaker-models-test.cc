// tests/speaker-models-test.cc

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
#include "voxid/speaker-models.h"
#include "voxid/synthetic.h"

using namespace voxid;
using namespace voxid::testing;

namespace {

Ubm TwoComponentUbm() {
  Eigen::VectorXd w(2);
  w << 0.5, 0.5;
  RowMatrix mu(2, 2), var(2, 2);
  mu << -100, -100, 100, 100;
  var << 1, 1, 1, 1;
  return Ubm{DiagonalGmm(w, mu, var)};
}

}  // namespace

TEST_CASE("UBM training pools utterances in id order") {
  std::mt19937_64 rng(3);
  const DiagonalGmm truth = RandomGmm(&rng, 3, 2);
  const FeatureMatrix a = SampleFrames(truth, 300, &rng);
  const FeatureMatrix b = SampleFrames(truth, 200, &rng);
  GmmTrainingConfig cfg;
  cfg.num_components = 3;
  const Ubm ab = TrainUbm({{"a", a}, {"b", b}}, cfg);
  const Ubm ba = TrainUbm({{"b", b}, {"a", a}}, cfg);
  CHECK(ab == ba);
  CHECK(TrainUbm({{"only", a}}, cfg).gmm == EmFit(a, cfg));
  CHECK(ThrownKind([&] { TrainUbm({{"x", a}, {"x", b}}, cfg); }) == K(ErrorKind::kInvalidConfig));
  CHECK(ThrownKind([&] { TrainUbm({}, cfg); }) == K(ErrorKind::kEmptyFeatureMatrix));
}

TEST_CASE("two speakers in disjoint clusters get one component each") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  RowMatrix s1(500, 1), s2(500, 1);
  for (int i = 0; i < 500; ++i) {
    s1(i, 0) = -10 + g(rng);
    s2(i, 0) = 10 + g(rng);
  }
  GmmTrainingConfig cfg;
  cfg.num_components = 2;
  const Ubm ubm = TrainUbm({{"s1", FeatureMatrix(s1)}, {"s2", FeatureMatrix(s2)}}, cfg);
  const double m0 = ubm.gmm.Mean(0)[0], m1 = ubm.gmm.Mean(1)[0];
  CHECK(std::min(m0, m1) < -9.0);
  CHECK(std::max(m0, m1) > 9.0);
}

TEST_CASE("Baum-Welch statistics") {
  const Ubm ubm = TwoComponentUbm();
  const FeatureMatrix one(RowMatrix::Constant(1, 2, 99.5));
  const BaumWelchStats s = AccumulateStats(one, ubm);
  CHECK(std::abs(s.zeroth.sum() - 1.0) <= 1e-12);
  CHECK(s.zeroth[1] == 1.0);
  CHECK(s.first(1, 0) == 99.5);
  CHECK(s.zeroth[0] == 0.0);

  std::mt19937_64 rng(17);
  const DiagonalGmm gen = RandomGmm(&rng, 4, 3);
  const Ubm ubm2{RandomGmm(&rng, 4, 3)};
  const FeatureMatrix x = SampleFrames(gen, 250, &rng);
  const BaumWelchStats st = AccumulateStats(x, ubm2);
  CHECK(std::abs(st.zeroth.sum() - 250.0) <= 1e-8);
  CHECK((st.zeroth.array() >= 0.0).all());
  CHECK(st.first.allFinite());
  CHECK(ThrownKind([&] { AccumulateStats(FeatureMatrix(RowMatrix(0, 3)), ubm2); }) ==
        K(ErrorKind::kEmptyFeatureMatrix));
  CHECK(ThrownKind([&] { AccumulateStats(FeatureMatrix(RowMatrix::Zero(2, 5)), ubm2); }) ==
        K(ErrorKind::kDimensionMismatch));
}

TEST_CASE("statistics are additive under concatenation") {
  // Frames deep inside one basin with small integer coordinates: every
  // responsibility is exactly 0 or 1 and every partial sum is exact, so the
  // identity holds bit for bit.
  const Ubm ubm = TwoComponentUbm();
  RowMatrix a(3, 2), b(2, 2);
  a << 99, 101, 100, 98, -100, -97;
  b << 102, 100, -99, -101;
  const FeatureMatrix fa(a), fb(b);
  BaumWelchStats sum = AccumulateStats(fa, ubm);
  sum += AccumulateStats(fb, ubm);
  CHECK(AccumulateStats(fa.Concatenate(fb), ubm) == sum);

  // General data: equal up to summation order.
  std::mt19937_64 rng(23);
  const Ubm ubm2{RandomGmm(&rng, 5, 3)};
  const FeatureMatrix x1 = SampleFrames(ubm2.gmm, 120, &rng);
  const FeatureMatrix x2 = SampleFrames(ubm2.gmm, 80, &rng);
  BaumWelchStats s12 = AccumulateStats(x1, ubm2);
  s12 += AccumulateStats(x2, ubm2);
  const BaumWelchStats joint = AccumulateStats(x1.Concatenate(x2), ubm2);
  CHECK((joint.zeroth - s12.zeroth).cwiseAbs().maxCoeff() <= 1e-12 * joint.zeroth.sum());
  CHECK((joint.first - s12.first).cwiseAbs().maxCoeff() <= 1e-12 * joint.first.cwiseAbs().sum());
}

TEST_CASE("MAP adaptation special cases") {
  std::mt19937_64 rng(31);
  const Ubm ubm{RandomGmm(&rng, 4, 3)};
  const BaumWelchStats none = BaumWelchStats::Zero(4, 3);
  CHECK(MapAdapt(none, ubm, 16.0).gmm == ubm.gmm);

  const FeatureMatrix x = SampleFrames(RandomGmm(&rng, 4, 3), 400, &rng);
  const BaumWelchStats st = AccumulateStats(x, ubm);
  const SpeakerModel ml = MapAdapt(st, ubm, 0.0, "s");
  CHECK(ml.speaker_id == "s");
  for (int c = 0; c < 4; ++c)
    for (int d = 0; d < 3; ++d)
      if (st.zeroth[c] > 0) CHECK(ml.gmm.means()(c, d) == st.first(c, d) / st.zeroth[c]);

  BaumWelchStats eq = BaumWelchStats::Zero(4, 3);
  eq.zeroth.setConstant(8.0);
  eq.first.setConstant(8.0 * 2.0);
  const SpeakerModel mid = MapAdapt(eq, ubm, 8.0);
  for (int c = 0; c < 4; ++c)
    for (int d = 0; d < 3; ++d)
      CHECK(mid.gmm.means()(c, d) == (2.0 + ubm.gmm.means()(c, d)) / 2.0);

  CHECK(mid.gmm.weights() == ubm.gmm.weights());
  CHECK(mid.gmm.variances() == ubm.gmm.variances());
  CHECK(ThrownKind([&] { MapAdapt(st, ubm, -1.0); }) == K(ErrorKind::kNegativeRelevance));
  CHECK(ThrownKind([&] { MapAdapt(BaumWelchStats::Zero(3, 3), ubm, 1.0); }) ==
        K(ErrorKind::kDimensionMismatch));
}

TEST_CASE("MAP adapted means lie on the shrinkage segment") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> r_dist(0.0, 40.0);
  std::uniform_real_distribution<double> n_dist(1e-6, 50.0);
  std::normal_distribution<double> g(0.0, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Ubm ubm{RandomGmm(&rng, 3, 2)};
    BaumWelchStats st = BaumWelchStats::Zero(3, 2);
    for (int c = 0; c < 3; ++c) {
      st.zeroth[c] = n_dist(rng);
      for (int d = 0; d < 2; ++d) st.first(c, d) = st.zeroth[c] * g(rng);
    }
    const double r = r_dist(rng);
    const SpeakerModel m = MapAdapt(st, ubm, r);
    for (int c = 0; c < 3; ++c)
      for (int d = 0; d < 2; ++d) {
        const double ml = st.first(c, d) / st.zeroth[c];
        const double prior = ubm.gmm.means()(c, d);
        CHECK(m.gmm.means()(c, d) >= std::min(ml, prior));
        CHECK(m.gmm.means()(c, d) <= std::max(ml, prior));
      }
    // More data of the same kind moves every mean strictly towards ML.
    BaumWelchStats more = st;
    more.zeroth *= 3.0;
    more.first *= 3.0;
    if (r > 0.0) {
      const SpeakerModel m3 = MapAdapt(more, ubm, r);
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 2; ++d) {
          const double ml = st.first(c, d) / st.zeroth[c];
          if (std::abs(ml - ubm.gmm.means()(c, d)) < 1e-9) continue;
          CHECK(std::abs(m3.gmm.means()(c, d) - ml) < std::abs(m.gmm.means()(c, d) - ml));
        }
    }
  }
}

TEST_CASE("supervectors") {
  Eigen::VectorXd w(2);
  w << 0.5, 0.5;
  RowMatrix mu(2, 2), var = RowMatrix::Ones(2, 2);
  mu << 1, 2, 3, 4;
  var(1, 0) = 7;
  const Ubm ubm{DiagonalGmm(w, mu, var)};
  const Supervector sv = BuildSupervector(ubm);
  REQUIRE(sv.size() == 4);
  CHECK(sv.values == Eigen::Vector4d(1, 2, 3, 4));
  CHECK(VarianceSupervector(ubm) == Eigen::Vector4d(1, 1, 7, 1));
  const SpeakerModel sm{"x", ubm.gmm};
  CHECK(BuildSupervector(sm).values == sv.values);

  Eigen::VectorXd w_big = Eigen::VectorXd::Constant(1024, 1.0 / 1024);
  w_big[0] += 1.0 - w_big.sum();
  const DiagonalGmm big(w_big, RowMatrix::Zero(1024, 13), RowMatrix::Ones(1024, 13));
  CHECK(BuildSupervector(big).size() == 13312);
}
