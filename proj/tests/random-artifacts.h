// tests/random-artifacts.h

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

#ifndef VOXID_TESTS_RANDOM_ARTIFACTS_H_
#define VOXID_TESTS_RANDOM_ARTIFACTS_H_

#include <algorithm>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "test-util.h"
#include "voxid/evaluation.h"

namespace voxid::testing {

inline SpeakerRegistry RandomRegistry(std::mt19937_64 *rng, bool with_ivectors) {
  SpeakerRegistry reg;
  std::normal_distribution<double> g(0.0, 1.0);
  for (int i = 0; i < 4; ++i) {
    std::optional<IVector> iv;
    if (with_ivectors) {
      Eigen::VectorXd w(5);
      for (auto &v : w) v = g(*rng);
      iv = IVector{w};
    }
    const std::string id = "spk" + std::to_string(i);
    reg.Add(RegistryEntry{id, i % 3, SpeakerModel{id, RandomGmm(rng, 3, 2)}, iv,
                          i % 2 ? "Hindi" : "Oriya, \"quoted\"", i == 3});
  }
  return reg;
}

inline EvalReport RandomReport(std::mt19937_64 *rng, ScoringMode mode) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<TrialOutcome> trials;
  for (int t = 0; t < 6; ++t) {
    TrialOutcome o;
    o.trial_id = "t" + std::to_string(t);
    o.description = t == 0 ? "comma, in description" : "plain";
    if (t != 5) o.true_speaker_ids = {"s" + std::to_string(t % 3)};
    if (t == 4) o.true_speaker_ids.push_back("s2");
    for (int s = 0; s < 3; ++s)
      o.ranked.push_back(ScoredSpeaker{"s" + std::to_string(s), s, g(*rng), g(*rng), Decision::kReject});
    std::stable_sort(o.ranked.begin(), o.ranked.end(),
                     [](const ScoredSpeaker &a, const ScoredSpeaker &b) { return a.score > b.score; });
    trials.push_back(std::move(o));
  }
  const std::vector<double> th = mode == ScoringMode::kCosine ? std::vector<double>{0.5, 0.8}
                                                              : std::vector<double>{1.0, 1.5};
  return BuildReport("rand", mode, th, std::move(trials));
}

}  // namespace voxid::testing

#endif  // VOXID_TESTS_RANDOM_ARTIFACTS_H_
