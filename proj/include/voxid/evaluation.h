// include/voxid/evaluation.h

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

#ifndef VOXID_EVALUATION_H_
#define VOXID_EVALUATION_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "voxid/scoring.h"
#include "voxid/synthetic.h"

namespace voxid {

struct RegistryEntry {
  std::string speaker_id;
  int cluster_id = 0;
  SpeakerModel model;
  std::optional<IVector> ivector;
  std::string language_tag;
  bool is_impostor = false;

  bool operator==(const RegistryEntry &other) const = default;
};

/// Enrolled speakers.  Clusters are metadata only: every identification
/// scores against all entries.  Either every entry carries an i-vector
/// (cosine scoring available) or none does.
class SpeakerRegistry {
 public:
  /// Throws DuplicateSpeakerId, ModeMismatch (i-vector presence differs from
  /// the existing entries), DimensionMismatch (model or i-vector shape).
  void Add(RegistryEntry entry);

  const std::vector<RegistryEntry> &entries() const { return entries_; }
  const RegistryEntry *Find(const std::string &speaker_id) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  bool HasIvectors() const { return !entries_.empty() && entries_.front().ivector.has_value(); }

  bool operator==(const SpeakerRegistry &other) const = default;

 private:
  std::vector<RegistryEntry> entries_;
};

/// One test input.  LLR scoring reads `features`, cosine scoring `ivector`.
/// A conversation carries several true speakers.
struct Trial {
  std::string trial_id;
  std::optional<FeatureMatrix> features;
  std::optional<IVector> ivector;
  std::vector<std::string> true_speaker_ids;
  std::string description;
};

/// Where the z-normalisation statistics come from in LLR mode.
struct CohortPolicy {
  enum class Source { kPerTrial, kFixed };
  /// kPerTrial: the trial's raw scores against every registry entry.
  Source source = Source::kPerTrial;
  CohortStats fixed;
};

struct ScoredSpeaker {
  std::string speaker_id;
  int cluster_id = 0;
  double raw_score = 0.0;
  /// Normalised LLR, or the cosine itself.
  double score = 0.0;
  Decision decision = Decision::kReject;

  bool operator==(const ScoredSpeaker &other) const = default;
};

struct Identification {
  /// Descending by score; ties by ascending speaker_id.
  std::vector<ScoredSpeaker> ranked;
  std::optional<CohortStats> cohort;
};

/// Scores a trial against every registry entry.  `ubm` is required in LLR
/// mode and ignored in cosine mode.  Throws EmptyRegistry, ModeMismatch.
Identification Identify(const Trial &trial, const SpeakerRegistry &registry,
                        const Ubm *ubm, const DecisionPolicy &policy,
                        const CohortPolicy &cohort = {});

/// FAR(t) = #{nontarget > t} / n_nontarget, FRR(t) = #{target <= t} / n_target.
/// Over the sorted union of scores, picks the t minimising |FAR - FRR| (lowest
/// t on ties) and returns (FAR + FRR) / 2.  Throws EmptyScoreSet.
double ComputeEer(std::span<const double> target_scores,
                  std::span<const double> nontarget_scores);

/// (FAR, FRR) along increasing threshold: first the point below every score,
/// (1, 0), then one point per distinct score.
std::vector<std::pair<double, double>> DetPoints(std::span<const double> target_scores,
                                                 std::span<const double> nontarget_scores);

struct TrialOutcome {
  std::string trial_id;
  std::string description;
  std::vector<std::string> true_speaker_ids;
  std::vector<ScoredSpeaker> ranked;
  bool false_accept = false;
  bool false_reject = false;

  bool operator==(const TrialOutcome &other) const = default;
};

struct ThresholdPoint {
  double threshold = 0.0;
  int false_accepts = 0;
  int false_rejects = 0;

  bool operator==(const ThresholdPoint &other) const = default;
};

struct EvalReport {
  std::string name;
  ScoringMode mode = ScoringMode::kLlr;
  double threshold = 0.0;
  std::vector<TrialOutcome> trials;
  int false_accepts = 0;
  int false_rejects = 0;
  double eer = 0.0;
  double top1_accuracy = 0.0;
  std::vector<ThresholdPoint> threshold_study;

  bool operator==(const EvalReport &other) const = default;
};

/// Re-decides every ranked entry at `threshold` and counts trials with a
/// false accept (some accepted speaker is not a true speaker) and with a
/// false reject (some true speaker in the list is not accepted).
ThresholdPoint CountErrors(std::span<const TrialOutcome> trials, double threshold);

/// Assembles a report: decisions and counts at thresholds[0], the study at
/// every threshold, EER over true-speaker vs other scores (0 when either set
/// is empty) and top-1 accuracy over trials whose true speakers are listed.
EvalReport BuildReport(std::string name, ScoringMode mode,
                       std::span<const double> thresholds,
                       std::vector<TrialOutcome> trials);

struct ExperimentSpeaker {
  std::string id;
  int cluster = 0;
  bool impostor = false;
  std::string language;
};

struct ExperimentTrial {
  /// One id for a monologue, several for a conversation.
  std::vector<std::string> speakers;
  std::string description;
  std::string language;
};

/// A synthetic identification experiment: a population, a registry built
/// from it, and the trials to run.
struct ExperimentConfig {
  std::string name = "experiment";
  std::uint64_t seed = 0;
  ScoringMode mode = ScoringMode::kLlr;
  std::vector<double> thresholds{1.0};
  SyntheticWorldConfig world;
  GmmTrainingConfig ubm;
  double relevance = 16.0;
  int tv_rank = 8;
  int tv_iterations = 10;
  double enroll_seconds = 30.0;
  double test_seconds = 10.0;
  int num_clusters = 1;
  std::vector<ExperimentSpeaker> speakers;
  std::vector<ExperimentTrial> trials;
  /// Adds this many monologue trials for every non-impostor speaker.
  int self_trials_per_speaker = 0;

  void Validate() const;  // throws InvalidExperimentConfig
};

/// Parses the JSON experiment description (see docs/formats.md).  Throws
/// InvalidExperimentConfig.
ExperimentConfig ParseExperimentConfig(const std::string &json_text);
ExperimentConfig LoadExperimentConfig(const std::filesystem::path &path);

/// Everything built while running an experiment, for callers that want more
/// than the report.
struct ExperimentArtifacts {
  std::optional<Ubm> ubm;
  std::optional<TotalVariabilityModel> tv;
  SpeakerRegistry registry;
};

EvalReport RunExperiment(const ExperimentConfig &config,
                         ExperimentArtifacts *artifacts = nullptr);

}  // namespace voxid

#endif  // VOXID_EVALUATION_H_
