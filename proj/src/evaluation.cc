// src/evaluation.cc

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

#include "voxid/evaluation.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "voxid/voxid-error.h"

namespace voxid {

namespace {

bool Contains(const std::vector<std::string> &ids, const std::string &id) {
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

std::string TrialId(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "t%03zu", index + 1);
  return buf;
}

[[noreturn]] void BadExperiment(const std::string &what) {
  Fail(ErrorKind::kInvalidExperimentConfig, what);
}

void CheckKeys(const nlohmann::json &obj, const std::set<std::string> &allowed,
               const std::string &where) {
  if (!obj.is_object()) BadExperiment(where + " must be a JSON object");
  for (const auto &item : obj.items())
    if (!allowed.count(item.key()))
      BadExperiment("unknown key '" + item.key() + "' in " + where);
}

template <typename T>
void Read(const nlohmann::json &obj, const char *key, T *out) {
  if (!obj.contains(key)) return;
  try {
    *out = obj.at(key).get<T>();
  } catch (const nlohmann::json::exception &e) {
    BadExperiment(std::string("bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

void SpeakerRegistry::Add(RegistryEntry entry) {
  if (Find(entry.speaker_id))
    Fail(ErrorKind::kDuplicateSpeakerId,
         "speaker '" + entry.speaker_id + "' is already enrolled");
  if (!entries_.empty()) {
    const RegistryEntry &first = entries_.front();
    if (first.ivector.has_value() != entry.ivector.has_value())
      Fail(ErrorKind::kModeMismatch,
           "registry entries must all have i-vectors or all lack them");
    if (entry.model.gmm.NumComponents() != first.model.gmm.NumComponents() ||
        entry.model.gmm.Dim() != first.model.gmm.Dim())
      Fail(ErrorKind::kDimensionMismatch,
           "speaker '" + entry.speaker_id + "' has a differently shaped model");
    if (entry.ivector && entry.ivector->size() != first.ivector->size())
      Fail(ErrorKind::kDimensionMismatch,
           "speaker '" + entry.speaker_id + "' has a differently sized i-vector");
  }
  entries_.push_back(std::move(entry));
}

const RegistryEntry *SpeakerRegistry::Find(const std::string &speaker_id) const {
  for (const auto &e : entries_)
    if (e.speaker_id == speaker_id) return &e;
  return nullptr;
}

Identification Identify(const Trial &trial, const SpeakerRegistry &registry,
                        const Ubm *ubm, const DecisionPolicy &policy,
                        const CohortPolicy &cohort) {
  policy.Validate();
  if (registry.empty()) Fail(ErrorKind::kEmptyRegistry, "no speakers enrolled");

  // Scores are produced in speaker-id order so the cohort statistics (and
  // hence everything downstream) do not depend on registry order.
  std::vector<const RegistryEntry *> order;
  for (const auto &e : registry.entries()) order.push_back(&e);
  std::sort(order.begin(), order.end(),
            [](const RegistryEntry *a, const RegistryEntry *b) {
              return a->speaker_id < b->speaker_id;
            });

  Identification result;
  std::vector<double> raw(order.size());
  if (policy.mode == ScoringMode::kLlr) {
    if (!trial.features)
      Fail(ErrorKind::kModeMismatch, "LLR scoring needs test features");
    if (!ubm) Fail(ErrorKind::kModeMismatch, "LLR scoring needs the UBM");
    const double ubm_ll = SequenceLogLikelihood(*trial.features, ubm->gmm);
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (order[i]->model.gmm.Dim() != ubm->Dim())
        Fail(ErrorKind::kDimensionMismatch, "speaker model and UBM dimensions differ");
      raw[i] = SequenceLogLikelihood(*trial.features, order[i]->model.gmm) - ubm_ll;
    }
    result.cohort = cohort.source == CohortPolicy::Source::kFixed
                        ? cohort.fixed
                        : CohortFromScores(raw);
  } else {
    if (!trial.ivector)
      Fail(ErrorKind::kModeMismatch, "cosine scoring needs a test i-vector");
    if (!registry.HasIvectors())
      Fail(ErrorKind::kModeMismatch, "registry has no i-vectors for cosine scoring");
    for (std::size_t i = 0; i < order.size(); ++i)
      raw[i] = CosineScore(*order[i]->ivector, *trial.ivector);
  }

  for (std::size_t i = 0; i < order.size(); ++i) {
    ScoredSpeaker s;
    s.speaker_id = order[i]->speaker_id;
    s.cluster_id = order[i]->cluster_id;
    s.raw_score = raw[i];
    s.score = result.cohort ? NormalizeScore(raw[i], *result.cohort) : raw[i];
    s.decision = Decide(s.score, policy);
    result.ranked.push_back(std::move(s));
  }
  std::stable_sort(result.ranked.begin(), result.ranked.end(),
                   [](const ScoredSpeaker &a, const ScoredSpeaker &b) {
                     return a.score > b.score;
                   });
  return result;
}

double ComputeEer(std::span<const double> target_scores,
                  std::span<const double> nontarget_scores) {
  if (target_scores.empty() || nontarget_scores.empty())
    Fail(ErrorKind::kEmptyScoreSet, "EER needs target and non-target scores");
  std::vector<double> targets(target_scores.begin(), target_scores.end());
  std::vector<double> nontargets(nontarget_scores.begin(), nontarget_scores.end());
  std::sort(targets.begin(), targets.end());
  std::sort(nontargets.begin(), nontargets.end());
  std::vector<double> candidates = targets;
  candidates.insert(candidates.end(), nontargets.begin(), nontargets.end());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  const double n_target = static_cast<double>(targets.size());
  const double n_nontarget = static_cast<double>(nontargets.size());
  double best_gap = std::numeric_limits<double>::infinity();
  double eer = 0.0;
  for (double theta : candidates) {
    const auto n_fr = std::upper_bound(targets.begin(), targets.end(), theta) - targets.begin();
    const auto n_fa = nontargets.end() -
                      std::upper_bound(nontargets.begin(), nontargets.end(), theta);
    const double far = static_cast<double>(n_fa) / n_nontarget;
    const double frr = static_cast<double>(n_fr) / n_target;
    const double gap = std::abs(far - frr);
    if (gap < best_gap) {  // strict: the lowest threshold wins ties
      best_gap = gap;
      eer = (far + frr) / 2.0;
    }
  }
  return eer;
}

std::vector<std::pair<double, double>> DetPoints(std::span<const double> target_scores,
                                                 std::span<const double> nontarget_scores) {
  if (target_scores.empty() || nontarget_scores.empty())
    Fail(ErrorKind::kEmptyScoreSet, "DET needs target and non-target scores");
  std::vector<double> targets(target_scores.begin(), target_scores.end());
  std::vector<double> nontargets(nontarget_scores.begin(), nontarget_scores.end());
  std::sort(targets.begin(), targets.end());
  std::sort(nontargets.begin(), nontargets.end());
  std::vector<double> candidates = targets;
  candidates.insert(candidates.end(), nontargets.begin(), nontargets.end());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  std::vector<std::pair<double, double>> points;
  points.reserve(candidates.size() + 1);
  points.emplace_back(1.0, 0.0);
  for (double theta : candidates) {
    const auto n_fr = std::upper_bound(targets.begin(), targets.end(), theta) - targets.begin();
    const auto n_fa = nontargets.end() -
                      std::upper_bound(nontargets.begin(), nontargets.end(), theta);
    points.emplace_back(static_cast<double>(n_fa) / nontargets.size(),
                        static_cast<double>(n_fr) / targets.size());
  }
  return points;
}

ThresholdPoint CountErrors(std::span<const TrialOutcome> trials, double threshold) {
  ThresholdPoint point{threshold, 0, 0};
  for (const auto &trial : trials) {
    bool fa = false, fr = false;
    for (const auto &s : trial.ranked) {
      const bool accepted = s.score > threshold;
      const bool is_true = Contains(trial.true_speaker_ids, s.speaker_id);
      if (accepted && !is_true) fa = true;
      if (!accepted && is_true) fr = true;
    }
    point.false_accepts += fa;
    point.false_rejects += fr;
  }
  return point;
}

EvalReport BuildReport(std::string name, ScoringMode mode,
                       std::span<const double> thresholds,
                       std::vector<TrialOutcome> trials) {
  if (thresholds.empty()) Fail(ErrorKind::kInvalidConfig, "a report needs a threshold");
  EvalReport report;
  report.name = std::move(name);
  report.mode = mode;
  report.threshold = thresholds.front();
  report.trials = std::move(trials);

  std::vector<double> targets, nontargets;
  int scored_trials = 0, top1_hits = 0;
  for (auto &trial : report.trials) {
    bool any_true_listed = false;
    trial.false_accept = trial.false_reject = false;
    for (auto &s : trial.ranked) {
      s.decision = s.score > report.threshold ? Decision::kAccept : Decision::kReject;
      const bool is_true = Contains(trial.true_speaker_ids, s.speaker_id);
      any_true_listed |= is_true;
      (is_true ? targets : nontargets).push_back(s.score);
      if (s.decision == Decision::kAccept && !is_true) trial.false_accept = true;
      if (s.decision == Decision::kReject && is_true) trial.false_reject = true;
    }
    if (any_true_listed) {
      ++scored_trials;
      if (Contains(trial.true_speaker_ids, trial.ranked.front().speaker_id)) ++top1_hits;
    }
    report.false_accepts += trial.false_accept;
    report.false_rejects += trial.false_reject;
  }
  report.top1_accuracy =
      scored_trials > 0 ? static_cast<double>(top1_hits) / scored_trials : 0.0;
  report.eer = (targets.empty() || nontargets.empty()) ? 0.0 : ComputeEer(targets, nontargets);
  for (double t : thresholds) report.threshold_study.push_back(CountErrors(report.trials, t));
  return report;
}

void ExperimentConfig::Validate() const {
  if (name.empty()) BadExperiment("name must not be empty");
  if (thresholds.empty()) BadExperiment("at least one threshold is required");
  for (double t : thresholds) {
    if (!std::isfinite(t)) BadExperiment("thresholds must be finite");
    if (mode == ScoringMode::kCosine && (t < -1.0 || t > 1.0))
      BadExperiment("cosine thresholds must lie in [-1, 1]");
  }
  try {
    world.Validate();
    ubm.Validate();
  } catch (const VoxError &e) {
    BadExperiment(e.what());
  }
  if (!(relevance >= 0.0)) BadExperiment("relevance must be non-negative");
  if (mode == ScoringMode::kCosine) {
    const int sv_dim = ubm.num_components * world.feature_dim;
    if (tv_rank < 1 || tv_rank >= sv_dim)
      BadExperiment("tv rank must lie in [1, C k - 1]");
    if (tv_iterations < 0) BadExperiment("tv iterations must be non-negative");
  }
  if (!(enroll_seconds > 0.0) || !(test_seconds > 0.0))
    BadExperiment("enrollment and test durations must be positive");
  if (num_clusters < 1) BadExperiment("num_clusters must be positive");
  if (speakers.empty()) BadExperiment("no speakers to enroll");
  std::set<std::string> ids;
  for (const auto &s : speakers) {
    if (s.id.empty()) BadExperiment("speaker ids must not be empty");
    if (!ids.insert(s.id).second) BadExperiment("duplicate speaker id '" + s.id + "'");
    if (s.cluster < 0 || s.cluster >= num_clusters)
      BadExperiment("speaker '" + s.id + "' has cluster outside [0, num_clusters)");
  }
  for (const auto &t : trials)
    if (t.speakers.empty()) BadExperiment("every trial needs at least one speaker");
  if (self_trials_per_speaker < 0)
    BadExperiment("self_trials_per_speaker must be non-negative");
}

ExperimentConfig ParseExperimentConfig(const std::string &json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception &e) {
    BadExperiment(std::string("not valid JSON: ") + e.what());
  }
  CheckKeys(doc,
            {"name", "seed", "mode", "thresholds", "world", "ubm", "relevance", "tv",
             "enroll_seconds", "test_seconds", "num_clusters", "speakers", "trials",
             "self_trials_per_speaker"},
            "experiment");
  ExperimentConfig cfg;
  Read(doc, "name", &cfg.name);
  Read(doc, "seed", &cfg.seed);
  if (doc.contains("mode")) {
    std::string mode;
    Read(doc, "mode", &mode);
    if (mode == "llr") cfg.mode = ScoringMode::kLlr;
    else if (mode == "cosine") cfg.mode = ScoringMode::kCosine;
    else BadExperiment("mode must be 'llr' or 'cosine'");
  }
  Read(doc, "thresholds", &cfg.thresholds);
  Read(doc, "relevance", &cfg.relevance);
  Read(doc, "enroll_seconds", &cfg.enroll_seconds);
  Read(doc, "test_seconds", &cfg.test_seconds);
  Read(doc, "num_clusters", &cfg.num_clusters);
  Read(doc, "self_trials_per_speaker", &cfg.self_trials_per_speaker);

  cfg.ubm.num_components = cfg.world.num_components;
  if (doc.contains("world")) {
    const auto &w = doc.at("world");
    CheckKeys(w,
              {"feature_dim", "num_components", "frames_per_second", "component_spread",
               "speaker_spread", "speaker_subspace_rank", "residual_fraction",
               "session_spread", "background_speakers", "background_seconds"},
              "world");
    Read(w, "feature_dim", &cfg.world.feature_dim);
    Read(w, "num_components", &cfg.world.num_components);
    Read(w, "frames_per_second", &cfg.world.frames_per_second);
    Read(w, "component_spread", &cfg.world.component_spread);
    Read(w, "speaker_spread", &cfg.world.speaker_spread);
    Read(w, "speaker_subspace_rank", &cfg.world.speaker_subspace_rank);
    Read(w, "residual_fraction", &cfg.world.residual_fraction);
    Read(w, "session_spread", &cfg.world.session_spread);
    Read(w, "background_speakers", &cfg.world.background_speakers);
    Read(w, "background_seconds", &cfg.world.background_seconds);
    cfg.ubm.num_components = cfg.world.num_components;
  }
  if (doc.contains("ubm")) {
    const auto &u = doc.at("ubm");
    CheckKeys(u, {"num_components", "max_iterations", "convergence_tol", "variance_floor"},
              "ubm");
    Read(u, "num_components", &cfg.ubm.num_components);
    Read(u, "max_iterations", &cfg.ubm.max_iterations);
    Read(u, "convergence_tol", &cfg.ubm.convergence_tol);
    Read(u, "variance_floor", &cfg.ubm.variance_floor);
  }
  if (doc.contains("tv")) {
    const auto &t = doc.at("tv");
    CheckKeys(t, {"rank", "iterations"}, "tv");
    Read(t, "rank", &cfg.tv_rank);
    Read(t, "iterations", &cfg.tv_iterations);
  }
  if (doc.contains("speakers")) {
    const auto &list = doc.at("speakers");
    if (!list.is_array()) BadExperiment("speakers must be an array");
    for (const auto &s : list) {
      CheckKeys(s, {"id", "cluster", "impostor", "language"}, "speaker");
      if (!s.contains("id")) BadExperiment("every speaker needs an id");
      ExperimentSpeaker sp;
      Read(s, "id", &sp.id);
      Read(s, "cluster", &sp.cluster);
      Read(s, "impostor", &sp.impostor);
      Read(s, "language", &sp.language);
      cfg.speakers.push_back(std::move(sp));
    }
  }
  if (doc.contains("trials")) {
    const auto &list = doc.at("trials");
    if (!list.is_array()) BadExperiment("trials must be an array");
    for (const auto &t : list) {
      CheckKeys(t, {"speakers", "description", "language"}, "trial");
      ExperimentTrial tr;
      Read(t, "speakers", &tr.speakers);
      Read(t, "description", &tr.description);
      Read(t, "language", &tr.language);
      cfg.trials.push_back(std::move(tr));
    }
  }
  cfg.Validate();
  return cfg;
}

ExperimentConfig LoadExperimentConfig(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorKind::kIoFailure, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseExperimentConfig(buf.str());
}

EvalReport RunExperiment(const ExperimentConfig &config, ExperimentArtifacts *artifacts) {
  config.Validate();
  const SyntheticWorld world(config.world, config.seed);

  // Background population: UBM training data, and TV training data in
  // cosine mode.
  std::vector<Utterance> background;
  for (int i = 0; i < config.world.background_speakers; ++i) {
    const std::string id = SyntheticWorld::BackgroundSpeakerId(i);
    background.push_back(
        {id, world.SampleUtterance(id, "background", config.world.background_seconds)});
  }
  GmmTrainingConfig ubm_config = config.ubm;
  ubm_config.rng_seed = DeriveSeed(config.seed, "ubm");
  const Ubm ubm = TrainUbm(background, ubm_config);

  std::optional<TotalVariabilityModel> tv;
  if (config.mode == ScoringMode::kCosine) {
    std::vector<BaumWelchStats> tv_stats;
    for (const auto &utt : background) tv_stats.push_back(AccumulateStats(utt.features, ubm));
    tv = TrainTv(tv_stats,
                 InitTv(ubm, static_cast<std::size_t>(config.tv_rank),
                        DeriveSeed(config.seed, "tv")),
                 config.tv_iterations);
  }

  SpeakerRegistry registry;
  for (const auto &sp : config.speakers) {
    const FeatureMatrix enroll = world.SampleUtterance(sp.id, "enroll", config.enroll_seconds);
    const BaumWelchStats stats = AccumulateStats(enroll, ubm);
    RegistryEntry entry{sp.id, sp.cluster, MapAdapt(stats, ubm, config.relevance, sp.id),
                        std::nullopt, sp.language, sp.impostor};
    if (tv) entry.ivector = ExtractIvector(stats, *tv);
    registry.Add(std::move(entry));
  }

  std::vector<ExperimentTrial> trials = config.trials;
  for (const auto &sp : config.speakers) {
    if (sp.impostor) continue;
    for (int n = 0; n < config.self_trials_per_speaker; ++n)
      trials.push_back({{sp.id}, "self trial " + std::to_string(n + 1) + " of " + sp.id,
                        sp.language});
  }

  const DecisionPolicy policy{config.thresholds.front(), config.mode};
  std::vector<TrialOutcome> outcomes;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const ExperimentTrial &spec = trials[i];
    Trial trial;
    trial.trial_id = TrialId(i);
    trial.description = spec.description;
    std::optional<FeatureMatrix> features;
    for (const auto &id : spec.speakers) {
      // Keyed by trial index so repeated tests of a speaker are new sessions.
      FeatureMatrix part = world.SampleUtterance(id, "test:" + trial.trial_id, config.test_seconds);
      features = features ? features->Concatenate(part) : std::move(part);
    }
    for (const auto &id : spec.speakers)
      if (!Contains(trial.true_speaker_ids, id)) trial.true_speaker_ids.push_back(id);
    if (tv) trial.ivector = ExtractIvector(AccumulateStats(*features, ubm), *tv);
    trial.features = std::move(features);

    Identification ident = Identify(trial, registry, &ubm, policy);
    outcomes.push_back({trial.trial_id, trial.description, trial.true_speaker_ids,
                        std::move(ident.ranked), false, false});
  }

  if (artifacts) {
    artifacts->ubm = ubm;
    artifacts->tv = tv;
    artifacts->registry = registry;
  }
  return BuildReport(config.name, config.mode, config.thresholds, std::move(outcomes));
}

}  // namespace voxid
