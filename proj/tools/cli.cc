// tools/cli.cc

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

#include "cli.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "voxid/audio-io.h"
#include "voxid/evaluation.h"
#include "voxid/model-store.h"
#include "voxid/voxid-error.h"

namespace voxid {

namespace {

namespace fs = std::filesystem;

std::string Trim(const std::string &s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void BadValue(const std::string &key, const std::string &value) {
  Fail(ErrorKind::kInvalidConfig, "bad value '" + value + "' for '" + key + "'");
}

template <typename T>
T ParseNumber(const std::string &key, const std::string &value) {
  T out{};
  const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size() || value.empty())
    BadValue(key, value);
  return out;
}

bool ParseBool(const std::string &key, const std::string &value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  BadValue(key, value);
}

std::string Fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

int ExitCode(ErrorKind kind) {
  switch (CategoryOf(kind)) {
    case ErrorCategory::kDomain: return 1;
    case ErrorCategory::kInputData: return 2;
    case ErrorCategory::kUsage: return 64;
  }
  return 1;
}

FeatureMatrix LoadAndConcatenate(const std::vector<std::string> &paths) {
  if (paths.empty()) Fail(ErrorKind::kUsage, "no feature files given");
  std::optional<FeatureMatrix> all;
  for (const auto &p : paths) {
    FeatureMatrix f = LoadFeatures(p);
    if (all && all->Dim() != f.Dim())
      Fail(ErrorKind::kDimensionMismatch, p + " has a different feature dimension");
    all = all ? all->Concatenate(f) : std::move(f);
  }
  return std::move(*all);
}

// Settings gathered from flags, applied after the config file.
struct Overrides {
  std::map<std::string, std::string> values;
  void Add(CLI::App *app, const std::string &flag, const std::string &key,
           const std::string &help) {
    app->add_option_function<std::string>(
        flag, [this, key](const std::string &v) { values[key] = v; }, help);
  }
};

struct Context {
  std::ostream &out;
  std::ostream &err;
  bool verbose = false;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  Overrides overrides;

  CliConfig resolved;

  /// Merges the config file and flag overrides.  Any invariant violation is
  /// reported as InvalidConfig, naming the original error.
  void Resolve() {
    CliConfig cfg;
    if (!config_path.empty()) cfg = ApplySettings(cfg, ReadKeyValueFile(config_path));
    cfg = ApplySettings(cfg, overrides.values);
    if (seed) cfg.seed = *seed;
    try {
      cfg.Validate();
    } catch (const VoxError &e) {
      if (CategoryOf(e.kind()) != ErrorCategory::kDomain) throw;
      Fail(ErrorKind::kInvalidConfig, e.what());
    }
    resolved = cfg;
  }
  const CliConfig &Config() const { return resolved; }
  void Log(const std::string &msg) const {
    if (verbose) err << msg << "\n";
  }
};

// features
struct FeaturesArgs {
  std::vector<std::string> inputs;
  std::string out_dir;
};

int RunFeatures(const Context &ctx, const FeaturesArgs &a) {
  if (a.inputs.empty()) Fail(ErrorKind::kUsage, "features needs at least one audio file");
  const CliConfig cfg = ctx.Config();
  std::set<std::string> stems;
  for (const auto &in : a.inputs)
    if (!stems.insert(fs::path(in).stem().string()).second)
      Fail(ErrorKind::kUsage, "two inputs share the output name " +
                                  fs::path(in).stem().string());
  std::error_code ec;
  fs::create_directories(a.out_dir, ec);
  int status = 0;
  for (const auto &in : a.inputs) {
    try {
      const AudioClip clip = ReadWav(in);
      const FeatureMatrix features = ExtractMfcc(clip, cfg.mfcc);
      const fs::path out = fs::path(a.out_dir) / (fs::path(in).stem().string() + ".voxf");
      SaveFeatures(features, out);
      ctx.out << in << " -> " << out.string() << " (" << features.NumFrames()
              << " frames x " << features.Dim() << ")\n";
    } catch (const VoxError &e) {
      ctx.err << "error: " << in << ": " << e.what() << "\n";
      if (status == 0) status = ExitCode(e.kind());
    }
  }
  return status;
}

// train-ubm
struct TrainUbmArgs {
  std::vector<std::string> inputs;
  std::string out;
};

int RunTrainUbm(const Context &ctx, const TrainUbmArgs &a) {
  if (a.inputs.empty()) Fail(ErrorKind::kUsage, "train-ubm needs feature files");
  CliConfig cfg = ctx.Config();
  cfg.gmm.rng_seed = cfg.seed;
  std::vector<Utterance> utts;
  for (const auto &in : a.inputs) utts.push_back({in, LoadFeatures(in)});
  EmTrace trace;
  const Ubm ubm = TrainUbm(std::move(utts), cfg.gmm, &trace);
  for (std::size_t i = 0; i < trace.log_likelihoods.size(); ++i)
    ctx.out << "iteration " << i << " log-likelihood "
            << FormatReal(trace.log_likelihoods[i]) << "\n";
  ctx.out << (trace.converged ? "converged" : "stopped") << " after " << trace.iterations
          << " iterations";
  if (trace.reseeded_components > 0)
    ctx.out << ", " << trace.reseeded_components << " components re-seeded";
  ctx.out << "\n";
  SaveUbm(ubm, a.out);
  return 0;
}

// enroll
struct EnrollArgs {
  std::string speaker;
  std::vector<std::string> inputs;
  std::string ubm;
  std::string tv;
  std::string registry;
  std::string out;
  int cluster = 0;
  std::string language;
  bool impostor = false;
};

int RunEnroll(const Context &ctx, const EnrollArgs &a) {
  if (a.speaker.empty()) Fail(ErrorKind::kUsage, "enroll needs --speaker");
  const CliConfig cfg = ctx.Config();
  const Ubm ubm = LoadUbm(a.ubm);
  const FeatureMatrix features = LoadAndConcatenate(a.inputs);
  CheckFeatures(features, ubm.Dim());
  SpeakerRegistry registry;
  if (fs::exists(a.registry)) registry = LoadRegistry(a.registry);
  const BaumWelchStats stats = AccumulateStats(features, ubm);
  RegistryEntry entry{a.speaker, a.cluster, MapAdapt(stats, ubm, cfg.relevance, a.speaker),
                      std::nullopt, a.language, a.impostor};
  if (!a.tv.empty()) entry.ivector = ExtractIvector(stats, LoadTvModel(a.tv));
  registry.Add(std::move(entry));
  SaveRegistry(registry, a.out.empty() ? a.registry : a.out);
  ctx.out << "enrolled " << a.speaker << " in cluster " << a.cluster << " ("
          << features.NumFrames() << " frames); registry has " << registry.size()
          << " speakers\n";
  return 0;
}

// train-tv
struct TrainTvArgs {
  std::vector<std::string> inputs;
  std::string ubm;
  std::string out;
};

int RunTrainTv(const Context &ctx, const TrainTvArgs &a) {
  if (a.inputs.empty()) Fail(ErrorKind::kUsage, "train-tv needs feature files");
  const CliConfig cfg = ctx.Config();
  const Ubm ubm = LoadUbm(a.ubm);
  TotalVariabilityModel tv = InitTv(ubm, static_cast<std::size_t>(cfg.tv_rank), cfg.seed);
  std::vector<BaumWelchStats> stats;
  for (const auto &in : a.inputs) stats.push_back(AccumulateStats(LoadFeatures(in), ubm));
  TvTrace trace;
  tv = TrainTv(stats, tv, cfg.tv_iterations, &trace);
  for (std::size_t i = 0; i < trace.mean_ivector_sq_norm.size(); ++i)
    ctx.out << "iteration " << i + 1 << " mean |w|^2 "
            << FormatReal(trace.mean_ivector_sq_norm[i]) << "\n";
  SaveTvModel(tv, a.out);
  return 0;
}

// ivector
struct IvectorArgs {
  std::vector<std::string> inputs;
  std::string ubm;
  std::string tv;
  std::string out;
};

int RunIvector(const Context &ctx, const IvectorArgs &a) {
  const Ubm ubm = LoadUbm(a.ubm);
  const TotalVariabilityModel tv = LoadTvModel(a.tv);
  const IVector iv = ExtractIvector(AccumulateStats(LoadAndConcatenate(a.inputs), ubm), tv);
  SaveIvector(iv, a.out);
  ctx.out << "i-vector of dimension " << iv.size() << " written to " << a.out << "\n";
  return 0;
}

// identify
struct IdentifyArgs {
  std::string registry;
  std::vector<std::string> features;
  std::string ivector;
  std::string ubm;
  std::string tv;
  std::string trial_id = "trial";
  std::vector<std::string> true_speakers;
  std::string json_out;
  std::string csv_out;
  std::string svg_out;
};

int RunIdentify(const Context &ctx, const IdentifyArgs &a) {
  const CliConfig cfg = ctx.Config();
  const DecisionPolicy policy{cfg.threshold, cfg.mode};
  const SpeakerRegistry registry = LoadRegistry(a.registry);
  if (registry.empty()) Fail(ErrorKind::kEmptyRegistry, "registry has no speakers");

  Trial trial;
  trial.trial_id = a.trial_id;
  trial.true_speaker_ids = a.true_speakers;
  std::optional<Ubm> ubm;
  if (!a.ubm.empty()) ubm = LoadUbm(a.ubm);
  if (cfg.mode == ScoringMode::kLlr) {
    if (a.features.empty()) Fail(ErrorKind::kUsage, "LLR mode needs --features");
    if (!ubm) Fail(ErrorKind::kUsage, "LLR mode needs --ubm");
    trial.features = LoadAndConcatenate(a.features);
  } else {
    if (!registry.HasIvectors())
      Fail(ErrorKind::kModeMismatch, "registry has no i-vectors for cosine scoring");
    if (!a.ivector.empty()) {
      trial.ivector = LoadIvector(a.ivector);
    } else {
      if (a.features.empty() || !ubm || a.tv.empty())
        Fail(ErrorKind::kUsage, "cosine mode needs --ivector, or --features with --ubm and --tv");
      trial.ivector = ExtractIvector(AccumulateStats(LoadAndConcatenate(a.features), *ubm),
                                     LoadTvModel(a.tv));
    }
  }

  const Identification id = Identify(trial, registry, ubm ? &*ubm : nullptr, policy);
  ctx.out << "trial " << trial.trial_id << ", mode " << ScoringModeName(cfg.mode)
          << ", threshold " << FormatReal(cfg.threshold) << "\n";
  if (id.cohort)
    ctx.out << "cohort mean " << Fixed(id.cohort->mean_mu) << ", std "
            << Fixed(id.cohort->std_sigma) << "\n";
  ctx.out << "rank  speaker  cluster  raw_score  score  decision\n";
  for (std::size_t i = 0; i < id.ranked.size(); ++i) {
    const ScoredSpeaker &s = id.ranked[i];
    ctx.out << i + 1 << "  " << s.speaker_id << "  " << s.cluster_id << "  "
            << Fixed(s.raw_score) << "  " << Fixed(s.score) << "  "
            << (s.decision == Decision::kAccept ? "accept" : "reject") << "\n";
  }

  if (!a.json_out.empty() || !a.csv_out.empty()) {
    const double thresholds[] = {cfg.threshold};
    std::vector<TrialOutcome> outcomes{
        {trial.trial_id, trial.description, trial.true_speaker_ids, id.ranked, false, false}};
    const EvalReport report = BuildReport("identify", cfg.mode, thresholds, std::move(outcomes));
    if (!a.json_out.empty()) SaveReport(report, a.json_out);
    if (!a.csv_out.empty()) WriteFileAtomic(a.csv_out, ReportToCsv(report));
  }
  if (!a.svg_out.empty()) {
    std::vector<std::pair<std::string, double>> bars;
    for (const auto &s : id.ranked) bars.emplace_back(s.speaker_id, s.score);
    std::sort(bars.begin(), bars.end());
    WriteFileAtomic(a.svg_out, ScoreChartSvg("trial " + trial.trial_id, bars, cfg.threshold));
  }
  return 0;
}

// evaluate
struct EvaluateArgs {
  std::string experiment;
  std::string out_dir;
};

int RunEvaluate(const Context &ctx, const EvaluateArgs &a) {
  ExperimentConfig exp = LoadExperimentConfig(a.experiment);
  if (ctx.seed) exp.seed = *ctx.seed;
  ctx.Log("running experiment " + exp.name + " with seed " + std::to_string(exp.seed));
  const EvalReport report = RunExperiment(exp);

  std::error_code ec;
  fs::create_directories(a.out_dir, ec);
  const fs::path base = fs::path(a.out_dir) / exp.name;
  SaveReport(report, base.string() + ".report.json");
  WriteFileAtomic(base.string() + ".csv", ReportToCsv(report));
  if (!report.trials.empty()) {
    std::vector<std::pair<std::string, double>> bars;
    for (const auto &s : report.trials.front().ranked) bars.emplace_back(s.speaker_id, s.score);
    std::sort(bars.begin(), bars.end());
    WriteFileAtomic(base.string() + ".svg",
                    ScoreChartSvg(exp.name + " " + report.trials.front().trial_id, bars,
                                  report.threshold));
  }

  ctx.out << "experiment " << report.name << " (" << ScoringModeName(report.mode) << "), "
          << report.trials.size() << " trials\n";
  ctx.out << "threshold " << FormatReal(report.threshold) << ": false accepts "
          << report.false_accepts << ", false rejects " << report.false_rejects << "\n";
  ctx.out << "top-1 accuracy " << Fixed(report.top1_accuracy) << ", EER " << Fixed(report.eer)
          << "\n";
  for (const auto &pt : report.threshold_study)
    ctx.out << "  threshold " << FormatReal(pt.threshold) << ": FA " << pt.false_accepts
            << ", FR " << pt.false_rejects << "\n";
  return 0;
}

// inspect
int RunInspect(const Context &ctx, const std::string &path) {
  std::ostream &out = ctx.out;
  const ArtifactKind kind = PeekArtifactKind(path);
  out << path << ": " << ArtifactKindName(kind) << "\n";
  switch (kind) {
    case ArtifactKind::kFeatures: {
      const FeatureMatrix f = LoadFeatures(path);
      out << f.NumFrames() << " frames x " << f.Dim() << " dims\n";
      break;
    }
    case ArtifactKind::kGmm: {
      const DiagonalGmm g = LoadGmm(path);
      out << g.NumComponents() << " components x " << g.Dim() << " dims\n";
      break;
    }
    case ArtifactKind::kUbm: {
      const Ubm u = LoadUbm(path);
      out << u.NumComponents() << " components x " << u.Dim() << " dims\n";
      break;
    }
    case ArtifactKind::kSpeakerModel: {
      const SpeakerModel m = LoadSpeakerModel(path);
      out << "speaker " << m.speaker_id << ", " << m.gmm.NumComponents() << " components x "
          << m.gmm.Dim() << " dims\n";
      break;
    }
    case ArtifactKind::kTvModel: {
      const TotalVariabilityModel tv = LoadTvModel(path);
      out << "rank " << tv.Rank() << ", supervector dim " << tv.SupervectorDim() << "\n";
      break;
    }
    case ArtifactKind::kIvector: {
      const IVector iv = LoadIvector(path);
      out << "dimension " << iv.size() << ", norm " << Fixed(iv.w.norm()) << "\n";
      break;
    }
    case ArtifactKind::kRegistry: {
      const SpeakerRegistry r = LoadRegistry(path);
      out << r.size() << " speakers" << (r.HasIvectors() ? " with i-vectors" : "") << "\n";
      out << "speaker_id  cluster  language  impostor\n";
      for (const auto &e : r.entries())
        out << e.speaker_id << "  " << e.cluster_id << "  "
            << (e.language_tag.empty() ? "-" : e.language_tag) << "  "
            << (e.is_impostor ? "yes" : "no") << "\n";
      break;
    }
    case ArtifactKind::kReport: {
      const EvalReport r = LoadReport(path);
      out << r.name << " (" << ScoringModeName(r.mode) << "), " << r.trials.size()
          << " trials, FA " << r.false_accepts << ", FR " << r.false_rejects
          << ", top-1 " << Fixed(r.top1_accuracy) << ", EER " << Fixed(r.eer) << "\n";
      break;
    }
  }
  return 0;
}

}  // namespace

void CliConfig::Validate() const {
  mfcc.Validate(4000);
  gmm.Validate();
  if (relevance < 0.0 || !std::isfinite(relevance))
    Fail(ErrorKind::kNegativeRelevance, "relevance must be a non-negative number");
  if (tv_rank < 1) Fail(ErrorKind::kInvalidConfig, "tv_rank must be at least 1");
  if (tv_iterations < 0) Fail(ErrorKind::kInvalidConfig, "tv_iterations must be >= 0");
  DecisionPolicy{threshold, mode}.Validate();
}

std::map<std::string, std::string> ReadKeyValueFile(const fs::path &path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorKind::kIoFailure, "cannot open config " + path.string());
  std::map<std::string, std::string> settings;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      Fail(ErrorKind::kInvalidConfig,
           path.string() + ":" + std::to_string(line_no) + ": expected key = value");
    const std::string key = Trim(line.substr(0, eq));
    if (key.empty())
      Fail(ErrorKind::kInvalidConfig, path.string() + ":" + std::to_string(line_no) + ": empty key");
    settings[key] = Trim(line.substr(eq + 1));
  }
  return settings;
}

CliConfig ApplySettings(CliConfig cfg, const std::map<std::string, std::string> &settings) {
  for (const auto &[key, value] : settings) {
    if (key == "pre_emphasis") cfg.mfcc.pre_emphasis_alpha = ParseNumber<double>(key, value);
    else if (key == "frame_length_ms") cfg.mfcc.frame_length_ms = ParseNumber<double>(key, value);
    else if (key == "frame_shift_ms") cfg.mfcc.frame_shift_ms = ParseNumber<double>(key, value);
    else if (key == "dft_size") cfg.mfcc.dft_size = ParseNumber<int>(key, value);
    else if (key == "num_mel_filters") cfg.mfcc.num_mel_filters = ParseNumber<int>(key, value);
    else if (key == "num_cepstra") cfg.mfcc.num_cepstra = ParseNumber<int>(key, value);
    else if (key == "apply_cmvn") cfg.mfcc.apply_cmvn = ParseBool(key, value);
    else if (key == "log_floor") cfg.mfcc.log_floor = ParseNumber<double>(key, value);
    else if (key == "num_components") cfg.gmm.num_components = ParseNumber<int>(key, value);
    else if (key == "max_iterations") cfg.gmm.max_iterations = ParseNumber<int>(key, value);
    else if (key == "convergence_tol") cfg.gmm.convergence_tol = ParseNumber<double>(key, value);
    else if (key == "variance_floor") cfg.gmm.variance_floor = ParseNumber<double>(key, value);
    else if (key == "kmeans_iterations") cfg.gmm.kmeans_iterations = ParseNumber<int>(key, value);
    else if (key == "relevance") cfg.relevance = ParseNumber<double>(key, value);
    else if (key == "tv_rank") cfg.tv_rank = ParseNumber<int>(key, value);
    else if (key == "tv_iterations") cfg.tv_iterations = ParseNumber<int>(key, value);
    else if (key == "mode") cfg.mode = ParseScoringMode(value);
    else if (key == "threshold") cfg.threshold = ParseNumber<double>(key, value);
    else if (key == "seed") cfg.seed = ParseNumber<std::uint64_t>(key, value);
    else Fail(ErrorKind::kUsage, "unknown setting '" + key + "'");
  }
  return cfg;
}

std::string ScoreChartSvg(const std::string &title,
                          const std::vector<std::pair<std::string, double>> &bars,
                          double threshold) {
  const double bar_w = 40, gap = 20, left = 60, top = 40, plot_h = 240;
  const double width = left + bars.size() * (bar_w + gap) + gap;
  const double height = top + plot_h + 60;
  double lo = std::min(0.0, threshold), hi = std::max(0.0, threshold);
  for (const auto &b : bars) {
    lo = std::min(lo, b.second);
    hi = std::max(hi, b.second);
  }
  if (hi - lo < 1e-12) hi = lo + 1.0;
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
  auto y = [&](double v) { return top + (hi - v) / (hi - lo) * plot_h; };
  auto esc = [](const std::string &s) {
    std::string o;
    for (char c : s) {
      if (c == '&') o += "&amp;";
      else if (c == '<') o += "&lt;";
      else if (c == '>') o += "&gt;";
      else if (c == '"') o += "&quot;";
      else o += c;
    }
    return o;
  };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << Fixed(width, 0)
    << "\" height=\"" << Fixed(height, 0) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<text x=\"" << Fixed(left, 0) << "\" y=\"20\">" << esc(title) << "</text>\n";
  const double y0 = y(0.0);
  s << "<line x1=\"" << Fixed(left - 10, 0) << "\" y1=\"" << Fixed(y0, 2) << "\" x2=\""
    << Fixed(width, 0) << "\" y2=\"" << Fixed(y0, 2) << "\" stroke=\"black\"/>\n";
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const double x = left + gap + i * (bar_w + gap);
    const double yv = y(bars[i].second);
    const double y_top = std::min(yv, y0);
    const double h = std::abs(yv - y0);
    const bool above = bars[i].second > threshold;
    s << "<rect x=\"" << Fixed(x, 2) << "\" y=\"" << Fixed(y_top, 2) << "\" width=\""
      << Fixed(bar_w, 2) << "\" height=\"" << Fixed(h, 2) << "\" fill=\""
      << (above ? "#c0392b" : "#7f8c8d") << "\"/>\n";
    s << "<text x=\"" << Fixed(x + bar_w / 2, 2) << "\" y=\"" << Fixed(top + plot_h + 20, 2)
      << "\" text-anchor=\"middle\">" << esc(bars[i].first) << "</text>\n";
    s << "<text x=\"" << Fixed(x + bar_w / 2, 2) << "\" y=\"" << Fixed(y_top - 4, 2)
      << "\" text-anchor=\"middle\">" << Fixed(bars[i].second, 2) << "</text>\n";
  }
  const double yt = y(threshold);
  s << "<line x1=\"" << Fixed(left - 10, 0) << "\" y1=\"" << Fixed(yt, 2) << "\" x2=\""
    << Fixed(width, 0) << "\" y2=\"" << Fixed(yt, 2)
    << "\" stroke=\"#2c3e50\" stroke-dasharray=\"6,4\"/>\n";
  s << "<text x=\"4\" y=\"" << Fixed(yt + 4, 2) << "\">" << Fixed(threshold, 2) << "</text>\n";
  s << "</svg>\n";
  return s.str();
}

int RunCli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  Context ctx{out, err, false, {}, std::nullopt, {}, {}};
  CLI::App app{"voxid: GMM-UBM and i-vector speaker identification"};
  app.require_subcommand(1);
  app.add_option("--config", ctx.config_path, "key = value settings file");
  app.add_option_function<std::uint64_t>(
      "--seed", [&ctx](const std::uint64_t &s) { ctx.seed = s; },
      "seed for all randomness (default 0)");
  app.add_flag("-v,--verbose", ctx.verbose, "progress on stderr");

  FeaturesArgs fa;
  auto *features = app.add_subcommand("features", "WAV files to VOXF1 MFCC files");
  features->add_option("inputs", fa.inputs, "16-bit PCM WAV files");
  features->add_option("-o,--out-dir", fa.out_dir, "output directory")->required();

  TrainUbmArgs ua;
  auto *train_ubm = app.add_subcommand("train-ubm", "train a UBM on pooled feature files");
  train_ubm->add_option("inputs", ua.inputs, "feature files");
  train_ubm->add_option("-o,--out", ua.out, "UBM file")->required();
  ctx.overrides.Add(train_ubm, "--components", "num_components", "mixture components");
  ctx.overrides.Add(train_ubm, "--max-iterations", "max_iterations", "EM iteration cap");

  EnrollArgs ea;
  auto *enroll = app.add_subcommand("enroll", "MAP-adapt a speaker and add it to a registry");
  enroll->add_option("inputs", ea.inputs, "feature files of the speaker");
  enroll->add_option("-s,--speaker", ea.speaker, "speaker id")->required();
  enroll->add_option("--ubm", ea.ubm, "UBM file")->required();
  enroll->add_option("--tv", ea.tv, "TV model; stores an i-vector as well");
  enroll->add_option("-r,--registry", ea.registry, "registry file (created if missing)")
      ->required();
  enroll->add_option("-o,--out", ea.out, "write the updated registry here instead");
  enroll->add_option("--cluster", ea.cluster, "cluster id");
  enroll->add_option("--language", ea.language, "language tag");
  enroll->add_flag("--impostor", ea.impostor, "mark the entry as a planted impostor");
  ctx.overrides.Add(enroll, "--relevance", "relevance", "MAP relevance factor");

  TrainTvArgs ta;
  auto *train_tv = app.add_subcommand("train-tv", "train a total-variability matrix");
  train_tv->add_option("inputs", ta.inputs, "feature files, one utterance each");
  train_tv->add_option("--ubm", ta.ubm, "UBM file")->required();
  train_tv->add_option("-o,--out", ta.out, "TV model file")->required();
  ctx.overrides.Add(train_tv, "--rank", "tv_rank", "rank of T");
  ctx.overrides.Add(train_tv, "--iterations", "tv_iterations", "EM iterations");

  IvectorArgs ia;
  auto *ivector = app.add_subcommand("ivector", "extract an i-vector");
  ivector->add_option("inputs", ia.inputs, "feature files of one utterance");
  ivector->add_option("--ubm", ia.ubm, "UBM file")->required();
  ivector->add_option("--tv", ia.tv, "TV model file")->required();
  ivector->add_option("-o,--out", ia.out, "i-vector file")->required();

  IdentifyArgs da;
  auto *identify = app.add_subcommand("identify", "score a test input against a registry");
  identify->add_option("-r,--registry", da.registry, "registry file")->required();
  identify->add_option("-f,--features", da.features, "test feature files");
  identify->add_option("--ivector", da.ivector, "test i-vector (cosine mode)");
  identify->add_option("--ubm", da.ubm, "UBM file");
  identify->add_option("--tv", da.tv, "TV model (cosine mode from features)");
  identify->add_option("--trial-id", da.trial_id, "trial name in the report");
  identify->add_option("--true-speaker", da.true_speakers, "ground-truth speaker ids");
  identify->add_option("--json", da.json_out, "report artifact");
  identify->add_option("--csv", da.csv_out, "report rows");
  identify->add_option("--svg", da.svg_out, "score bar chart");
  ctx.overrides.Add(identify, "--mode", "mode", "llr or cosine");
  ctx.overrides.Add(identify, "--threshold", "threshold", "decision threshold");

  EvaluateArgs va;
  auto *evaluate = app.add_subcommand("evaluate", "run a synthetic experiment");
  evaluate->add_option("experiment", va.experiment, "experiment JSON file")->required();
  evaluate->add_option("-o,--out-dir", va.out_dir, "output directory")->required();

  std::string inspect_path;
  auto *inspect = app.add_subcommand("inspect", "describe an artifact");
  inspect->add_option("artifact", inspect_path, "artifact file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError &e) {
    err << "error: " << ErrorName(ErrorKind::kUsage) << ": " << e.what() << "\n";
    return 64;
  }

  try {
    ctx.Resolve();
    if (features->parsed()) return RunFeatures(ctx, fa);
    if (train_ubm->parsed()) return RunTrainUbm(ctx, ua);
    if (enroll->parsed()) return RunEnroll(ctx, ea);
    if (train_tv->parsed()) return RunTrainTv(ctx, ta);
    if (ivector->parsed()) return RunIvector(ctx, ia);
    if (identify->parsed()) return RunIdentify(ctx, da);
    if (evaluate->parsed()) return RunEvaluate(ctx, va);
    if (inspect->parsed()) return RunInspect(ctx, inspect_path);
  } catch (const VoxError &e) {
    err << "error: " << e.what() << "\n";
    return ExitCode(e.kind());
  } catch (const fs::filesystem_error &e) {
    err << "error: " << ErrorName(ErrorKind::kIoFailure) << ": " << e.what() << "\n";
    return 2;
  }
  return 64;
}

}  // namespace voxid
