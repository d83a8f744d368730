// src/model-store.cc

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

#include "voxid/model-store.h"

#include <unistd.h>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <set>
#include <system_error>

#include <json.hpp>

#include "voxid/voxid-error.h"

namespace voxid {

using nlohmann::json;

namespace {

constexpr char kFeatureMagic[] = "VOXF1";
constexpr std::size_t kFeatureMagicSize = 5;
constexpr std::size_t kFeatureHeaderSize = kFeatureMagicSize + 8;

const char *const kKindNames[] = {"features", "gmm", "ubm", "speaker_model",
                                  "tv_model", "ivector", "registry", "report"};

[[noreturn]] void Corrupt(const std::string &what) {
  Fail(ErrorKind::kCorruptArtifact, what);
}

bool HasFeatureMagic(std::span<const std::uint8_t> bytes) {
  return bytes.size() >= kFeatureMagicSize &&
         std::memcmp(bytes.data(), kFeatureMagic, kFeatureMagicSize) == 0;
}

void PutU32(std::uint32_t v, std::vector<std::uint8_t> *out) {
  for (int i = 0; i < 4; ++i) out->push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t GetU32(const std::uint8_t *p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

json Reals(const double *data, std::size_t n) {
  json arr = json::array();
  for (std::size_t i = 0; i < n; ++i) arr.push_back(FormatReal(data[i]));
  return arr;
}

json Reals(const Eigen::VectorXd &v) {
  return Reals(v.data(), static_cast<std::size_t>(v.size()));
}

json Rows(const RowMatrix &m) {
  json arr = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    arr.push_back(Reals(m.data() + r * m.cols(), static_cast<std::size_t>(m.cols())));
  return arr;
}

const json &Field(const json &obj, const char *key) {
  if (!obj.is_object() || !obj.contains(key))
    Corrupt(std::string("missing field '") + key + "'");
  return obj.at(key);
}

double Real(const json &j) {
  if (!j.is_string()) Corrupt("real numbers are stored as strings");
  return ParseReal(j.get_ref<const std::string &>());
}

Eigen::VectorXd RealVector(const json &j) {
  if (!j.is_array()) Corrupt("expected an array of reals");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = Real(j[i]);
  return v;
}

RowMatrix RealRows(const json &j, std::size_t rows, std::size_t cols) {
  if (!j.is_array() || j.size() != rows) Corrupt("matrix has the wrong number of rows");
  RowMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const json &row = j[r];
    if (!row.is_array() || row.size() != cols) Corrupt("matrix row has the wrong length");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = Real(row[c]);
  }
  return m;
}

template <typename T>
T Get(const json &obj, const char *key) {
  const json &j = Field(obj, key);
  try {
    return j.get<T>();
  } catch (const json::exception &) {
    Corrupt(std::string("field '") + key + "' has the wrong type");
  }
}

std::string Wrap(ArtifactKind kind, json payload) {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["kind"] = ArtifactKindName(kind);
  doc["payload"] = std::move(payload);
  return doc.dump(2) + "\n";
}

json ParseEnvelope(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::exception &e) {
    Corrupt(std::string("not a JSON artifact: ") + e.what());
  }
  if (!doc.is_object()) Corrupt("artifact is not a JSON object");
  return doc;
}

ArtifactKind EnvelopeKind(const json &doc) {
  return ParseArtifactKind(Get<std::string>(doc, "kind"));
}

// Checks the envelope and returns the payload.
json Unwrap(std::string_view text, ArtifactKind expected) {
  json doc = ParseEnvelope(text);
  const ArtifactKind kind = EnvelopeKind(doc);
  if (kind != expected)
    Fail(ErrorKind::kWrongKind, "expected a " + std::string(ArtifactKindName(expected)) +
                                    " artifact, found " + std::string(ArtifactKindName(kind)));
  const json &version = Field(doc, "format_version");
  if (!version.is_number_integer()) Corrupt("format_version must be an integer");
  if (version.get<long long>() != kFormatVersion)
    Fail(ErrorKind::kUnsupportedVersion,
         "format_version " + version.dump() + " is not supported");
  if (!doc.contains("payload") || !doc.at("payload").is_object())
    Corrupt("missing payload");
  return doc.at("payload");
}

// Runs a payload decoder, turning any invariant failure into CorruptArtifact.
template <typename F>
auto Gate(F &&decode) -> decltype(decode()) {
  try {
    return decode();
  } catch (const VoxError &e) {
    if (e.kind() == ErrorKind::kCorruptArtifact) throw;
    Corrupt(std::string("invariant violated: ") + e.what());
  } catch (const json::exception &e) {
    Corrupt(std::string("malformed payload: ") + e.what());
  }
}

json GmmPayload(const DiagonalGmm &gmm) {
  json p;
  p["num_components"] = gmm.NumComponents();
  p["dim"] = gmm.Dim();
  p["weights"] = Reals(gmm.weights());
  p["means"] = Rows(gmm.means());
  p["variances"] = Rows(gmm.variances());
  return p;
}

DiagonalGmm GmmFromPayload(const json &p) {
  const auto num_comp = Get<std::size_t>(p, "num_components");
  const auto dim = Get<std::size_t>(p, "dim");
  Eigen::VectorXd weights = RealVector(Field(p, "weights"));
  if (static_cast<std::size_t>(weights.size()) != num_comp)
    Corrupt("weights length differs from num_components");
  return DiagonalGmm(std::move(weights), RealRows(Field(p, "means"), num_comp, dim),
                     RealRows(Field(p, "variances"), num_comp, dim));
}

json IvectorPayload(const IVector &ivector) {
  json p;
  p["values"] = Reals(ivector.w);
  return p;
}

IVector IvectorFromPayload(const json &p) {
  IVector iv{RealVector(Field(p, "values"))};
  for (Eigen::Index i = 0; i < iv.w.size(); ++i)
    if (!std::isfinite(iv.w[i])) Corrupt("i-vector has a non-finite value");
  return iv;
}

const char *DecisionName(Decision d) { return d == Decision::kAccept ? "accept" : "reject"; }

Decision ParseDecision(const std::string &name) {
  if (name == "accept") return Decision::kAccept;
  if (name == "reject") return Decision::kReject;
  Corrupt("decision must be 'accept' or 'reject'");
}

std::string CsvField(const std::string &s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string BytesToString(const std::vector<std::uint8_t> &bytes) {
  return std::string(bytes.begin(), bytes.end());
}

// Reads a JSON artifact file, recognising feature files as the wrong kind.
std::string ReadJsonArtifact(const std::filesystem::path &path, ArtifactKind expected) {
  const std::vector<std::uint8_t> bytes = ReadFileBytes(path);
  if (HasFeatureMagic(bytes))
    Fail(ErrorKind::kWrongKind, "expected a " + std::string(ArtifactKindName(expected)) +
                                    " artifact, found features");
  return BytesToString(bytes);
}

}  // namespace

std::string_view ArtifactKindName(ArtifactKind kind) {
  return kKindNames[static_cast<int>(kind)];
}

ArtifactKind ParseArtifactKind(std::string_view name) {
  for (int i = 0; i < static_cast<int>(std::size(kKindNames)); ++i)
    if (name == kKindNames[i]) return static_cast<ArtifactKind>(i);
  Corrupt("unknown artifact kind '" + std::string(name) + "'");
}

std::string FormatReal(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double ParseReal(std::string_view text) {
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty())
    Corrupt("'" + std::string(text) + "' is not a real number");
  return value;
}

std::vector<std::uint8_t> EncodeFeatures(const FeatureMatrix &features) {
  const std::uint64_t limit = std::numeric_limits<std::uint32_t>::max();
  if (features.Dim() > limit || features.NumFrames() > limit)
    Fail(ErrorKind::kInvalidConfig, "feature matrix too large for VOXF1");
  std::vector<std::uint8_t> out(kFeatureMagic, kFeatureMagic + kFeatureMagicSize);
  out.reserve(kFeatureHeaderSize + 4 * features.NumFrames() * features.Dim());
  PutU32(static_cast<std::uint32_t>(features.Dim()), &out);
  PutU32(static_cast<std::uint32_t>(features.NumFrames()), &out);
  const RowMatrix &m = features.frames();
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const auto f = static_cast<float>(m.data()[i]);
    if (!std::isfinite(f))
      Fail(ErrorKind::kInvalidConfig, "feature value outside the float32 range");
    PutU32(std::bit_cast<std::uint32_t>(f), &out);
  }
  return out;
}

FeatureMatrix DecodeFeatures(std::span<const std::uint8_t> bytes) {
  if (!HasFeatureMagic(bytes)) {
    if (!bytes.empty() && bytes[0] == '{')
      Fail(ErrorKind::kWrongKind, "expected a features file, found a JSON artifact");
    Corrupt("missing VOXF1 header");
  }
  if (bytes.size() < kFeatureHeaderSize) Corrupt("truncated VOXF1 header");
  const std::uint32_t dim = GetU32(bytes.data() + kFeatureMagicSize);
  const std::uint32_t count = GetU32(bytes.data() + kFeatureMagicSize + 4);
  if (dim == 0) Corrupt("VOXF1 dimension is zero");
  const std::uint64_t expected =
      kFeatureHeaderSize + 4ull * static_cast<std::uint64_t>(dim) * count;
  if (bytes.size() != expected)
    Corrupt("VOXF1 body is " + std::to_string(bytes.size() - kFeatureHeaderSize) +
            " bytes, header implies " + std::to_string(expected - kFeatureHeaderSize));
  RowMatrix m(count, dim);
  const std::uint8_t *p = bytes.data() + kFeatureHeaderSize;
  for (Eigen::Index i = 0; i < m.size(); ++i, p += 4) {
    const float f = std::bit_cast<float>(GetU32(p));
    if (!std::isfinite(f)) Corrupt("VOXF1 contains a non-finite value");
    m.data()[i] = f;
  }
  return FeatureMatrix(std::move(m));
}

std::string GmmToText(const DiagonalGmm &gmm) {
  return Wrap(ArtifactKind::kGmm, GmmPayload(gmm));
}

std::string UbmToText(const Ubm &ubm) {
  json p;
  p["gmm"] = GmmPayload(ubm.gmm);
  return Wrap(ArtifactKind::kUbm, std::move(p));
}

std::string SpeakerModelToText(const SpeakerModel &model) {
  json p;
  p["speaker_id"] = model.speaker_id;
  p["gmm"] = GmmPayload(model.gmm);
  return Wrap(ArtifactKind::kSpeakerModel, std::move(p));
}

std::string TvModelToText(const TotalVariabilityModel &tv) {
  json p;
  p["num_components"] = tv.NumComponents();
  p["dim"] = tv.Dim();
  p["rank"] = tv.Rank();
  p["mean_supervector"] = Reals(tv.m());
  p["variance_supervector"] = Reals(tv.sigma());
  p["t_matrix"] = Rows(RowMatrix(tv.t_matrix()));
  return Wrap(ArtifactKind::kTvModel, std::move(p));
}

std::string IvectorToText(const IVector &ivector) {
  return Wrap(ArtifactKind::kIvector, IvectorPayload(ivector));
}

std::string RegistryToText(const SpeakerRegistry &registry) {
  json entries = json::array();
  for (const auto &e : registry.entries()) {
    json j;
    j["speaker_id"] = e.speaker_id;
    j["cluster_id"] = e.cluster_id;
    j["language_tag"] = e.language_tag;
    j["is_impostor"] = e.is_impostor;
    j["model"] = GmmPayload(e.model.gmm);
    j["ivector"] = e.ivector ? Reals(e.ivector->w) : json(nullptr);
    entries.push_back(std::move(j));
  }
  json p;
  p["entries"] = std::move(entries);
  return Wrap(ArtifactKind::kRegistry, std::move(p));
}

std::string ReportToText(const EvalReport &report) {
  json p;
  p["name"] = report.name;
  p["mode"] = ScoringModeName(report.mode);
  p["threshold"] = FormatReal(report.threshold);
  p["false_accepts"] = report.false_accepts;
  p["false_rejects"] = report.false_rejects;
  p["eer"] = FormatReal(report.eer);
  p["top1_accuracy"] = FormatReal(report.top1_accuracy);
  json study = json::array();
  for (const auto &pt : report.threshold_study)
    study.push_back({{"threshold", FormatReal(pt.threshold)},
                     {"false_accepts", pt.false_accepts},
                     {"false_rejects", pt.false_rejects}});
  p["threshold_study"] = std::move(study);
  json trials = json::array();
  for (const auto &t : report.trials) {
    json ranked = json::array();
    for (const auto &s : t.ranked)
      ranked.push_back({{"speaker_id", s.speaker_id},
                        {"cluster_id", s.cluster_id},
                        {"raw_score", FormatReal(s.raw_score)},
                        {"score", FormatReal(s.score)},
                        {"decision", DecisionName(s.decision)}});
    trials.push_back({{"trial_id", t.trial_id},
                      {"description", t.description},
                      {"true_speaker_ids", t.true_speaker_ids},
                      {"false_accept", t.false_accept},
                      {"false_reject", t.false_reject},
                      {"ranked", std::move(ranked)}});
  }
  p["trials"] = std::move(trials);
  return Wrap(ArtifactKind::kReport, std::move(p));
}

DiagonalGmm GmmFromText(std::string_view text) {
  const json p = Unwrap(text, ArtifactKind::kGmm);
  return Gate([&] { return GmmFromPayload(p); });
}

Ubm UbmFromText(std::string_view text) {
  const json p = Unwrap(text, ArtifactKind::kUbm);
  return Gate([&] { return Ubm{GmmFromPayload(Field(p, "gmm"))}; });
}

SpeakerModel SpeakerModelFromText(std::string_view text) {
  const json p = Unwrap(text, ArtifactKind::kSpeakerModel);
  return Gate([&] {
    return SpeakerModel{Get<std::string>(p, "speaker_id"), GmmFromPayload(Field(p, "gmm"))};
  });
}

TotalVariabilityModel TvModelFromText(std::string_view text) {
  const json p = Unwrap(text, ArtifactKind::kTvModel);
  return Gate([&] {
    const auto num_comp = Get<std::size_t>(p, "num_components");
    const auto dim = Get<std::size_t>(p, "dim");
    const auto rank = Get<std::size_t>(p, "rank");
    Eigen::MatrixXd t = RealRows(Field(p, "t_matrix"), num_comp * dim, rank);
    return TotalVariabilityModel(num_comp, dim, RealVector(Field(p, "mean_supervector")),
                                 RealVector(Field(p, "variance_supervector")), std::move(t));
  });
}

IVector IvectorFromText(std::string_view text) {
  const json p = Unwrap(text, ArtifactKind::kIvector);
  return Gate([&] { return IvectorFromPayload(p); });
}

SpeakerRegistry RegistryFromText(std::string_view text) {
  const json p = Unwrap(text, ArtifactKind::kRegistry);
  return Gate([&] {
    const json &entries = Field(p, "entries");
    if (!entries.is_array()) Corrupt("entries must be an array");
    SpeakerRegistry registry;
    for (const json &j : entries) {
      RegistryEntry e{Get<std::string>(j, "speaker_id"), Get<int>(j, "cluster_id"),
                      SpeakerModel{Get<std::string>(j, "speaker_id"),
                                   GmmFromPayload(Field(j, "model"))},
                      std::nullopt, Get<std::string>(j, "language_tag"),
                      Get<bool>(j, "is_impostor")};
      const json &iv = Field(j, "ivector");
      if (!iv.is_null()) e.ivector = IvectorFromPayload(json{{"values", iv}});
      registry.Add(std::move(e));
    }
    return registry;
  });
}

EvalReport ReportFromText(std::string_view text) {
  const json p = Unwrap(text, ArtifactKind::kReport);
  return Gate([&] {
    EvalReport r;
    r.name = Get<std::string>(p, "name");
    r.mode = ParseScoringMode(Get<std::string>(p, "mode"));
    r.threshold = Real(Field(p, "threshold"));
    r.false_accepts = Get<int>(p, "false_accepts");
    r.false_rejects = Get<int>(p, "false_rejects");
    r.eer = Real(Field(p, "eer"));
    r.top1_accuracy = Real(Field(p, "top1_accuracy"));
    const json &study = Field(p, "threshold_study");
    if (!study.is_array()) Corrupt("threshold_study must be an array");
    for (const json &j : study)
      r.threshold_study.push_back({Real(Field(j, "threshold")), Get<int>(j, "false_accepts"),
                                   Get<int>(j, "false_rejects")});
    const json &trials = Field(p, "trials");
    if (!trials.is_array()) Corrupt("trials must be an array");
    for (const json &j : trials) {
      TrialOutcome t;
      t.trial_id = Get<std::string>(j, "trial_id");
      t.description = Get<std::string>(j, "description");
      t.true_speaker_ids = Get<std::vector<std::string>>(j, "true_speaker_ids");
      t.false_accept = Get<bool>(j, "false_accept");
      t.false_reject = Get<bool>(j, "false_reject");
      const json &ranked = Field(j, "ranked");
      if (!ranked.is_array() || ranked.empty()) Corrupt("a trial needs a ranked list");
      std::set<std::string> seen;
      for (const json &s : ranked) {
        ScoredSpeaker sc{Get<std::string>(s, "speaker_id"), Get<int>(s, "cluster_id"),
                         Real(Field(s, "raw_score")), Real(Field(s, "score")),
                         ParseDecision(Get<std::string>(s, "decision"))};
        if (!std::isfinite(sc.raw_score) || !std::isfinite(sc.score))
          Corrupt("non-finite score");
        if (!seen.insert(sc.speaker_id).second) Corrupt("speaker ranked twice in a trial");
        if (!t.ranked.empty()) {
          const ScoredSpeaker &prev = t.ranked.back();
          if (prev.score < sc.score ||
              (prev.score == sc.score && prev.speaker_id > sc.speaker_id))
            Corrupt("ranked list of trial '" + t.trial_id + "' is out of order");
        }
        t.ranked.push_back(std::move(sc));
      }
      r.trials.push_back(std::move(t));
    }
    if (r.threshold_study.empty() || r.threshold_study.front().threshold != r.threshold)
      Corrupt("threshold study must start at the report threshold");
    // Decisions, counts, EER and accuracy must all be what the trials imply.
    std::vector<double> thresholds;
    for (const auto &pt : r.threshold_study) thresholds.push_back(pt.threshold);
    const EvalReport rebuilt = BuildReport(r.name, r.mode, thresholds, r.trials);
    if (!(rebuilt == r)) Corrupt("report counts are inconsistent with its trials");
    return r;
  });
}

std::string ReportToCsv(const EvalReport &report) {
  std::string out = "trial_id,speaker_id,raw_score,normalized_score,decision\n";
  for (const auto &t : report.trials)
    for (const auto &s : t.ranked)
      out += CsvField(t.trial_id) + "," + CsvField(s.speaker_id) + "," +
             FormatReal(s.raw_score) + "," + FormatReal(s.score) + "," +
             DecisionName(s.decision) + "\n";
  return out;
}

void SaveFeatures(const FeatureMatrix &features, const std::filesystem::path &path) {
  WriteFileAtomic(path, EncodeFeatures(features));
}
void SaveGmm(const DiagonalGmm &gmm, const std::filesystem::path &path) {
  WriteFileAtomic(path, GmmToText(gmm));
}
void SaveUbm(const Ubm &ubm, const std::filesystem::path &path) {
  WriteFileAtomic(path, UbmToText(ubm));
}
void SaveSpeakerModel(const SpeakerModel &model, const std::filesystem::path &path) {
  WriteFileAtomic(path, SpeakerModelToText(model));
}
void SaveTvModel(const TotalVariabilityModel &tv, const std::filesystem::path &path) {
  WriteFileAtomic(path, TvModelToText(tv));
}
void SaveIvector(const IVector &ivector, const std::filesystem::path &path) {
  WriteFileAtomic(path, IvectorToText(ivector));
}
void SaveRegistry(const SpeakerRegistry &registry, const std::filesystem::path &path) {
  WriteFileAtomic(path, RegistryToText(registry));
}
void SaveReport(const EvalReport &report, const std::filesystem::path &path) {
  WriteFileAtomic(path, ReportToText(report));
}

FeatureMatrix LoadFeatures(const std::filesystem::path &path) {
  return DecodeFeatures(ReadFileBytes(path));
}
DiagonalGmm LoadGmm(const std::filesystem::path &path) {
  return GmmFromText(ReadJsonArtifact(path, ArtifactKind::kGmm));
}
Ubm LoadUbm(const std::filesystem::path &path) {
  return UbmFromText(ReadJsonArtifact(path, ArtifactKind::kUbm));
}
SpeakerModel LoadSpeakerModel(const std::filesystem::path &path) {
  return SpeakerModelFromText(ReadJsonArtifact(path, ArtifactKind::kSpeakerModel));
}
TotalVariabilityModel LoadTvModel(const std::filesystem::path &path) {
  return TvModelFromText(ReadJsonArtifact(path, ArtifactKind::kTvModel));
}
IVector LoadIvector(const std::filesystem::path &path) {
  return IvectorFromText(ReadJsonArtifact(path, ArtifactKind::kIvector));
}
SpeakerRegistry LoadRegistry(const std::filesystem::path &path) {
  return RegistryFromText(ReadJsonArtifact(path, ArtifactKind::kRegistry));
}
EvalReport LoadReport(const std::filesystem::path &path) {
  return ReportFromText(ReadJsonArtifact(path, ArtifactKind::kReport));
}

ArtifactKind PeekArtifactKind(const std::filesystem::path &path) {
  const std::vector<std::uint8_t> bytes = ReadFileBytes(path);
  if (HasFeatureMagic(bytes)) return ArtifactKind::kFeatures;
  return EnvelopeKind(ParseEnvelope(BytesToString(bytes)));
}

std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIoFailure, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) Fail(ErrorKind::kIoFailure, "cannot read " + path.string());
  return bytes;
}

void WriteFileAtomic(const std::filesystem::path &path,
                     std::span<const std::uint8_t> bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) Fail(ErrorKind::kIoFailure, "cannot write " + path.string());
    out.write(reinterpret_cast<const char *>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      Fail(ErrorKind::kIoFailure, "cannot write " + path.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    Fail(ErrorKind::kIoFailure, "cannot rename onto " + path.string() + ": " + ec.message());
  }
}

void WriteFileAtomic(const std::filesystem::path &path, std::string_view text) {
  WriteFileAtomic(path, std::span<const std::uint8_t>(
                            reinterpret_cast<const std::uint8_t *>(text.data()), text.size()));
}

}  // namespace voxid
