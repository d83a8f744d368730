// tests/model-store-test.cc

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

#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "random-artifacts.h"
#include "test-util.h"
#include "voxid/model-store.h"

using namespace voxid;
using namespace voxid::testing;

namespace {

std::string Slurp(const std::filesystem::path &p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void Spit(const std::filesystem::path &p, const std::string &s) {
  std::ofstream(p, std::ios::binary) << s;
}

}  // namespace

TEST_CASE("real numbers survive text encoding bit for bit") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double v = std::bit_cast<double>(rng());
    if (!std::isfinite(v)) continue;
    CHECK(std::bit_cast<std::uint64_t>(ParseReal(FormatReal(v))) == std::bit_cast<std::uint64_t>(v));
  }
  for (double v : {0.0, -0.0, 5e-324, 1.7976931348623157e308, 0.1, -2.5}) {
    CHECK(std::bit_cast<std::uint64_t>(ParseReal(FormatReal(v))) == std::bit_cast<std::uint64_t>(v));
  }
  CHECK(ThrownKind([] { ParseReal("abc"); }) == K(ErrorKind::kCorruptArtifact));
  CHECK(ThrownKind([] { ParseReal("1.0x"); }) == K(ErrorKind::kCorruptArtifact));
}

TEST_CASE("every artifact kind round-trips") {
  const auto dir = ScratchDir("store");
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 20; ++rep) {
    const DiagonalGmm gmm = RandomGmm(&rng, 1 + rep % 5, 1 + rep % 4);
    SaveGmm(gmm, dir / "g.json");
    CHECK(LoadGmm(dir / "g.json") == gmm);

    const Ubm ubm{RandomGmm(&rng, 4, 3)};
    SaveUbm(ubm, dir / "u.json");
    CHECK(LoadUbm(dir / "u.json") == ubm);

    const SpeakerModel sm{"speaker é", RandomGmm(&rng, 2, 2)};
    SaveSpeakerModel(sm, dir / "s.json");
    CHECK(LoadSpeakerModel(dir / "s.json") == sm);

    const TotalVariabilityModel tv = InitTv(ubm, 1 + rep % 11, rep);
    SaveTvModel(tv, dir / "tv.json");
    CHECK(LoadTvModel(dir / "tv.json") == tv);

    const IVector iv = ExtractIvector(AccumulateStats(SampleFrames(ubm.gmm, 50, &rng), ubm), tv);
    SaveIvector(iv, dir / "iv.json");
    CHECK(LoadIvector(dir / "iv.json") == iv);

    const SpeakerRegistry reg = RandomRegistry(&rng, rep % 2 == 0);
    SaveRegistry(reg, dir / "r.json");
    CHECK(LoadRegistry(dir / "r.json") == reg);

    const EvalReport report = RandomReport(&rng, rep % 2 ? ScoringMode::kCosine : ScoringMode::kLlr);
    SaveReport(report, dir / "rep.json");
    CHECK(LoadReport(dir / "rep.json") == report);

    // float32-representable features come back exactly.
    RowMatrix f(7, 3);
    for (Eigen::Index i = 0; i < f.size(); ++i)
      f.data()[i] = static_cast<float>(std::normal_distribution<double>(0.0, 10.0)(rng));
    SaveFeatures(FeatureMatrix(f), dir / "f.voxf");
    CHECK(LoadFeatures(dir / "f.voxf") == FeatureMatrix(f));
  }
  const SpeakerRegistry empty;
  SaveRegistry(empty, dir / "empty.json");
  CHECK(LoadRegistry(dir / "empty.json").empty());
}

TEST_CASE("saving is deterministic and atomic") {
  const auto dir = ScratchDir("store-bytes");
  std::mt19937_64 rng(3);
  const SpeakerRegistry reg = RandomRegistry(&rng, true);
  SaveRegistry(reg, dir / "a.json");
  SaveRegistry(reg, dir / "b.json");
  CHECK(Slurp(dir / "a.json") == Slurp(dir / "b.json"));
  SaveRegistry(LoadRegistry(dir / "a.json"), dir / "c.json");
  CHECK(Slurp(dir / "a.json") == Slurp(dir / "c.json"));
  std::size_t files = 0;
  for ([[maybe_unused]] const auto &e : std::filesystem::directory_iterator(dir)) ++files;
  CHECK(files == 3);

  Spit(dir / "plain-file", "x");
  CHECK(ThrownKind([&] { SaveRegistry(reg, dir / "plain-file" / "r.json"); }) ==
        K(ErrorKind::kIoFailure));
  CHECK(ThrownKind([&] { LoadRegistry(dir / "missing.json"); }) == K(ErrorKind::kIoFailure));
}

TEST_CASE("envelope checks") {
  const auto dir = ScratchDir("store-envelope");
  std::mt19937_64 rng(4);
  const DiagonalGmm gmm = RandomGmm(&rng, 2, 2);
  SaveGmm(gmm, dir / "g.json");
  CHECK(PeekArtifactKind(dir / "g.json") == ArtifactKind::kGmm);
  CHECK(ThrownKind([&] { LoadUbm(dir / "g.json"); }) == K(ErrorKind::kWrongKind));
  CHECK(ThrownKind([&] { LoadFeatures(dir / "g.json"); }) == K(ErrorKind::kWrongKind));
  SaveFeatures(FeatureMatrix(RowMatrix::Ones(2, 2)), dir / "f.voxf");
  CHECK(PeekArtifactKind(dir / "f.voxf") == ArtifactKind::kFeatures);
  CHECK(ThrownKind([&] { LoadGmm(dir / "f.voxf"); }) == K(ErrorKind::kWrongKind));

  nlohmann::json doc = nlohmann::json::parse(Slurp(dir / "g.json"));
  CHECK(doc["kind"] == "gmm");
  CHECK(doc["format_version"] == 1);

  SUBCASE("weights summing to 0.9") {
    doc["payload"]["weights"] = {FormatReal(0.45), FormatReal(0.45)};
    Spit(dir / "bad.json", doc.dump());
    CHECK(ThrownKind([&] { LoadGmm(dir / "bad.json"); }) == K(ErrorKind::kCorruptArtifact));
  }
  SUBCASE("future version") {
    doc["format_version"] = 2;
    Spit(dir / "bad.json", doc.dump());
    CHECK(ThrownKind([&] { LoadGmm(dir / "bad.json"); }) == K(ErrorKind::kUnsupportedVersion));
  }
  SUBCASE("shape disagreement") {
    doc["payload"]["dim"] = 3;
    Spit(dir / "bad.json", doc.dump());
    CHECK(ThrownKind([&] { LoadGmm(dir / "bad.json"); }) == K(ErrorKind::kCorruptArtifact));
  }
  SUBCASE("non-positive variance") {
    doc["payload"]["variances"][0][0] = FormatReal(-1.0);
    Spit(dir / "bad.json", doc.dump());
    CHECK(ThrownKind([&] { LoadGmm(dir / "bad.json"); }) == K(ErrorKind::kCorruptArtifact));
  }
  SUBCASE("not JSON at all") {
    Spit(dir / "bad.json", "{ nope");
    CHECK(ThrownKind([&] { LoadGmm(dir / "bad.json"); }) == K(ErrorKind::kCorruptArtifact));
  }
  SUBCASE("unknown kind") {
    doc["kind"] = "plda";
    Spit(dir / "bad.json", doc.dump());
    CHECK(ThrownKind([&] { LoadGmm(dir / "bad.json"); }) != -1);
  }
}

TEST_CASE("tampered reports and registries are rejected") {
  const auto dir = ScratchDir("store-report");
  std::mt19937_64 rng(5);
  SaveReport(RandomReport(&rng, ScoringMode::kLlr), dir / "r.json");
  nlohmann::json doc = nlohmann::json::parse(Slurp(dir / "r.json"));
  doc["payload"]["false_accepts"] = doc["payload"]["false_accepts"].get<int>() + 1;
  Spit(dir / "bad.json", doc.dump());
  CHECK(ThrownKind([&] { LoadReport(dir / "bad.json"); }) == K(ErrorKind::kCorruptArtifact));

  SaveRegistry(RandomRegistry(&rng, false), dir / "reg.json");
  nlohmann::json reg = nlohmann::json::parse(Slurp(dir / "reg.json"));
  reg["payload"]["entries"][1]["speaker_id"] = reg["payload"]["entries"][0]["speaker_id"];
  Spit(dir / "bad-reg.json", reg.dump());
  CHECK(ThrownKind([&] { LoadRegistry(dir / "bad-reg.json"); }) == K(ErrorKind::kCorruptArtifact));
}

TEST_CASE("VOXF1 byte layout") {
  RowMatrix m(2, 3);
  m << 1, 2, 3, 4, 5, -0.5;
  const std::vector<std::uint8_t> bytes = EncodeFeatures(FeatureMatrix(m));
  REQUIRE(bytes.size() == 5 + 4 + 4 + 6 * 4);
  CHECK(std::string(bytes.begin(), bytes.begin() + 5) == "VOXF1");
  CHECK(bytes[5] == 3);
  CHECK(bytes[6] == 0);
  CHECK(bytes[9] == 2);
  float last;
  std::uint32_t raw = 0;
  for (int i = 0; i < 4; ++i) raw |= static_cast<std::uint32_t>(bytes[bytes.size() - 4 + i]) << (8 * i);
  std::memcpy(&last, &raw, 4);
  CHECK(last == -0.5f);
  CHECK(DecodeFeatures(bytes) == FeatureMatrix(m));

  std::vector<std::uint8_t> cut = bytes;
  cut.pop_back();
  CHECK(ThrownKind([&] { DecodeFeatures(cut); }) == K(ErrorKind::kCorruptArtifact));
  std::vector<std::uint8_t> magic = bytes;
  magic[4] = '2';
  CHECK(ThrownKind([&] { DecodeFeatures(magic); }) != -1);

  // Values are stored as float32.
  RowMatrix fine(1, 1);
  fine << 0.1;
  CHECK(DecodeFeatures(EncodeFeatures(FeatureMatrix(fine))).frames()(0, 0) == static_cast<double>(0.1f));
}

TEST_CASE("CSV export") {
  std::mt19937_64 rng(6);
  const EvalReport r = RandomReport(&rng, ScoringMode::kLlr);
  const std::string csv = ReportToCsv(r);
  CHECK(csv.rfind("trial_id,speaker_id,raw_score,normalized_score,decision\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 6 * 3);
  CHECK(csv.find(",accept\n") != std::string::npos);
  CHECK(csv.find(",reject\n") != std::string::npos);
}

TEST_CASE("artifact kind names") {
  for (ArtifactKind k : {ArtifactKind::kFeatures, ArtifactKind::kGmm, ArtifactKind::kUbm,
                         ArtifactKind::kSpeakerModel, ArtifactKind::kTvModel, ArtifactKind::kIvector,
                         ArtifactKind::kRegistry, ArtifactKind::kReport})
    CHECK(ParseArtifactKind(ArtifactKindName(k)) == k);
}
