// tools/cli.h

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

#ifndef VOXID_TOOLS_CLI_H_
#define VOXID_TOOLS_CLI_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "voxid/dsp-frontend.h"
#include "voxid/gmm-core.h"
#include "voxid/scoring.h"

namespace voxid {

/// Every setting a command may use.  Defaults are the library defaults;
/// a key = value file overrides them and command-line flags override that.
struct CliConfig {
  MfccConfig mfcc;
  GmmTrainingConfig gmm;
  double relevance = 16.0;
  int tv_rank = 8;
  int tv_iterations = 10;
  ScoringMode mode = ScoringMode::kLlr;
  double threshold = 1.0;
  std::uint64_t seed = 0;

  /// Throws InvalidConfig or NegativeRelevance.
  void Validate() const;
};

/// Lines of "key = value"; '#' starts a comment.  Throws IoFailure,
/// InvalidConfig for a malformed line.
std::map<std::string, std::string> ReadKeyValueFile(const std::filesystem::path &path);

/// Applies settings on top of `base`.  Throws Usage for an unknown key and
/// InvalidConfig for a value that does not parse.
CliConfig ApplySettings(CliConfig base, const std::map<std::string, std::string> &settings);

/// Bar chart: one rect per (label, score), the threshold as a horizontal line.
std::string ScoreChartSvg(const std::string &title,
                          const std::vector<std::pair<std::string, double>> &bars,
                          double threshold);

/// Runs the voxid command line.  Returns the process exit status: 0 success,
/// 1 domain error, 2 input-data error, 64 usage or configuration error.
int RunCli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace voxid

#endif  // VOXID_TOOLS_CLI_H_
