// Copyright 2026 The walsh-tf Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Experiment runner behind the walsh-tf executable.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "walsh/dyadic_function.hpp"
#include "walsh/report.hpp"
#include "walsh/tf_algorithm.hpp"

namespace walsh {

/// Invalid configuration; the message names the offending field (and line,
/// for config files).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::string_view kExperiments[] = {
    "transform",   "carleson-identity", "decompose", "zygmund", "restricted-weak",
    "strong-type", "distribution",      "antonov",   "final-norms", "verify-certificate"};

struct RunConfig {
  std::string experiment;
  int resolution = 10;
  double lacunary_ratio = 2.0;
  std::size_t lacunary_terms = 0;             ///< 0: every term below 2^K
  std::vector<std::uint64_t> lacunary_list;   ///< overrides ratio/terms when non-empty
  int m_min = 2;
  int m_max = 10;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  std::string out = ".";
  std::string format = "csv";                 ///< csv | json
  Constants constants;
  std::string input;                          ///< optional f (JSON or CSV)
  std::string certificate;                    ///< verify-certificate only
  int fine_resolution = 0;                    ///< antonov K'; 0 selects min(K + 4, 16)
  std::size_t trials = 8;
  std::string n_strategy = "argmax";          ///< argmax | first_term | last_term
};

/// Throws ConfigError unless K <= 16, the experiment is known, the lacunary
/// spec is valid and fits 2^K, and the remaining fields are in range.
void validate(const RunConfig& config);

/// Applies C_NAME=VALUE; throws ConfigError for unknown names or bad values.
void set_constant(Constants& constants, std::string_view assignment);

/// Overlays a JSON config document; unknown keys and type errors throw
/// ConfigError naming the key, parse errors name the line.
void apply_config_json(RunConfig& config, std::string_view text, std::string_view origin = "config");

/// Canonical JSON echo of every field.
std::string config_to_json(const RunConfig& config);

LacunarySequence make_sequence(const RunConfig& config);

struct RunOutcome {
  ExperimentReport report;
  std::vector<std::string> written;  ///< output paths, in write order
  int exit_code = 0;                 ///< 0 iff every assertion passed
};

/// Runs the experiment and writes its outputs under config.out. On any
/// exception the files written so far are removed before rethrowing.
RunOutcome run(const RunConfig& config, std::ostream& log);

/// Entry point: 0 pass, 1 assertion failure, 2 usage / config / input error.
int run_main(int argc, char** argv);

}  // namespace walsh
