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

// JSON forms of dyadic functions, tile collections and split certificates.
//
// A certificate document embeds the raw inputs (f, G, N) next to the claimed
// numbers so that it can be re-verified without redoing the split.

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "walsh/choice_function.hpp"
#include "walsh/dyadic_function.hpp"
#include "walsh/tf_algorithm.hpp"

namespace walsh {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ResolutionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// {"K": int, "values": [..]}.
std::string dyadic_function_to_json(const DyadicFunction& f);
/// JSON object as above, or headerless CSV with one value per line (2^K lines).
DyadicFunction parse_dyadic_function(std::string_view text);

/// JSON array of "s:m:n" strings.
std::string tile_collection_to_json(const TileCollection& tiles);
TileCollection parse_tile_collection(std::string_view text);

struct StoredCertificate {
  SplitCertificate certificate;
  DyadicFunction f;
  DyadicFunction G;
  ChoiceFunction N{0, {0}};
};

std::string certificate_to_json(const SplitCertificate& cert, const DyadicFunction& f, const DyadicFunction& G,
                                const ChoiceFunction& N);
StoredCertificate parse_certificate(std::string_view text);

struct CertificateDiff {
  std::string field;
  double claimed = 0.0;
  double recomputed = 0.0;
  bool agrees = false;
};

struct CertificateVerification {
  std::vector<CertificateDiff> diffs;
  std::vector<std::string> failures;
  bool holds() const { return failures.empty(); }
};

/// Recomputes the stored certificate. `f_override` replaces the embedded f
/// and must share its resolution.
CertificateVerification verify_stored(const StoredCertificate& stored,
                                      const std::optional<DyadicFunction>& f_override = std::nullopt);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace walsh
