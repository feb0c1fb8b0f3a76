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

// Experiment reports: named tables of raw measurements, the assertions made
// against configured constants, and their CSV / JSON renderings.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace walsh {

/// Shortest round-trip form (%.17g); "inf" / "nan" spelled out.
std::string format_number(double v);

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  /// Throws std::invalid_argument if the arity differs from `columns`.
  void add_row(std::vector<std::string> row);
};

struct Assertion {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  bool passed = false;
};

struct ExperimentReport {
  std::string experiment;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<Table> tables;
  std::vector<Assertion> assertions;
  /// Auxiliary documents (certificates) keyed by file stem.
  std::vector<std::pair<std::string, std::string>> attachments;

  void parameter(std::string key, std::string value) { parameters.emplace_back(std::move(key), std::move(value)); }
  /// Records measured <= bound.
  void check(std::string name, double measured, double bound);
  /// Records an exact predicate; measured is 1 or 0 against bound 1.
  void require(std::string name, bool ok);
  bool passed() const;
};

/// Header line, then one comma-separated line per row. Deterministic.
std::string csv_body(const Table& table);
/// "# generated <timestamp>" followed by csv_body.
std::string csv_document(const Table& table, std::string_view timestamp);
/// Drops a leading "# generated" line, if any.
std::string_view strip_timestamp(std::string_view csv);

/// SHA-1 of "blob <size>\0<content>", hex encoded.
std::string git_blob_hash(std::string_view content);

/// {experiment, seed, config, input_hash, parameters, tables, assertions, passed}.
/// `config_json` must be a JSON document; it is embedded verbatim as a value.
std::string json_envelope(const ExperimentReport& report, std::string_view config_json, std::string_view input_hash,
                          std::string_view timestamp);

/// UTC ISO-8601 of the current time.
std::string utc_timestamp();

}  // namespace walsh
