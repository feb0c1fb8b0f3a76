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

#include "walsh/report.hpp"

#include <openssl/evp.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <memory>
#include <stdexcept>

#include "json.hpp"

namespace walsh {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return buf.data();
}

void Table::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size()) {
    throw std::invalid_argument("table " + name + ": row has " + std::to_string(row.size()) + " fields, expected " +
                                std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

void ExperimentReport::check(std::string name, double measured, double bound) {
  assertions.push_back({std::move(name), measured, bound, measured <= bound});
}

void ExperimentReport::require(std::string name, bool ok) {
  assertions.push_back({std::move(name), ok ? 1.0 : 0.0, 1.0, ok});
}

bool ExperimentReport::passed() const {
  for (const auto& a : assertions) {
    if (!a.passed) return false;
  }
  return true;
}

namespace {

void append_field(std::string& out, const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) {
    out += field;
    return;
  }
  out += '"';
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

void append_line(std::string& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    append_field(out, fields[i]);
  }
  out += '\n';
}

constexpr std::string_view kStampPrefix = "# generated ";

}  // namespace

std::string csv_body(const Table& table) {
  std::string out;
  append_line(out, table.columns);
  for (const auto& row : table.rows) append_line(out, row);
  return out;
}

std::string csv_document(const Table& table, std::string_view timestamp) {
  std::string out(kStampPrefix);
  out += timestamp;
  out += '\n';
  return out + csv_body(table);
}

std::string_view strip_timestamp(std::string_view csv) {
  if (!csv.starts_with(kStampPrefix)) return csv;
  const auto eol = csv.find('\n');
  return eol == std::string_view::npos ? std::string_view{} : csv.substr(eol + 1);
}

std::string git_blob_hash(std::string_view content) {
  const std::string header = "blob " + std::to_string(content.size()) + '\0';
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha1(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), header.data(), header.size()) != 1 ||
      EVP_DigestUpdate(ctx.get(), content.data(), content.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1) {
    throw std::runtime_error("SHA-1 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 0xF];
  }
  return hex;
}

std::string json_envelope(const ExperimentReport& report, std::string_view config_json, std::string_view input_hash,
                          std::string_view timestamp) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["experiment"] = report.experiment;
  doc["generated"] = timestamp;
  doc["seed"] = report.seed;
  doc["config"] = ordered_json::parse(config_json);
  doc["input_hash"] = input_hash;
  auto& params = doc["parameters"] = ordered_json::object();
  for (const auto& [k, v] : report.parameters) params[k] = v;
  auto& tables = doc["tables"] = ordered_json::object();
  for (const auto& t : report.tables) {
    tables[t.name] = {{"columns", t.columns}, {"rows", t.rows}};
  }
  auto& asserts = doc["assertions"] = ordered_json::array();
  for (const auto& a : report.assertions) {
    asserts.push_back({{"name", a.name},
                       {"measured", format_number(a.measured)},
                       {"bound", format_number(a.bound)},
                       {"passed", a.passed}});
  }
  doc["passed"] = report.passed();
  return doc.dump(2) + '\n';
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::array<char, 32> buf{};
  std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf.data();
}

}  // namespace walsh
