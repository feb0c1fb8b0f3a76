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

#include "walsh/certificate_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace walsh {

namespace {

using json = nlohmann::json;

json function_json(const DyadicFunction& f) {
  return json{{"K", f.resolution()}, {"values", std::vector<double>(f.values().begin(), f.values().end())}};
}

DyadicFunction function_from(const json& j, const char* what) {
  if (!j.is_object() || !j.contains("K") || !j.contains("values")) {
    throw FormatError(std::string(what) + ": expected {\"K\": int, \"values\": [...]}");
  }
  try {
    return DyadicFunction(j.at("K").get<int>(), j.at("values").get<std::vector<double>>());
  } catch (const json::exception& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  }
}

json tiles_json(const TileCollection& tiles) {
  json out = json::array();
  for (const auto& p : tiles) out.push_back(p.to_string());
  return out;
}

TileCollection tiles_from(const json& j, const char* what) {
  if (!j.is_array()) throw FormatError(std::string(what) + ": expected an array of \"s:m:n\" strings");
  std::vector<BiTile> out;
  for (const auto& item : j) {
    if (!item.is_string()) throw FormatError(std::string(what) + ": tile entries must be strings");
    try {
      out.push_back(BiTile::parse(item.get<std::string>()));
    } catch (const std::invalid_argument& e) {
      throw FormatError(std::string(what) + ": " + e.what());
    }
  }
  return TileCollection(std::move(out));
}

double number(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) throw FormatError(std::string("missing number '") + key + "'");
  return j.at(key).get<double>();
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

std::string dyadic_function_to_json(const DyadicFunction& f) { return function_json(f).dump(); }

DyadicFunction parse_dyadic_function(std::string_view text) {
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') return function_from(parse_json(text), "function");
  std::vector<double> values;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number_of_line = 0;
  while (std::getline(in, line)) {
    ++number_of_line;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(line, &used);
    } catch (const std::exception&) {
      throw FormatError("line " + std::to_string(number_of_line) + ": not a number");
    }
    if (line.find_first_not_of(" \t\r", used) != std::string::npos) {
      throw FormatError("line " + std::to_string(number_of_line) + ": trailing characters");
    }
    values.push_back(v);
  }
  const std::size_t n = values.size();
  if (n == 0 || (n & (n - 1)) != 0) throw FormatError("CSV function needs 2^K values, got " + std::to_string(n));
  int K = 0;
  while ((std::size_t{1} << K) < n) ++K;
  return DyadicFunction(K, std::move(values));
}

std::string tile_collection_to_json(const TileCollection& tiles) { return tiles_json(tiles).dump(); }

TileCollection parse_tile_collection(std::string_view text) { return tiles_from(parse_json(text), "tiles"); }

std::string certificate_to_json(const SplitCertificate& cert, const DyadicFunction& f, const DyadicFunction& G,
                                const ChoiceFunction& N) {
  json trees = json::array();
  for (const auto& t : cert.trees) {
    json members = json::array();
    for (const auto& p : t.members) members.push_back(p.to_string());
    trees.push_back({{"top", t.top.to_string()}, {"members", members}});
  }
  json j{
      {"kind", to_string(cert.kind)},
      {"resolution", f.resolution()},
      {"parameter", cert.parameter},
      {"constant", cert.constant},
      {"inputs",
       {{"f", function_json(f)},
        {"G", function_json(G)},
        {"N", std::vector<std::uint64_t>(N.values().begin(), N.values().end())}}},
      {"input", tiles_json(cert.input)},
      {"small", tiles_json(cert.small)},
      {"big", tiles_json(cert.big)},
      {"trees", trees},
      {"tree_top_length_sum", cert.tree_top_length_sum},
      {"energy_unit", cert.energy_unit},
      {"claimed_bound", cert.claimed_bound},
      {"measured_ratio", cert.measured_ratio},
      {"small_value", cert.small_value},
      {"bessel_sum", cert.bessel_sum},
      {"max_cross_inner", cert.max_cross_inner},
      {"holds", cert.holds},
  };
  return j.dump(2);
}

StoredCertificate parse_certificate(std::string_view text) {
  const json j = parse_json(text);
  if (!j.is_object()) throw FormatError("certificate must be a JSON object");
  StoredCertificate out;
  auto& c = out.certificate;
  const std::string kind = j.value("kind", "");
  if (kind == "density") {
    c.kind = SplitKind::density;
  } else if (kind == "size") {
    c.kind = SplitKind::size;
  } else {
    throw FormatError("certificate kind must be \"density\" or \"size\"");
  }
  if (!j.contains("inputs")) throw FormatError("certificate lacks its inputs");
  const auto& in = j.at("inputs");
  out.f = function_from(in.at("f"), "inputs.f");
  out.G = function_from(in.at("G"), "inputs.G");
  try {
    out.N = ChoiceFunction(out.f.resolution(), in.at("N").get<std::vector<std::uint64_t>>());
  } catch (const json::exception& e) {
    throw FormatError(std::string("inputs.N: ") + e.what());
  }
  const int K = static_cast<int>(number(j, "resolution"));
  if (K != out.f.resolution() || K != out.G.resolution()) {
    throw ResolutionMismatch("certificate resolution " + std::to_string(K) + " disagrees with its inputs");
  }
  c.parameter = number(j, "parameter");
  c.constant = number(j, "constant");
  c.input = tiles_from(j.at("input"), "input");
  c.small = tiles_from(j.at("small"), "small");
  c.big = tiles_from(j.at("big"), "big");
  for (const auto& t : j.at("trees")) {
    Tree tree;
    try {
      tree.top = TreeTop::parse(t.at("top").get<std::string>());
      for (const auto& m : t.at("members")) tree.members.push_back(BiTile::parse(m.get<std::string>()));
    } catch (const std::exception& e) {
      throw FormatError(std::string("trees: ") + e.what());
    }
    c.trees.push_back(std::move(tree));
  }
  c.tree_top_length_sum = number(j, "tree_top_length_sum");
  c.energy_unit = number(j, "energy_unit");
  c.claimed_bound = number(j, "claimed_bound");
  c.measured_ratio = number(j, "measured_ratio");
  c.small_value = number(j, "small_value");
  c.bessel_sum = number(j, "bessel_sum");
  c.max_cross_inner = number(j, "max_cross_inner");
  c.holds = j.value("holds", false);
  return out;
}

CertificateVerification verify_stored(const StoredCertificate& stored, const std::optional<DyadicFunction>& f_override) {
  const DyadicFunction& f = f_override ? *f_override : stored.f;
  if (f.resolution() != stored.f.resolution()) {
    throw ResolutionMismatch("certificate is at K = " + std::to_string(stored.f.resolution()) +
                             " but the supplied function is at K = " + std::to_string(f.resolution()));
  }
  const auto check = verify_split(stored.certificate, f, stored.G, stored.N);
  CertificateVerification out;
  const auto& c = stored.certificate;
  auto diff = [&](const char* field, double claimed, double recomputed) {
    const bool agrees =
        std::abs(claimed - recomputed) <= 1e-12 * std::max({1.0, std::abs(claimed), std::abs(recomputed)});
    out.diffs.push_back({field, claimed, recomputed, agrees});
  };
  diff("tree_top_length_sum", c.tree_top_length_sum, check.recomputed_length_sum);
  diff("small_value", c.small_value, check.recomputed_small_value);
  diff("measured_ratio", c.measured_ratio, check.recomputed_ratio);
  if (c.kind == SplitKind::size) diff("bessel_sum", c.bessel_sum, check.recomputed_bessel_sum);
  out.failures = check.failures;
  if (c.holds != check.holds()) {
    out.failures.push_back(std::string("holds: claimed ") + (c.holds ? "true" : "false") + ", recomputed " +
                           (check.holds() ? "true" : "false"));
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << contents;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace walsh
