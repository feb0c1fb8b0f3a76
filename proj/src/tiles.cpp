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

#include "walsh/tiles.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace walsh {

double Rect::time_length() const { return std::ldexp(1.0, -scale); }

bool time_contains(const Rect& outer, const Rect& inner) {
  return inner.scale >= outer.scale && (inner.time >> (inner.scale - outer.scale)) == outer.time;
}

bool freq_contains(const Rect& outer, const Rect& inner) {
  return inner.freq_log <= outer.freq_log &&
         (inner.freq >> (outer.freq_log - inner.freq_log)) == outer.freq;
}

bool rect_leq(const Rect& a, const Rect& b) { return time_contains(b, a) && freq_contains(a, b); }

bool rects_intersect(const Rect& a, const Rect& b) {
  const bool times = time_contains(a, b) || time_contains(b, a);
  const bool freqs = freq_contains(a, b) || freq_contains(b, a);
  return times && freqs;
}

bool bitile_leq(const BiTile& p, const BiTile& p2) { return rect_leq(p.rect(), p2.rect()); }
bool bitile_less(const BiTile& p, const BiTile& p2) { return p != p2 && bitile_leq(p, p2); }
bool tile_leq(const Tile& p, const Tile& p2) { return rect_leq(p.rect(), p2.rect()); }
bool tile_less(const Tile& p, const Tile& p2) { return p != p2 && tile_leq(p, p2); }

namespace {

std::vector<std::uint64_t> split_fields(std::string_view text, std::size_t expected_min,
                                        std::size_t expected_max) {
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t colon = text.find(':', pos);
    const std::string_view field = text.substr(pos, colon == std::string_view::npos ? text.npos : colon - pos);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
      throw std::invalid_argument("malformed tile text '" + std::string(text) + "'");
    }
    out.push_back(v);
    if (colon == std::string_view::npos) break;
    pos = colon + 1;
  }
  if (out.size() < expected_min || out.size() > expected_max) {
    throw std::invalid_argument("tile text '" + std::string(text) + "' has the wrong field count");
  }
  if (out[0] > 62 || out[1] >= (std::uint64_t{1} << out[0])) {
    throw std::invalid_argument("tile text '" + std::string(text) + "' has a time index outside [0,1]");
  }
  return out;
}

std::string join(int s, std::uint64_t m, std::uint64_t n) {
  return std::to_string(s) + ":" + std::to_string(m) + ":" + std::to_string(n);
}

}  // namespace

std::string Tile::to_string() const { return join(scale, time, freq); }

Tile Tile::parse(std::string_view text) {
  const auto f = split_fields(text, 3, 3);
  return {static_cast<int>(f[0]), f[1], f[2]};
}

std::string BiTile::to_string() const { return join(scale, time, freq); }

BiTile BiTile::parse(std::string_view text) {
  const auto f = split_fields(text, 3, 3);
  return {static_cast<int>(f[0]), f[1], f[2]};
}

// Area-one tops carry a fourth field "1": "0:0:k:1".
std::string TreeTop::to_string() const {
  return join(scale, time, freq) + (area_one ? ":1" : "");
}

TreeTop TreeTop::parse(std::string_view text) {
  const auto f = split_fields(text, 3, 4);
  TreeTop t{static_cast<int>(f[0]), f[1], f[2], f.size() == 4 && f[3] == 1};
  if (f.size() == 4 && f[3] != 1) throw std::invalid_argument("bad tree top area flag");
  if (t.area_one && (t.scale != 0 || t.time != 0)) {
    throw std::invalid_argument("area-one tree tops must live over [0,1]");
  }
  return t;
}

}  // namespace walsh
