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

// Dyadic rectangles of the Walsh phase plane [0,1) x [0,oo).
//
// A rectangle with time scale s and time index m has I = [m 2^-s, (m+1) 2^-s).
// Its frequency interval is [n 2^e, (n+1) 2^e) for a frequency exponent e:
// tiles (area 1) have e = s, bi-tiles (area 2) have e = s + 1.

#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace walsh {

struct Rect {
  int scale = 0;            ///< |I| = 2^-scale
  std::uint64_t time = 0;   ///< I = [time 2^-scale, (time+1) 2^-scale)
  int freq_log = 0;         ///< |omega| = 2^freq_log
  std::uint64_t freq = 0;   ///< omega = [freq 2^freq_log, (freq+1) 2^freq_log)

  double time_length() const;
  std::uint64_t freq_begin() const { return freq << freq_log; }
  std::uint64_t freq_end() const { return (freq + 1) << freq_log; }
  bool freq_contains(std::uint64_t xi) const { return xi >> freq_log == freq; }
  /// Cell range [begin, end) of I at resolution K >= scale.
  std::uint64_t cell_begin(int resolution) const { return time << (resolution - scale); }
  std::uint64_t cell_end(int resolution) const { return (time + 1) << (resolution - scale); }

  bool operator==(const Rect&) const = default;
};

bool time_contains(const Rect& outer, const Rect& inner);
bool freq_contains(const Rect& outer, const Rect& inner);
/// a <= b in the phase-plane order: I_a subset I_b and omega_b subset omega_a.
bool rect_leq(const Rect& a, const Rect& b);
bool rects_intersect(const Rect& a, const Rect& b);

/// Dyadic rectangle of area 1.
struct Tile {
  int scale = 0;
  std::uint64_t time = 0;
  std::uint64_t freq = 0;

  Rect rect() const { return {scale, time, scale, freq}; }
  double time_length() const { return rect().time_length(); }

  std::string to_string() const;
  static Tile parse(std::string_view text);

  auto operator<=>(const Tile&) const = default;
};

/// Dyadic rectangle of area 2; frequency interval [n 2^{s+1}, (n+1) 2^{s+1}).
struct BiTile {
  int scale = 0;
  std::uint64_t time = 0;
  std::uint64_t freq = 0;

  Rect rect() const { return {scale, time, scale + 1, freq}; }
  double time_length() const { return rect().time_length(); }
  Tile lower() const { return {scale, time, 2 * freq}; }
  Tile upper() const { return {scale, time, 2 * freq + 1}; }

  std::string to_string() const;
  static BiTile parse(std::string_view text);

  auto operator<=>(const BiTile&) const = default;
};

/// P <= P2: I_P subset I_P2 and omega_P2 subset omega_P (reflexive).
bool bitile_leq(const BiTile& p, const BiTile& p2);
/// Strict variant.
bool bitile_less(const BiTile& p, const BiTile& p2);
bool tile_leq(const Tile& p, const Tile& p2);
bool tile_less(const Tile& p, const Tile& p2);

/// Top of a tree: a bi-tile, or (for trees over [0,1]) an area-1 tile
/// [0,1) x [k, k+1) standing in for a degenerate bi-tile.
struct TreeTop {
  int scale = 0;
  std::uint64_t time = 0;
  std::uint64_t freq = 0;
  bool area_one = false;

  static TreeTop from(const BiTile& p) { return {p.scale, p.time, p.freq, false}; }
  static TreeTop unit(std::uint64_t k) { return {0, 0, k, true}; }

  Rect rect() const { return {scale, time, area_one ? scale : scale + 1, freq}; }
  double time_length() const { return rect().time_length(); }

  std::string to_string() const;
  static TreeTop parse(std::string_view text);

  auto operator<=>(const TreeTop&) const = default;
};

}  // namespace walsh

template <>
struct std::hash<walsh::BiTile> {
  std::size_t operator()(const walsh::BiTile& p) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(p.scale) * 0x9E3779B97F4A7C15ull;
    h ^= p.time + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    h ^= p.freq + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

template <>
struct std::hash<walsh::TreeTop> {
  std::size_t operator()(const walsh::TreeTop& t) const noexcept {
    return std::hash<walsh::BiTile>{}({t.scale, t.time, t.freq}) ^ (t.area_one ? 0x51ED27ull : 0ull);
  }
};
