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

// Per-top sums of |<f, w_{P_l}>|^2 over the size-eligible members of a
// collection, with incremental removal.
//
// A member P = I x omega contributes to a bi-tile top T exactly when
// s_T < s_P, I_T is the ancestor of I_P at scale s_T and omega_T lies in the
// upper half omega_{P_u}; that is 2^{s_P - s_T - 1} consecutive frequency
// blocks per coarser scale. It contributes to the area-one top
// [0,1) x [k,k+1) exactly when k is in omega_{P_u}.

#pragma once

#include <cstdint>
#include <set>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "walsh/phase_plane.hpp"

namespace walsh {

class SizeIndex {
 public:
  /// Area-one tops admitted from the scale-0 members of `tiles`.
  SizeIndex(const TileCollection& tiles, const CoefficientTable& coeffs);
  SizeIndex(const TileCollection& tiles, const CoefficientTable& coeffs, std::vector<std::uint64_t> unit_tops);

  /// Frequencies k of the admitted area-one tops, sorted.
  const std::vector<std::uint64_t>& unit_tops() const { return unit_tops_; }
  static std::vector<std::uint64_t> admitted_unit_tops(const TileCollection& tiles);

  std::size_t member_count() const { return members_.size(); }
  bool has_member(const BiTile& p) const { return members_.count(p) > 0; }

  /// sum / |I_T| as currently accumulated.
  double normalized(const TreeTop& top) const;
  /// Same quantity summed from scratch over current members.
  double recompute(const TreeTop& top) const;
  SizeResult sup() const;

  /// Current members P <= top (the full tree under the top).
  std::vector<BiTile> members_below(const TreeTop& top) const;

  /// Removes P and withdraws its contributions.
  void remove(const BiTile& p);

  /// Keeps an ordered set of tops whose normalized sum exceeds `level`,
  /// ordered lowest omega_T first, then larger |I_T|.
  void track_above(double level);
  bool any_tracked() const { return !tracked_.empty(); }
  TreeTop first_tracked() const;
  /// Overwrites the accumulated sum of `top` (drift repair).
  void reset(const TreeTop& top, double normalized_value);

 private:
  using Key = std::tuple<std::uint64_t, int, std::uint64_t, bool>;
  static Key key(const TreeTop& t) { return {t.rect().freq_begin(), t.scale, t.time, t.area_one}; }

  template <class Fn>
  void for_each_top(const BiTile& p, Fn&& fn) const;
  void add(const TreeTop& top, double amount);

  const CoefficientTable* coeffs_;
  std::unordered_set<BiTile> members_;
  std::vector<std::uint64_t> unit_tops_;
  std::unordered_map<TreeTop, double> sums_;  // raw sums, not normalized
  double level_ = -1.0;                       // < 0: not tracking
  std::set<Key> tracked_;
};

}  // namespace walsh
