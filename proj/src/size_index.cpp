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

#include "walsh/size_index.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace walsh {

std::vector<std::uint64_t> SizeIndex::admitted_unit_tops(const TileCollection& tiles) {
  std::vector<std::uint64_t> out;
  for (const auto& p : tiles) {
    if (p.scale != 0) continue;
    out.push_back(2 * p.freq);
    out.push_back(2 * p.freq + 1);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SizeIndex::SizeIndex(const TileCollection& tiles, const CoefficientTable& coeffs)
    : SizeIndex(tiles, coeffs, admitted_unit_tops(tiles)) {}

SizeIndex::SizeIndex(const TileCollection& tiles, const CoefficientTable& coeffs,
                     std::vector<std::uint64_t> unit_tops)
    : coeffs_(&coeffs), unit_tops_(std::move(unit_tops)) {
  std::sort(unit_tops_.begin(), unit_tops_.end());
  members_.reserve(tiles.size());
  for (const auto& p : tiles) {
    members_.insert(p);
    const double c = coeffs(p.lower());
    if (c == 0.0) continue;
    for_each_top(p, [&](const TreeTop& t) { sums_[t] += c * c; });
  }
}

template <class Fn>
void SizeIndex::for_each_top(const BiTile& p, Fn&& fn) const {
  for (int s = 0; s < p.scale; ++s) {
    const std::uint64_t m = p.time >> (p.scale - s);
    const std::uint64_t len = std::uint64_t{1} << (p.scale - s - 1);
    const std::uint64_t first = (2 * p.freq + 1) * len;
    for (std::uint64_t n = first; n < first + len; ++n) fn(TreeTop{s, m, n, false});
  }
  const std::uint64_t upper = 2 * p.freq + 1;
  for (std::uint64_t k : unit_tops_) {
    if ((k >> p.scale) == upper) fn(TreeTop::unit(k));
  }
}

double SizeIndex::normalized(const TreeTop& top) const {
  auto it = sums_.find(top);
  return it == sums_.end() ? 0.0 : std::ldexp(it->second, top.scale);
}

std::vector<BiTile> SizeIndex::members_below(const TreeTop& top) const {
  std::vector<BiTile> out;
  const std::uint64_t omega = top.rect().freq_begin();
  const int K = coeffs_->resolution();
  for (int s = top.scale; s <= K; ++s) {
    const std::uint64_t n = omega >> (s + 1);
    const std::uint64_t m0 = top.time << (s - top.scale);
    const std::uint64_t m1 = (top.time + 1) << (s - top.scale);
    for (std::uint64_t m = m0; m < m1; ++m) {
      const BiTile p{s, m, n};
      if (members_.count(p) && below_top(p, top)) out.push_back(p);
    }
  }
  return out;
}

double SizeIndex::recompute(const TreeTop& top) const {
  double total = 0.0;
  for (const auto& p : members_below(top)) {
    if (!size_eligible(p, top)) continue;
    const double c = (*coeffs_)(p.lower());
    total += c * c;
  }
  return std::ldexp(total, top.scale);
}

SizeResult SizeIndex::sup() const {
  SizeResult r;
  double best = 0.0;
  for (const auto& [top, sum] : sums_) {
    const double v = std::ldexp(sum, top.scale);
    if (v > best || (v == best && v > 0.0 && r.witness && top < *r.witness)) {
      best = v;
      r.witness = top;
    }
  }
  r.size = std::sqrt(best);
  return r;
}

void SizeIndex::add(const TreeTop& top, double amount) {
  double& sum = sums_[top];
  const bool was = level_ >= 0.0 && std::ldexp(sum, top.scale) > level_;
  sum += amount;
  if (sum < 0.0) sum = 0.0;
  if (level_ < 0.0) return;
  const bool now = std::ldexp(sum, top.scale) > level_;
  if (was && !now) tracked_.erase(key(top));
  if (!was && now) tracked_.insert(key(top));
}

void SizeIndex::remove(const BiTile& p) {
  if (!members_.erase(p)) return;
  const double c = (*coeffs_)(p.lower());
  if (c == 0.0) return;
  for_each_top(p, [&](const TreeTop& t) { add(t, -c * c); });
}

void SizeIndex::track_above(double level) {
  if (!(level >= 0.0)) throw std::invalid_argument("tracking level must be nonnegative");
  level_ = level;
  tracked_.clear();
  for (const auto& [top, sum] : sums_) {
    if (std::ldexp(sum, top.scale) > level_) tracked_.insert(key(top));
  }
}

TreeTop SizeIndex::first_tracked() const {
  if (tracked_.empty()) throw std::logic_error("no tracked tops");
  const auto& [omega, scale, time, area_one] = *tracked_.begin();
  const int freq_log = area_one ? scale : scale + 1;
  return TreeTop{scale, time, omega >> freq_log, area_one};
}

void SizeIndex::reset(const TreeTop& top, double normalized_value) {
  const double target = std::ldexp(normalized_value, -top.scale);
  auto it = sums_.find(top);
  const double current = it == sums_.end() ? 0.0 : it->second;
  add(top, target - current);
}

SizeResult size_with_witness(const TileCollection& tiles, const CoefficientTable& coeffs) {
  return SizeIndex(tiles, coeffs).sup();
}

double size(const TileCollection& tiles, const CoefficientTable& coeffs) {
  return size_with_witness(tiles, coeffs).size;
}

double size(const TileCollection& tiles, const DyadicFunction& f) { return size(tiles, CoefficientTable(f)); }

}  // namespace walsh
