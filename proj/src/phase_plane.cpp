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

#include "walsh/phase_plane.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "walsh/walsh.hpp"

namespace walsh {

std::vector<std::uint32_t> reversal_table(int resolution) {
  std::vector<std::uint32_t> rev(std::size_t{1} << resolution);
  for (std::size_t i = 0; i < rev.size(); ++i) rev[i] = static_cast<std::uint32_t>(bit_reverse(i, resolution));
  return rev;
}

bool representable(const Tile& p, int resolution) {
  return p.scale >= 0 && p.scale <= resolution && p.time < (std::uint64_t{1} << p.scale) &&
         p.freq < (std::uint64_t{1} << (resolution - p.scale));
}

DyadicFunction wave_packet(const Tile& p, int resolution) {
  if (!representable(p, resolution)) {
    throw std::invalid_argument("tile " + p.to_string() + " is not representable at resolution " +
                                std::to_string(resolution));
  }
  DyadicFunction w(resolution);
  const double amp = std::sqrt(std::ldexp(1.0, p.scale));
  const auto begin = p.rect().cell_begin(resolution);
  const auto end = p.rect().cell_end(resolution);
  for (std::uint64_t i = begin; i < end; ++i) {
    w.set(i, packet_value(p, resolution, i, bit_reverse(i, resolution), amp));
  }
  return w;
}

CoefficientTable::CoefficientTable(const DyadicFunction& f) : resolution_(f.resolution()) {
  const int K = resolution_;
  local_.resize(static_cast<std::size_t>(K) + 1);
  const auto values = f.values();
  for (int s = 0; s <= K; ++s) {
    const std::size_t width = std::size_t{1} << (K - s);
    auto& table = local_[static_cast<std::size_t>(s)];
    table.resize(f.size());
    const double norm = std::sqrt(std::ldexp(1.0, -s));
    for (std::size_t m = 0; m < (std::size_t{1} << s); ++m) {
      const auto local = walsh_transform(values.subspan(m * width, width));
      for (std::size_t n = 0; n < width; ++n) table[m * width + n] = norm * local[n];
    }
  }
}

double CoefficientTable::operator()(const Tile& p) const {
  if (p.scale < 0 || p.scale > resolution_ || p.time >= (std::uint64_t{1} << p.scale)) {
    throw std::invalid_argument("tile " + p.to_string() + " is finer than a cell or outside [0,1]");
  }
  const std::uint64_t width = std::uint64_t{1} << (resolution_ - p.scale);
  if (p.freq >= width) return 0.0;
  return local_[static_cast<std::size_t>(p.scale)][p.time * width + p.freq];
}

double coefficient(const DyadicFunction& f, const Tile& p) { return CoefficientTable(f)(p); }

bool below_top(const BiTile& p, const TreeTop& top) { return rect_leq(p.rect(), top.rect()); }

bool size_eligible(const BiTile& p, const TreeTop& top) {
  return !rects_intersect(p.lower().rect(), top.rect());
}

std::vector<BiTile> Tree::size_eligible() const {
  std::vector<BiTile> out;
  for (const auto& p : members) {
    if (walsh::size_eligible(p, top)) out.push_back(p);
  }
  return out;
}

bool Tree::members_below_top() const {
  return std::all_of(members.begin(), members.end(), [&](const BiTile& p) { return below_top(p, top); });
}

TileCollection::TileCollection(std::vector<BiTile> bitiles) : bitiles_(std::move(bitiles)) {
  std::sort(bitiles_.begin(), bitiles_.end());
  bitiles_.erase(std::unique(bitiles_.begin(), bitiles_.end()), bitiles_.end());
}

bool TileCollection::contains(const BiTile& p) const {
  return std::binary_search(bitiles_.begin(), bitiles_.end(), p);
}

TileCollection TileCollection::united(const TileCollection& other) const {
  std::vector<BiTile> out;
  std::set_union(bitiles_.begin(), bitiles_.end(), other.bitiles_.begin(), other.bitiles_.end(),
                 std::back_inserter(out));
  return TileCollection(std::move(out));
}

TileCollection TileCollection::minus(const TileCollection& other) const {
  std::vector<BiTile> out;
  std::set_difference(bitiles_.begin(), bitiles_.end(), other.bitiles_.begin(), other.bitiles_.end(),
                      std::back_inserter(out));
  return TileCollection(std::move(out));
}

double TileCollection::certificate_length_sum() const {
  if (!certificate_) return 0.0;
  double total = 0.0;
  for (const auto& t : *certificate_) total += t.top_length();
  return total;
}

bool TileCollection::certificate_covers() const {
  if (!certificate_) return false;
  std::set<BiTile> covered;
  for (const auto& t : *certificate_) {
    if (!t.members_below_top()) return false;
    covered.insert(t.members.begin(), t.members.end());
  }
  return std::all_of(bitiles_.begin(), bitiles_.end(), [&](const BiTile& p) { return covered.count(p) > 0; });
}

TileCollection enumerate_bitiles(int resolution, const LacunarySequence& seq) {
  if (seq.back() > (std::uint64_t{1} << resolution)) {
    throw std::invalid_argument("lacunary term exceeds 2^K; raise the resolution");
  }
  std::vector<BiTile> out;
  for (int s = 0; s <= resolution; ++s) {
    std::set<std::uint64_t> freqs;
    for (std::uint64_t n : seq.terms()) {
      // n in the upper half of [b 2^{s+1}, (b+1) 2^{s+1}) iff bit s of n is set.
      if ((n >> s) & 1u) freqs.insert(n >> (s + 1));
    }
    for (std::uint64_t b : freqs) {
      for (std::uint64_t m = 0; m < (std::uint64_t{1} << s); ++m) out.push_back({s, m, b});
    }
  }
  return TileCollection(std::move(out));
}

DyadicFunction carleson_apply(const CoefficientTable& coeffs, const ChoiceFunction& N,
                              const TileCollection& tiles) {
  const int K = coeffs.resolution();
  if (N.resolution() != K) throw std::invalid_argument("f and N must share a resolution");
  const auto rev = reversal_table(K);
  std::vector<double> out(std::size_t{1} << K, 0.0);
  for (const auto& P : tiles) {
    const Tile lower = P.lower();
    const double c = coeffs(lower);
    if (c == 0.0) continue;
    const double amp = c * std::sqrt(std::ldexp(1.0, P.scale));
    const std::uint64_t upper_freq = P.upper().freq;
    const auto begin = P.rect().cell_begin(K);
    const auto end = P.rect().cell_end(K);
    for (std::uint64_t i = begin; i < end; ++i) {
      if ((N[i] >> P.scale) != upper_freq) continue;
      out[i] += packet_value(lower, K, i, rev[i], amp);
    }
  }
  return DyadicFunction(K, std::move(out));
}

DyadicFunction carleson_apply(const DyadicFunction& f, const ChoiceFunction& N, const TileCollection& tiles) {
  return carleson_apply(CoefficientTable(f), N, tiles);
}

double localized_pairing(const BiTile& p, const DyadicFunction& g, const ChoiceFunction& N,
                         const std::vector<std::uint32_t>& reversal) {
  const int K = g.resolution();
  const Tile lower = p.lower();
  const std::uint64_t upper_freq = p.upper().freq;
  const double amp = std::sqrt(std::ldexp(1.0, p.scale));
  double total = 0.0;
  const auto begin = p.rect().cell_begin(K);
  const auto end = p.rect().cell_end(K);
  for (std::uint64_t i = begin; i < end; ++i) {
    if (g[i] == 0.0 || (N[i] >> p.scale) != upper_freq) continue;
    total += packet_value(lower, K, i, reversal[i], amp) * g[i];
  }
  return total * g.cell_measure();
}

double bilinear_form(const TileCollection& tiles, const CoefficientTable& coeffs, const DyadicFunction& g,
                     const ChoiceFunction& N) {
  const int K = g.resolution();
  if (coeffs.resolution() != K || N.resolution() != K) {
    throw std::invalid_argument("bilinear form inputs must share a resolution");
  }
  const auto rev = reversal_table(K);
  double total = 0.0;
  for (const auto& P : tiles) {
    const double c = coeffs(P.lower());
    if (c == 0.0) continue;
    total += c * localized_pairing(P, g, N, rev);
  }
  return total;
}

double bilinear_form(const TileCollection& tiles, const DyadicFunction& f, const DyadicFunction& g,
                     const ChoiceFunction& N) {
  return bilinear_form(tiles, CoefficientTable(f), g, N);
}

DensityField::DensityField(const DyadicFunction& G, const ChoiceFunction& N)
    : resolution_(G.resolution()), g_measure_(G.support_measure()) {
  if (N.resolution() != resolution_) throw std::invalid_argument("G and N must share a resolution");
  const int K = resolution_;
  hist_.resize(static_cast<std::size_t>(K) + 1);
  for (int s = 0; s <= K; ++s) {
    auto& level = hist_[static_cast<std::size_t>(s)];
    level.resize(std::size_t{1} << s);
    std::vector<std::vector<std::uint64_t>> keys(level.size());
    for (std::size_t i = 0; i < G.size(); ++i) {
      if (G[i] == 0.0) continue;
      keys[i >> (K - s)].push_back(N[i] >> (s + 1));
    }
    for (std::size_t m = 0; m < level.size(); ++m) {
      auto& k = keys[m];
      std::sort(k.begin(), k.end());
      for (std::size_t a = 0; a < k.size();) {
        std::size_t b = a;
        while (b < k.size() && k[b] == k[a]) ++b;
        level[m].emplace_back(k[a], static_cast<std::uint32_t>(b - a));
        a = b;
      }
    }
  }
}

double DensityField::ratio(const BiTile& w) const {
  if (w.scale < 0 || w.scale > resolution_) return 0.0;
  const auto& entries = hist_[static_cast<std::size_t>(w.scale)].at(w.time);
  auto it = std::lower_bound(entries.begin(), entries.end(), w.freq,
                             [](const auto& e, std::uint64_t b) { return e.first < b; });
  if (it == entries.end() || it->first != w.freq) return 0.0;
  return std::ldexp(static_cast<double>(it->second), w.scale - resolution_);
}

// Visits (P', ratio) for every P' >= P with a nonzero count: ancestors I' of
// I_P paired with the frequency blocks of length |I'|^-1 * 2 inside omega_P.
template <class Fn>
void DensityField::scan_above(const BiTile& p, Fn&& fn) const {
  const int sp = std::min(p.scale, resolution_);
  for (int s = 0; s <= sp; ++s) {
    const std::uint64_t m = p.time >> (p.scale - s);
    const std::uint64_t lo = p.freq << (p.scale - s);
    const std::uint64_t hi = (p.freq + 1) << (p.scale - s);
    const auto& entries = hist_[static_cast<std::size_t>(s)][m];
    auto it = std::lower_bound(entries.begin(), entries.end(), lo,
                               [](const auto& e, std::uint64_t b) { return e.first < b; });
    for (; it != entries.end() && it->first < hi; ++it) {
      fn(BiTile{s, m, it->first}, std::ldexp(static_cast<double>(it->second), s - resolution_));
    }
  }
}

double DensityField::density(const BiTile& p) const {
  double best = 0.0;
  scan_above(p, [&](const BiTile&, double r) { best = std::max(best, r); });
  return best;
}

double DensityField::density(const TileCollection& tiles) const {
  double best = 0.0;
  for (const auto& p : tiles) best = std::max(best, density(p));
  return best;
}

void DensityField::witnesses_above(const BiTile& p, double threshold, std::vector<BiTile>& out) const {
  scan_above(p, [&](const BiTile& w, double r) {
    if (r > threshold) out.push_back(w);
  });
}

double density(const BiTile& p, const DyadicFunction& G, const ChoiceFunction& N) {
  return DensityField(G, N).density(p);
}

double density(const TileCollection& tiles, const DyadicFunction& G, const ChoiceFunction& N) {
  return DensityField(G, N).density(tiles);
}

UpperSizeReport upper_size_check(const TileCollection& tiles, const DyadicFunction& f, double A,
                                 double C_upper) {
  if (!(A > 0.0)) throw std::invalid_argument("upper size threshold A must be positive");
  UpperSizeReport r;
  r.threshold = A;
  r.constant = C_upper;
  const int K = f.resolution();
  const auto Mf = dyadic_maximal(f);
  for (const auto& p : tiles) {
    bool meets = false;
    for (auto i = p.rect().cell_begin(K); i < p.rect().cell_end(K) && !meets; ++i) meets = Mf[i] <= A * (1 + 1e-12);
    if (!meets) ++r.violations;
  }
  r.precondition_holds = r.violations == 0;
  r.size = size(tiles, f);
  r.measured_C = r.size / A;
  r.holds = r.precondition_holds && r.measured_C <= C_upper;
  return r;
}

}  // namespace walsh
