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

#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "walsh/choice_function.hpp"
#include "walsh/dyadic_function.hpp"
#include "walsh/tiles.hpp"

namespace walsh {

/// bitrev_K(i) for every cell i.
std::vector<std::uint32_t> reversal_table(int resolution);

/// True when w_p is constant on cells at resolution K (freq < 2^{K-s}).
bool representable(const Tile& p, int resolution);

/// w_p(x) = 2^{s/2} W_n(2^s x - m) on I, zero elsewhere.
DyadicFunction wave_packet(const Tile& p, int resolution);

/// Value of w_p on `cell`, given bitrev_K(cell).
inline double packet_value(const Tile& p, int resolution, std::uint64_t cell, std::uint64_t reversed_cell,
                           double amplitude) {
  if ((cell >> (resolution - p.scale)) != p.time) return 0.0;
  return ((__builtin_popcountll(p.freq & (reversed_cell >> p.scale)) & 1) ? -amplitude : amplitude);
}

/// <f, w_p> for every tile representable at the resolution of f, from
/// localized Walsh transforms of f on each dyadic interval.
class CoefficientTable {
 public:
  explicit CoefficientTable(const DyadicFunction& f);

  int resolution() const { return resolution_; }
  /// Zero for tiles whose frequency exceeds the resolution; throws for tiles
  /// finer than a cell or outside [0,1].
  double operator()(const Tile& p) const;

 private:
  int resolution_;
  std::vector<std::vector<double>> local_;  // [scale][time * 2^{K-s} + freq]
};

double coefficient(const DyadicFunction& f, const Tile& p);

/// A tree: bi-tiles below a common top in the phase-plane order.
struct Tree {
  TreeTop top;
  std::vector<BiTile> members;

  double top_length() const { return top.time_length(); }
  /// Members whose lower half misses the top (the ones that count for size).
  std::vector<BiTile> size_eligible() const;
  bool members_below_top() const;
};

bool below_top(const BiTile& p, const TreeTop& top);
/// P_l does not meet the top.
bool size_eligible(const BiTile& p, const TreeTop& top);

/// A set of bi-tiles, optionally with an energy certificate (trees covering it).
class TileCollection {
 public:
  TileCollection() = default;
  explicit TileCollection(std::vector<BiTile> bitiles);

  const std::vector<BiTile>& bitiles() const { return bitiles_; }
  std::size_t size() const { return bitiles_.size(); }
  bool empty() const { return bitiles_.empty(); }
  bool contains(const BiTile& p) const;
  auto begin() const { return bitiles_.begin(); }
  auto end() const { return bitiles_.end(); }

  TileCollection united(const TileCollection& other) const;
  TileCollection minus(const TileCollection& other) const;
  template <class Pred>
  TileCollection filter(Pred&& keep) const {
    std::vector<BiTile> out;
    for (const auto& p : bitiles_) {
      if (keep(p)) out.push_back(p);
    }
    return TileCollection(std::move(out));
  }

  const std::optional<std::vector<Tree>>& certificate() const { return certificate_; }
  void set_certificate(std::vector<Tree> trees) { certificate_ = std::move(trees); }
  /// Sum of |I_T| over certificate tops (0 without a certificate).
  double certificate_length_sum() const;
  /// Every member lies in some certificate tree and every tree member is below its top.
  bool certificate_covers() const;

 private:
  std::vector<BiTile> bitiles_;
  std::optional<std::vector<Tree>> certificate_;
};

/// All bi-tiles P with I_P in [0,1], |I_P| >= 2^-K and some n_j in omega_{P_u}.
TileCollection enumerate_bitiles(int resolution, const LacunarySequence& seq);

/// C f(x) = sum_P <f, w_{P_l}> w_{P_l}(x) 1{N(x) in omega_{P_u}}.
DyadicFunction carleson_apply(const DyadicFunction& f, const ChoiceFunction& N, const TileCollection& tiles);
DyadicFunction carleson_apply(const CoefficientTable& coeffs, const ChoiceFunction& N,
                              const TileCollection& tiles);

/// <w_{P_l} 1{N in omega_{P_u}}, g>.
double localized_pairing(const BiTile& p, const DyadicFunction& g, const ChoiceFunction& N,
                         const std::vector<std::uint32_t>& reversal);

/// B_P(f, g) = sum_P <f, w_{P_l}> <w_{P_l} 1{N in omega_{P_u}}, g>.
double bilinear_form(const TileCollection& tiles, const DyadicFunction& f, const DyadicFunction& g,
                     const ChoiceFunction& N);
double bilinear_form(const TileCollection& tiles, const CoefficientTable& coeffs, const DyadicFunction& g,
                     const ChoiceFunction& N);

/// Counts |{x in I' cap G : N(x) in omega'}| for every bi-tile P' = I' x omega'
/// with I' in [0,1], grouped per dyadic interval. Backs dense() and the
/// density-split witnesses.
class DensityField {
 public:
  DensityField(const DyadicFunction& G, const ChoiceFunction& N);

  int resolution() const { return resolution_; }
  double g_measure() const { return g_measure_; }

  /// |{x in I' cap G : N(x) in omega'}| / |I'|.
  double ratio(const BiTile& witness) const;
  /// sup over P' >= P (reflexive) of ratio(P').
  double density(const BiTile& p) const;
  double density(const TileCollection& tiles) const;
  /// Appends every P' >= P with ratio(P') > threshold.
  void witnesses_above(const BiTile& p, double threshold, std::vector<BiTile>& out) const;

 private:
  template <class Fn>
  void scan_above(const BiTile& p, Fn&& fn) const;

  int resolution_;
  double g_measure_;
  // [scale][time] -> sorted (frequency block, cell count)
  std::vector<std::vector<std::vector<std::pair<std::uint64_t, std::uint32_t>>>> hist_;
};

double density(const BiTile& p, const DyadicFunction& G, const ChoiceFunction& N);
double density(const TileCollection& tiles, const DyadicFunction& G, const ChoiceFunction& N);

/// size_f(P): sup over tree tops of (|I_T|^-1 sum_{P < top, P_l cap top empty} |<f,w_{P_l}>|^2)^{1/2}.
/// Tops are bi-tiles over [0,1] plus area-one tops [0,1) x [k,k+1) for k in the
/// frequency interval of a member with I_P = [0,1].
struct SizeResult {
  double size = 0.0;
  std::optional<TreeTop> witness;
};
SizeResult size_with_witness(const TileCollection& tiles, const CoefficientTable& coeffs);
double size(const TileCollection& tiles, const DyadicFunction& f);
double size(const TileCollection& tiles, const CoefficientTable& coeffs);

struct UpperSizeReport {
  bool precondition_holds = false;
  std::size_t violations = 0;  ///< members whose I_P misses {Mf <= A}
  double size = 0.0;
  double threshold = 0.0;      ///< A
  double measured_C = 0.0;     ///< size / A
  double constant = 8.0;       ///< C_upper
  bool holds = false;
};

/// size_f(P) <= C A whenever every I_P meets {Mf <= A}.
UpperSizeReport upper_size_check(const TileCollection& tiles, const DyadicFunction& f, double A,
                                 double C_upper = 8.0);

}  // namespace walsh
