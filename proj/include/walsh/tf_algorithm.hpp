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

// Density and size splits with re-verifiable tree certificates, the tree
// estimate, and the level decompositions built from them.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "walsh/choice_function.hpp"
#include "walsh/dyadic_function.hpp"
#include "walsh/phase_plane.hpp"

namespace walsh {

struct Constants {
  double C_dens = 16.0;
  double C_size = 4.0;
  double C_tree = 8.0;
  double C_eff = 32.0;
  double C_upper = 8.0;
  double C_rw = 64.0;
  double C_dist = 64.0;
  double C_fac = 64.0;
  double C_phi = 16.0;
  double C_k = 8.0;
  double C_0 = 0.25;
  double C_khin = 4.0;    ///< Khintchine ratio ceiling over p
  double C_growth = 1.25; ///< max over an m-family / value at the reference m
};

enum class SplitKind { density, size };
const char* to_string(SplitKind kind);

/// small + big partition the input; trees cover big.
struct SplitCertificate {
  SplitKind kind = SplitKind::density;
  double parameter = 0.0;            ///< delta (density) or sigma (size)
  TileCollection input;
  TileCollection small;
  TileCollection big;
  std::vector<Tree> trees;
  double tree_top_length_sum = 0.0;  ///< sum |I_T|
  double scale_measure = 0.0;        ///< |G| (density) or ||f||_2^2 (size)
  double energy_unit = 0.0;          ///< delta^-1 |G| or sigma^-2 ||f||_2^2
  double claimed_bound = 0.0;        ///< constant * energy_unit
  double measured_ratio = 0.0;       ///< tree_top_length_sum / energy_unit
  double constant = 0.0;
  double small_value = 0.0;          ///< density or size of small, recomputed
  /// Size splits only: sum of |<f, w_{P_l}>|^2 over the selected eligible
  /// packets, and the largest |<w_p, w_q>| among distinct selected packets.
  double bessel_sum = 0.0;
  double max_cross_inner = 0.0;
  std::size_t iterations = 0;
  bool holds = false;
};

/// `delta` must be positive and at least dense(P); members with a witness
/// ratio above delta/2 go to big.
SplitCertificate density_split(const TileCollection& tiles, const DyadicFunction& G, const ChoiceFunction& N,
                               double delta, double C_dens = 16.0);
SplitCertificate density_split(const TileCollection& tiles, const DensityField& field, double delta,
                               double C_dens = 16.0);

/// `sigma` must be positive and at least size_f(P); members under tops whose
/// eligible sum exceeds (sigma/2)^2 |I_T| go to big.
SplitCertificate size_split(const TileCollection& tiles, const DyadicFunction& f, double sigma,
                            double C_size = 4.0);
SplitCertificate size_split(const TileCollection& tiles, const CoefficientTable& coeffs, double f_norm_sq,
                            double sigma, double C_size = 4.0);

/// Recomputes every claim of a certificate from the raw inputs.
struct CertificateCheck {
  bool partition_exact = false;
  bool trees_cover_big = false;
  bool length_sum_matches = false;
  bool small_bound_holds = false;
  bool ratio_within_constant = false;
  bool orthogonality_holds = true;  ///< size splits only
  double recomputed_length_sum = 0.0;
  double recomputed_small_value = 0.0;
  double recomputed_ratio = 0.0;
  double recomputed_bessel_sum = 0.0;
  std::vector<std::string> failures;
  bool holds() const { return failures.empty(); }
};
CertificateCheck verify_split(const SplitCertificate& cert, const DyadicFunction& f, const DyadicFunction& G,
                              const ChoiceFunction& N);

struct TreeBoundReport {
  double form = 0.0;       ///< |B_T(f, g)|
  double density = 0.0;
  double size = 0.0;
  double top_length = 0.0;
  double bound = 0.0;      ///< dense * size * |I_T|
  double ratio = 0.0;
  double constant = 8.0;
  bool holds = false;
};
TreeBoundReport tree_bound_check(const Tree& tree, const DyadicFunction& f, const DyadicFunction& g,
                                 const DyadicFunction& G, const ChoiceFunction& N, double C_tree = 8.0);

struct Level {
  int n = 0;
  TileCollection tiles;
  std::vector<Tree> trees;   ///< partition of `tiles`
  double density = 0.0;
  double size = 0.0;         ///< of the normalized f
  double energy = 0.0;       ///< sum |I_T|
  double form = 0.0;         ///< |B_{P_n}(f, g)| (original scale)
  double level_bound = 0.0;  ///< C_tree dense_bound size_bound energy ||f||_2
  double schematic = 0.0;    ///< min(2^{n/2}, 2^{-n/2}) (or delta 2^{n/2})
  bool facts_hold = false;
  bool residual = false;     ///< leftover past the truncation
};

struct LevelDecomposition {
  std::vector<Level> levels;
  double f_norm = 0.0;
  double g_measure = 0.0;
  double total_form = 0.0;    ///< |B_{P_all}(f, g)|
  double total_bound = 0.0;   ///< sum of level bounds
  bool partition_exact = false;
  bool holds = false;
};

/// Alternates density and size splits; level n has dense <= min(1, 2^-n),
/// size <= 2^{-n/2} ||f||_2 and energy <= (2 + 4) 2^n. Truncated at
/// n <= 2K + 8, any remainder reported as a residual level.
LevelDecomposition carleson_decomposition(const TileCollection& tiles, const DyadicFunction& f,
                                          const DyadicFunction& g, const DyadicFunction& G,
                                          const ChoiceFunction& N, double C_tree = 8.0);

/// Density-only decomposition: level k holds the big part of the split at
/// threshold 2^-k.
std::vector<Level> density_levels(const TileCollection& tiles, const DensityField& field);

struct EffectiveBoundReport {
  double delta = 0.0;
  double density = 0.0;       ///< measured dense(P)
  double size = 0.0;
  double f_norm = 0.0;
  double g_measure = 0.0;
  int n0 = 0;
  bool degenerate = false;    ///< delta ||f||^2 / |G| >= 1
  double basic_length_sum = 0.0;
  double basic_bound = 0.0;   ///< C_dens delta^-1 |G|
  bool basic_assumption_holds = false;
  double first_branch = 0.0;  ///< size |G|
  double second_branch = 0.0; ///< delta^{1/2} |G|^{1/2} ||f||_2
  double min_bound = 0.0;
  double series = 0.0;        ///< sum_n delta 2^{n/2} ||f||_2^2, normalized
  double form = 0.0;          ///< |B_P(f, g)|
  double ratio = 0.0;
  double constant = 32.0;
  std::vector<Level> levels;
  bool holds = false;
};

/// g defaults to sign(C_P f) 1_G, the maximizer of |B_P(f, .)| over |g| <= 1_G.
EffectiveBoundReport effective_bound(const TileCollection& tiles, const DyadicFunction& f, const DyadicFunction& G,
                                     const ChoiceFunction& N, double delta,
                                     const std::optional<DyadicFunction>& g = std::nullopt,
                                     const Constants& constants = {});

/// Trees whose tops are the maximal members; each member in its first tree.
std::vector<Tree> maximal_tree_cover(const TileCollection& tiles);

}  // namespace walsh
