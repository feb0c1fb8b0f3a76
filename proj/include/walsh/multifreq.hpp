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

// Multi-frequency Calderon-Zygmund machinery: exceptional intervals of
// {M 1_F > lambda}, the local tile families Q_I, the projection phi and the
// Zygmund / Khintchine measurements.

#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include "walsh/choice_function.hpp"
#include "walsh/dyadic_function.hpp"
#include "walsh/orlicz.hpp"
#include "walsh/phase_plane.hpp"

namespace walsh {

struct DyadicInterval {
  int scale = 0;
  std::uint64_t time = 0;

  double length() const;
  std::uint64_t cell_begin(int resolution) const { return time << (resolution - scale); }
  std::uint64_t cell_end(int resolution) const { return (time + 1) << (resolution - scale); }
  /// this contains `inner` (reflexive).
  bool contains(const DyadicInterval& inner) const {
    return inner.scale >= scale && (inner.time >> (inner.scale - scale)) == time;
  }
  std::string to_string() const;

  auto operator<=>(const DyadicInterval&) const = default;
};

/// lambda = 2|F|/|G|. Throws std::domain_error unless 0 < |F| <= C_0 |G|.
double choose_lambda(double F_measure, double G_measure, double C_0 = 0.25);

struct ExceptionalCover {
  double lambda = 0.0;
  bool applicable = true;              ///< false when lambda >= 1 (empty cover)
  std::vector<DyadicInterval> intervals;
  std::vector<double> densities;       ///< |F cap I| / |I|
  double total_measure = 0.0;
  double F_measure = 0.0;
  bool disjoint = false;
  bool maximal = false;                ///< parent mean <= lambda for every I
  bool density_bound = false;          ///< |F cap I| <= 2 lambda |I|
  bool measure_bound = false;          ///< sum |I| <= |F| / lambda
  bool covers_F = false;               ///< F inside the union
  bool holds() const { return !applicable || (disjoint && maximal && density_bound && measure_bound && covers_F); }
  /// Indicator of the union of the intervals at the resolution of F.
  DyadicFunction indicator(int resolution) const;
};

/// Maximal dyadic intervals with mean of 1_F above lambda, by stopping time
/// from [0,1].
ExceptionalCover exceptional_cover(const DyadicFunction& F, double lambda);

struct LocalProjection {
  DyadicInterval interval;
  std::vector<Tile> tiles;             ///< Q_I, sorted by frequency
  std::vector<std::uint64_t> mu;       ///< distinct local frequencies, ascending
  std::size_t dropped = 0;             ///< 1 + ceil(2 / (alpha - 1))
  double tail_ratio = 0.0;             ///< min consecutive ratio after the drop (+inf if < 2 left)
  double required_ratio = 0.0;         ///< (alpha + 1) / 2
  bool tail_lacunary = false;
  bool order_holds = false;            ///< p < P_l and p < P_u for every witnessing pair
  std::size_t inner_tiles = 0;         ///< members with I_P inside I (expected 0)
  DyadicFunction phi;                  ///< filled by multifreq_project
  double phi_norm = 0.0;
};

/// Q_I = {p : I_p = I, p meets P_l for some P in P_k}.
LocalProjection collect_local_tiles(const DyadicInterval& I, const TileCollection& P_k, double alpha,
                                    int resolution);

struct ProjectionReport {
  DyadicFunction phi;
  bool support_ok = false;             ///< f vanishes off the cover
  double max_cancellation = 0.0;       ///< max |<f 1_I - phi_I, w_{P_l}>|
  double form_f = 0.0;                 ///< B_{P_k}(f, g)
  double form_phi = 0.0;               ///< B_{P_k}(phi, g)
  bool cancellation_holds = false;
  bool form_holds = false;
  bool holds() const { return support_ok && cancellation_holds && form_holds; }
};

/// Fills phi_I for every local projection and returns phi = sum phi_I with
/// the cancellation and form-identity checks.
ProjectionReport multifreq_project(const DyadicFunction& f, const ExceptionalCover& cover,
                                   std::vector<LocalProjection>& locals, const TileCollection& P_k,
                                   const DyadicFunction& g, const ChoiceFunction& N);

struct ZygmundReport {
  double lhs = 0.0;  ///< ||{f^(n_j)}||_{l^2}
  double rhs = 0.0;  ///< ||f||_{L(log L)^{1/2}}
  double ratio = 0.0;
};
ZygmundReport zygmund_ratio(const DyadicFunction& f, const LacunarySequence& seq,
                            const OrliczGauge& gauge = OrliczGauge::named(GaugeTag::L_logL_half));

struct KhintchineReport {
  int p = 2;
  double lp_norm = 0.0;
  double l2_coefficients = 0.0;
  double lp_ratio = 0.0;   ///< ||sum a_j W_{n_j}||_p / (sqrt(p) ||a||_2)
  double exp_ratio = 0.0;  ///< ||sum a_j W_{n_j}||_{exp(L^2)} / ||a||_2
};
/// p even in [2, 10]; the sum is sampled at `resolution`.
KhintchineReport khintchine_ratio(const std::vector<double>& a, const LacunarySequence& seq, int p,
                                  int resolution);

struct PhiChainReport {
  double lambda = 0.0;
  double F_measure = 0.0;
  double G_measure = 0.0;
  std::vector<double> interval_ratios;  ///< ||phi_I||_2 / (lambda (log_+ 1/lambda)^{1/2} |I|^{1/2})
  double max_interval_ratio = 0.0;
  double phi_norm = 0.0;
  double total_ratio = 0.0;             ///< ||phi||_2 / (|F| |G|^{-1/2} (log_+ 1/lambda)^{1/2})
  double constant = 16.0;
  bool holds = false;
};
PhiChainReport phi_l2_chain(const DyadicFunction& F, const ExceptionalCover& cover,
                            const std::vector<LocalProjection>& locals, double G_measure, double C_phi = 16.0);

struct K0Report {
  double k0 = 0.0;         ///< C_k loglog_+(1/lambda)
  double tail_sum = 0.0;   ///< sum_{k > k0} 2^{-k/2} |F| (log_+ 1/lambda)^{1/2}
  double ratio = 0.0;      ///< tail_sum / |F|
  bool holds = false;
};
K0Report k0_summation(double F_measure, double lambda, double C_k = 8.0);

/// Bi-tiles P with I_P meeting both F and G'.
TileCollection restrict_to_sets(const TileCollection& tiles, const DyadicFunction& F, const DyadicFunction& G_prime);

}  // namespace walsh
