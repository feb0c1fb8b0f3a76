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

// End-to-end measurements: restricted weak type, the strong-type iteration,
// distribution curves, the exact Antonov reduction and the final norm ratios.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "walsh/choice_function.hpp"
#include "walsh/dyadic_function.hpp"
#include "walsh/multifreq.hpp"
#include "walsh/tf_algorithm.hpp"

namespace walsh {

struct MajorSubset {
  DyadicFunction G_prime;
  double lambda = 0.0;
  bool gate_ok = false;  ///< |F| <= C_0 |G|; otherwise G' = G
  bool major = false;    ///< |G'| >= |G| / 2
  ExceptionalCover cover;
};
/// G' = G \ {M 1_F > lambda}.
MajorSubset major_subset(const DyadicFunction& F, const DyadicFunction& G, double C_0 = 0.25);

struct MultifreqRun {
  MajorSubset subset;
  std::size_t tiles = 0;                ///< bi-tiles meeting F and G'
  std::vector<LocalProjection> locals;  ///< one per exceptional interval
  ProjectionReport projection;
  PhiChainReport chain;
  K0Report k0;
  bool tails_lacunary = false;
  bool holds() const {
    return subset.gate_ok && subset.major && subset.cover.holds() && projection.holds() && tails_lacunary;
  }
};
/// Projection of f = 1_F onto the local tiles of every exceptional interval,
/// checked against the bi-tiles meeting F and G' with g = sign(C f) 1_{G'}.
/// Throws std::domain_error when |F| > C_0 |G|.
MultifreqRun multifreq_experiment(const DyadicFunction& F, const DyadicFunction& G, const LacunarySequence& seq,
                                  const ChoiceFunction& N, const Constants& constants = {});

enum class NStrategy { argmax, first_term, last_term };
const char* to_string(NStrategy s);
ChoiceFunction choose_N(const DyadicFunction& f, const LacunarySequence& seq, NStrategy s);

struct LevelRow {
  int k = 0;
  std::size_t tiles = 0;
  double measured_form = 0.0;  ///< |B_{P_k}(f, g)|
  double level_bound = 0.0;    ///< lambda |G| for k <= k0, 2^{-k/2} |F| (log_+ 1/lambda)^{1/2} beyond
  double ratio = 0.0;
};

struct RestrictedWeakReport {
  double F_measure = 0.0;
  double G_measure = 0.0;
  double G_prime_measure = 0.0;
  double lambda = 0.0;
  bool l2_regime = false;
  std::size_t tiles = 0;           ///< bi-tiles meeting F and G'
  double form = 0.0;               ///< |<C f, g>|
  double form_identity_gap = 0.0;  ///< |B_P(f, g) - <C f, g>|
  double bound = 0.0;              ///< |F| loglog_+(|G|/|F|), or ||f|| ||g|| in the L^2 regime
  double ratio = 0.0;
  double constant = 64.0;
  double k0 = 0.0;
  std::vector<LevelRow> levels;
  bool holds = false;
};
/// f = 1_F, g = sign(C f) 1_{G'}; per-level table when `with_levels`.
RestrictedWeakReport restricted_weak_experiment(const DyadicFunction& F, const DyadicFunction& G,
                                                const LacunarySequence& seq, NStrategy strategy,
                                                const Constants& constants = {}, bool with_levels = false);

struct StrongTypeStep {
  int t = 0;
  double G_measure = 0.0;        ///< |G_t|
  double G_prime_measure = 0.0;  ///< |G'_t|
  double form = 0.0;             ///< <C f, g_t> = int_{G'_t} |C f|
  double bound = 0.0;            ///< |F| loglog_+(1/|F|), or the L^2 bound on the last step
  bool final_step = false;
  bool halved = false;           ///< |G_{t+1}| <= |G_t| / 2
};

struct StrongTypeReport {
  double F_measure = 0.0;
  int t0 = 0;                    ///< 2 + ceil(log2 1/|F|)
  int steps = 0;
  bool t0_suffices = false;      ///< 2^{-t0} <= |F|
  bool terminated_within_t0 = false;
  std::vector<StrongTypeStep> table;
  double l1_norm = 0.0;          ///< ||C f||_1
  double telescoped = 0.0;       ///< sum_t <C f, g_t>
  double partition_measure = 0.0;
  bool partition_exact = false;
  double bound = 0.0;            ///< |F| log_+(1/|F|) loglog_+(1/|F|)
  double ratio = 0.0;
  bool holds = false;
};
/// f = 1_F unless `f` is given (|f| <= 1_F), N the argmax linearization.
StrongTypeReport strong_type_iteration(const DyadicFunction& F, const LacunarySequence& seq,
                                       const std::optional<DyadicFunction>& f = std::nullopt,
                                       const Constants& constants = {});

struct CurvePoint {
  double t = 0.0;
  double rearranged = 0.0;  ///< (C_lac f)*(t)
  double normalized = 0.0;  ///< t (C_lac f)*(t) / (|F| loglog_+(t/|F|))
};

struct DistributionReport {
  double F_measure = 0.0;
  std::vector<CurvePoint> curve;
  double sup = 0.0;
  double argsup = 0.0;
  double constant = 64.0;
  bool holds = false;
};
/// 64 log-spaced points per decade on [2^-K, 1].
std::vector<double> distribution_grid(int resolution);
DistributionReport distribution_curve(const DyadicFunction& f, double F_measure, const LacunarySequence& seq,
                                      double C_dist = 64.0);

/// Inside each resolution-K cell F takes the leftmost f(cell) 2^{K'-K} fine
/// cells. Throws unless every value is in [0,1] and a multiple of 2^{K-K'}.
DyadicFunction antonov_indicator(const DyadicFunction& f, int fine_resolution);

struct AntonovReport {
  double max_partial_error = 0.0;  ///< max over n <= 2^K of ||S^-_n(f - 1_F)||_inf
  double mass_gap = 0.0;           ///< | ||f||_1 - |F| |
  bool holds = false;
};
AntonovReport antonov_check(const DyadicFunction& f, const DyadicFunction& F);

/// D(s) = s loglog_+(1/s).
double factor_D(double s);

struct FinalNormReport {
  double weak_lhs = 0.0;    ///< ||C_lac f||_{1,inf}
  double weak_rhs = 0.0;    ///< ||f||_{L loglog L logloglog L}
  double weak_ratio = 0.0;
  double strong_lhs = 0.0;  ///< ||C_lac f||_1
  double strong_rhs = 0.0;  ///< ||f||_{L log L loglog L}
  double strong_ratio = 0.0;
  bool atom = false;        ///< ||f||_inf <= 1
  double factorization_sup = 0.0;  ///< sup_t (C f)*(t) / (D(||f||_1) R(t)), atoms only
  double constant = 64.0;
  bool holds = false;
};
FinalNormReport final_norm_checks(const DyadicFunction& f, const LacunarySequence& seq, double C_fac = 64.0);

}  // namespace walsh
