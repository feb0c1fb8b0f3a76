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

#include "walsh/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "walsh/orlicz.hpp"
#include "walsh/rearrangement.hpp"
#include "walsh/walsh.hpp"

namespace walsh {

namespace {

DyadicFunction signed_restriction(const DyadicFunction& h, const DyadicFunction& set) {
  DyadicFunction g(h.resolution());
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (set[i] != 0.0 && h[i] != 0.0) g.set(i, h[i] > 0.0 ? 1.0 : -1.0);
  }
  return g;
}

double integral_over(const DyadicFunction& h, const DyadicFunction& set) {
  double total = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (set[i] != 0.0) total += std::abs(h[i]);
  }
  return total * h.cell_measure();
}

OrliczGauge usable_gauge(GaugeTag tag) {
  auto g = OrliczGauge::named(tag);
  return g.check().ok() ? g : g.convexified();
}

}  // namespace

MajorSubset major_subset(const DyadicFunction& F, const DyadicFunction& G, double C_0) {
  if (!F.is_indicator() || !G.is_indicator()) throw std::invalid_argument("major subset needs indicators");
  MajorSubset out;
  out.G_prime = G;
  const double Fm = F.integral();
  const double Gm = G.integral();
  if (Fm == 0.0) {
    out.gate_ok = true;
    out.major = true;
    return out;
  }
  if (Fm > C_0 * Gm) {
    out.major = true;
    return out;
  }
  out.gate_ok = true;
  out.lambda = choose_lambda(Fm, Gm, C_0);
  out.cover = exceptional_cover(F, out.lambda);
  out.G_prime = G * (DyadicFunction(G.resolution(), std::vector<double>(G.size(), 1.0)) -
                     out.cover.indicator(G.resolution()));
  out.major = out.G_prime.integral() >= Gm / 2;
  return out;
}

MultifreqRun multifreq_experiment(const DyadicFunction& F, const DyadicFunction& G, const LacunarySequence& seq,
                                  const ChoiceFunction& N, const Constants& constants) {
  const int K = F.resolution();
  MultifreqRun run;
  run.subset = major_subset(F, G, constants.C_0);
  if (!run.subset.gate_ok || F.integral() == 0.0) throw std::domain_error("multi-frequency run needs 0 < |F| <= C_0 |G|");
  const auto& cover = run.subset.cover;
  const auto tiles = restrict_to_sets(enumerate_bitiles(K, seq), F, run.subset.G_prime);
  run.tiles = tiles.size();
  const auto g = signed_restriction(carleson_apply(F, N, tiles), run.subset.G_prime);
  run.tails_lacunary = true;
  for (const auto& I : cover.intervals) {
    run.locals.push_back(collect_local_tiles(I, tiles, seq.ratio(), K));
    run.tails_lacunary = run.tails_lacunary && run.locals.back().tail_lacunary && run.locals.back().order_holds;
  }
  run.projection = multifreq_project(F, cover, run.locals, tiles, g, N);
  run.chain = phi_l2_chain(F, cover, run.locals, G.integral(), constants.C_phi);
  run.k0 = k0_summation(F.integral(), cover.lambda, constants.C_k);
  return run;
}

const char* to_string(NStrategy s) {
  switch (s) {
    case NStrategy::argmax: return "argmax";
    case NStrategy::first_term: return "first_term";
    case NStrategy::last_term: return "last_term";
  }
  return "unknown";
}

ChoiceFunction choose_N(const DyadicFunction& f, const LacunarySequence& seq, NStrategy s) {
  switch (s) {
    case NStrategy::argmax: return lacunary_maximal(f, seq).argmax;
    case NStrategy::first_term: return ChoiceFunction::constant(f.resolution(), seq.front());
    case NStrategy::last_term: return ChoiceFunction::constant(f.resolution(), seq.back());
  }
  throw std::invalid_argument("unknown N strategy");
}

RestrictedWeakReport restricted_weak_experiment(const DyadicFunction& F, const DyadicFunction& G,
                                                const LacunarySequence& seq, NStrategy strategy,
                                                const Constants& constants, bool with_levels) {
  if (!F.is_indicator() || !G.is_indicator()) throw std::invalid_argument("F and G must be indicators");
  const int K = F.resolution();
  RestrictedWeakReport r;
  r.constant = constants.C_rw;
  r.F_measure = F.integral();
  r.G_measure = G.integral();
  const auto tiles = enumerate_bitiles(K, seq);
  const DyadicFunction& f = F;
  const auto N = choose_N(f, seq, strategy);
  const CoefficientTable coeffs(f);
  const auto cf = carleson_apply(coeffs, N, tiles);

  if (r.F_measure == 0.0) {
    r.holds = true;
    return r;
  }
  const auto ms = major_subset(F, G, constants.C_0);
  r.l2_regime = !ms.gate_ok;
  r.G_prime_measure = ms.G_prime.integral();
  r.lambda = ms.lambda;
  const auto g = signed_restriction(cf, ms.G_prime);
  r.form = std::abs(cf.inner(g));
  const auto restricted = restrict_to_sets(tiles, F, ms.G_prime);
  r.tiles = restricted.size();
  r.form_identity_gap = std::abs(bilinear_form(restricted, coeffs, g, N) - cf.inner(g));
  if (r.l2_regime) {
    r.bound = f.l2_norm() * g.l2_norm();
  } else {
    r.bound = r.F_measure * loglog_plus(r.G_measure / r.F_measure);
  }
  if (r.bound > 0.0) r.ratio = r.form / r.bound;
  r.holds = r.ratio <= r.constant && r.form_identity_gap <= 1e-9;

  if (with_levels && !r.l2_regime && r.lambda > 0.0) {
    r.k0 = constants.C_k * loglog_plus(1.0 / r.lambda);
    const DensityField field(ms.G_prime, N);
    for (const auto& level : density_levels(restricted, field)) {
      LevelRow row;
      row.k = level.n;
      row.tiles = level.tiles.size();
      row.measured_form = std::abs(bilinear_form(level.tiles, coeffs, g, N));
      row.level_bound = row.k <= r.k0 ? r.lambda * r.G_measure
                                      : std::pow(2.0, -row.k / 2.0) * r.F_measure *
                                            std::sqrt(log_plus(1.0 / r.lambda));
      row.ratio = row.level_bound > 0.0 ? row.measured_form / row.level_bound : 0.0;
      r.levels.push_back(row);
    }
  }
  return r;
}

StrongTypeReport strong_type_iteration(const DyadicFunction& F, const LacunarySequence& seq,
                                       const std::optional<DyadicFunction>& f_in, const Constants& constants) {
  if (!F.is_indicator()) throw std::invalid_argument("F must be an indicator");
  const DyadicFunction f = f_in ? *f_in : F;
  if (!f.dominated_by(F)) throw std::invalid_argument("f must satisfy |f| <= 1_F");
  StrongTypeReport r;
  r.F_measure = F.integral();
  if (!(r.F_measure > 0.0)) throw std::invalid_argument("strong-type iteration needs |F| > 0");
  const int K = F.resolution();
  r.t0 = 2 + static_cast<int>(std::ceil(std::log2(1.0 / r.F_measure) - 1e-12));
  r.t0_suffices = std::ldexp(1.0, -r.t0) <= r.F_measure;

  const auto tiles = enumerate_bitiles(K, seq);
  const auto N = lacunary_maximal(f, seq).argmax;
  const auto cf = carleson_apply(f, N, tiles);
  r.l1_norm = cf.l1_norm();

  DyadicFunction Gt(K, std::vector<double>(F.size(), 1.0));
  bool ok = true;
  for (int t = 0;; ++t) {
    const double gm = Gt.integral();
    if (gm == 0.0) break;
    StrongTypeStep step;
    step.t = t;
    step.G_measure = gm;
    step.final_step = t >= r.t0 || r.F_measure > constants.C_0 * gm;
    const DyadicFunction Gp = step.final_step ? Gt : major_subset(F, Gt, constants.C_0).G_prime;
    step.G_prime_measure = Gp.integral();
    step.form = integral_over(cf, Gp);
    step.bound = step.final_step ? f.l2_norm() * std::sqrt(step.G_prime_measure)
                                 : r.F_measure * loglog_plus(1.0 / r.F_measure);
    Gt = Gt - Gp;
    step.halved = Gt.integral() <= gm / 2;
    if (!step.final_step) ok = ok && step.halved;
    r.telescoped += step.form;
    r.partition_measure += step.G_prime_measure;
    r.table.push_back(step);
    if (step.final_step) break;
  }
  r.steps = static_cast<int>(r.table.size());
  r.terminated_within_t0 = r.steps - 1 <= r.t0 && Gt.integral() == 0.0;
  r.partition_exact = r.partition_measure == 1.0 &&
                      std::abs(r.telescoped - r.l1_norm) <= 1e-12 * std::max(1.0, r.l1_norm);
  r.bound = r.F_measure * log_plus(1.0 / r.F_measure) * loglog_plus(1.0 / r.F_measure);
  r.ratio = r.l1_norm / r.bound;
  r.holds = ok && r.t0_suffices && r.terminated_within_t0 && r.partition_exact;
  return r;
}

std::vector<double> distribution_grid(int resolution) {
  const double floor_t = std::ldexp(1.0, -resolution);
  std::vector<double> grid;
  for (int i = 0;; ++i) {
    const double t = std::pow(10.0, -i / 64.0);
    if (t < floor_t) break;
    grid.push_back(t);
  }
  if (grid.back() != floor_t) grid.push_back(floor_t);
  std::reverse(grid.begin(), grid.end());
  return grid;
}

DistributionReport distribution_curve(const DyadicFunction& f, double F_measure, const LacunarySequence& seq,
                                      double C_dist) {
  if (!(F_measure > 0.0)) throw std::invalid_argument("distribution curve needs |F| > 0");
  DistributionReport r;
  r.F_measure = F_measure;
  r.constant = C_dist;
  const auto curve = decreasing_rearrangement(lacunary_maximal(f, seq).value);
  for (double t : distribution_grid(f.resolution())) {
    CurvePoint p;
    p.t = t;
    p.rearranged = curve(t);
    p.normalized = t * p.rearranged / (F_measure * loglog_plus(t / F_measure));
    if (p.normalized > r.sup) {
      r.sup = p.normalized;
      r.argsup = t;
    }
    r.curve.push_back(p);
  }
  r.holds = r.sup <= C_dist;
  return r;
}

DyadicFunction antonov_indicator(const DyadicFunction& f, int fine_resolution) {
  const int K = f.resolution();
  if (fine_resolution <= K || fine_resolution > kMaxResolution) {
    throw std::invalid_argument("fine resolution must exceed the resolution of f (and stay <= 16)");
  }
  const int d = fine_resolution - K;
  const std::uint64_t width = std::uint64_t{1} << d;
  DyadicFunction F(fine_resolution);
  for (std::size_t c = 0; c < f.size(); ++c) {
    const double v = f[c];
    const double q = std::ldexp(v, d);
    if (v < 0.0 || v > 1.0 || q != std::floor(q)) {
      throw std::invalid_argument("value " + std::to_string(v) + " in cell " + std::to_string(c) +
                                  " is not a multiple of 2^-" + std::to_string(d) +
                                  " in [0,1]; raise the fine resolution");
    }
    const auto count = static_cast<std::uint64_t>(q);
    for (std::uint64_t k = 0; k < count; ++k) F.set(c * width + k, 1.0);
  }
  return F;
}

AntonovReport antonov_check(const DyadicFunction& f, const DyadicFunction& F) {
  const int K = f.resolution();
  const int Kf = F.resolution();
  if (Kf < K) throw std::invalid_argument("F must be at least as fine as f");
  const auto diff = f.refine(Kf) - F;
  const auto coeffs = walsh_transform(diff);
  const auto rev = reversal_table(Kf);
  std::vector<double> partial(F.size(), 0.0);
  AntonovReport r;
  for (std::uint64_t n = 1; n <= (std::uint64_t{1} << K); ++n) {
    const double c = coeffs[n - 1];
    double worst = 0.0;
    for (std::size_t i = 0; i < partial.size(); ++i) {
      partial[i] += walsh_sign(n - 1, rev[i]) * c;
      worst = std::max(worst, std::abs(partial[i]));
    }
    r.max_partial_error = std::max(r.max_partial_error, worst);
  }
  r.mass_gap = std::abs(f.integral() - F.integral());
  r.holds = r.max_partial_error <= 1e-12 && r.mass_gap == 0.0;
  return r;
}

double factor_D(double s) {
  if (!(s > 0.0)) throw std::domain_error("D(s) needs s > 0");
  return s * loglog_plus(1.0 / s);
}

FinalNormReport final_norm_checks(const DyadicFunction& f, const LacunarySequence& seq, double C_fac) {
  if (f.is_zero()) throw std::invalid_argument("final norm checks need f != 0");
  FinalNormReport r;
  r.constant = C_fac;
  const auto lac = lacunary_maximal(f, seq).value;
  r.weak_lhs = weak_l1_norm(lac);
  r.strong_lhs = lac.l1_norm();
  r.weak_rhs = luxembourg_norm(f, usable_gauge(GaugeTag::L_loglogL_logloglogL));
  r.strong_rhs = luxembourg_norm(f, usable_gauge(GaugeTag::L_logL_loglogL));
  r.weak_ratio = r.weak_lhs / r.weak_rhs;
  r.strong_ratio = r.strong_lhs / r.strong_rhs;
  r.atom = f.sup_norm() <= 1.0;
  if (r.atom) {
    const auto curve = decreasing_rearrangement(lac);
    const double D = factor_D(f.l1_norm());
    for (double t : distribution_grid(f.resolution())) {
      // R(t) = 1/t.
      r.factorization_sup = std::max(r.factorization_sup, curve(t) * t / D);
    }
  }
  r.holds = !r.atom || r.factorization_sup <= C_fac;
  return r;
}

}  // namespace walsh
