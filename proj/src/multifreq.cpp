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

#include "walsh/multifreq.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <stdexcept>

#include "walsh/walsh.hpp"

namespace walsh {

double DyadicInterval::length() const { return std::ldexp(1.0, -scale); }

std::string DyadicInterval::to_string() const { return std::to_string(scale) + ":" + std::to_string(time); }

double choose_lambda(double F_measure, double G_measure, double C_0) {
  if (!(F_measure > 0.0)) throw std::domain_error("choose_lambda needs |F| > 0");
  if (F_measure > C_0 * G_measure) {
    throw std::domain_error("|F| exceeds C_0 |G|; use the L^2 bound instead");
  }
  return 2.0 * F_measure / G_measure;
}

DyadicFunction ExceptionalCover::indicator(int resolution) const {
  DyadicFunction out(resolution);
  for (const auto& I : intervals) {
    for (auto i = I.cell_begin(resolution); i < I.cell_end(resolution); ++i) out.set(i, 1.0);
  }
  return out;
}

ExceptionalCover exceptional_cover(const DyadicFunction& F, double lambda) {
  if (!F.is_indicator()) throw std::invalid_argument("exceptional cover needs an indicator F");
  if (!(lambda > 0.0)) throw std::invalid_argument("exceptional cover needs lambda > 0");
  const int K = F.resolution();
  ExceptionalCover cover;
  cover.lambda = lambda;
  cover.F_measure = F.integral();
  if (lambda >= 1.0) {
    cover.applicable = false;
    return cover;
  }
  std::vector<double> prefix(F.size() + 1, 0.0);
  for (std::size_t i = 0; i < F.size(); ++i) prefix[i + 1] = prefix[i] + F[i];
  auto mean = [&](const DyadicInterval& I) {
    const auto b = I.cell_begin(K), e = I.cell_end(K);
    return (prefix[e] - prefix[b]) / static_cast<double>(e - b);
  };

  std::function<void(DyadicInterval)> descend = [&](DyadicInterval I) {
    if (mean(I) > lambda) {
      cover.intervals.push_back(I);
      return;
    }
    if (I.scale == K) return;
    descend({I.scale + 1, 2 * I.time});
    descend({I.scale + 1, 2 * I.time + 1});
  };
  descend({0, 0});

  cover.disjoint = true;
  cover.maximal = true;
  cover.density_bound = true;
  for (std::size_t a = 0; a < cover.intervals.size(); ++a) {
    const auto& I = cover.intervals[a];
    const double d = mean(I);
    cover.densities.push_back(d);
    cover.total_measure += I.length();
    if (I.scale > 0) {
      cover.maximal = cover.maximal && mean({I.scale - 1, I.time >> 1}) <= lambda;
      cover.density_bound = cover.density_bound && d <= 2 * lambda;
    }
    if (a > 0) cover.disjoint = cover.disjoint && cover.intervals[a - 1].cell_end(K) <= I.cell_begin(K);
  }
  cover.measure_bound = cover.total_measure <= cover.F_measure / lambda * (1 + 1e-12);
  cover.covers_F = F.dominated_by(cover.indicator(K));
  return cover;
}

LocalProjection collect_local_tiles(const DyadicInterval& I, const TileCollection& P_k, double alpha,
                                    int resolution) {
  if (!(alpha > 1.0)) throw std::invalid_argument("lacunarity constant must exceed 1");
  LocalProjection lp;
  lp.interval = I;
  lp.phi = DyadicFunction(resolution);
  lp.order_holds = true;
  std::set<std::uint64_t> mus;
  for (const auto& P : P_k) {
    const DyadicInterval IP{P.scale, P.time};
    if (I.contains(IP)) {
      ++lp.inner_tiles;
      continue;
    }
    if (!IP.contains(I)) continue;
    // omega_p is the dyadic interval of length |I|^-1 containing omega_{P_l}.
    const std::uint64_t start = P.freq << (P.scale + 1);
    const Tile p{I.scale, I.time, start >> I.scale};
    lp.order_holds = lp.order_holds && tile_less(p, P.lower()) && tile_less(p, P.upper());
    mus.insert(p.freq);
  }
  lp.mu.assign(mus.begin(), mus.end());
  for (auto mu : lp.mu) lp.tiles.push_back({I.scale, I.time, mu});

  const double gap = std::isinf(alpha) ? 0.0 : 2.0 / (alpha - 1.0);
  lp.dropped = 1 + static_cast<std::size_t>(std::ceil(gap - 1e-12));
  lp.required_ratio = std::isinf(alpha) ? 1.0 : (alpha + 1.0) / 2.0;
  lp.tail_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = lp.dropped; i + 1 < lp.mu.size(); ++i) {
    lp.tail_ratio = std::min(lp.tail_ratio, static_cast<double>(lp.mu[i + 1]) / static_cast<double>(lp.mu[i]));
  }
  lp.tail_lacunary = lp.tail_ratio >= lp.required_ratio;
  return lp;
}

ProjectionReport multifreq_project(const DyadicFunction& f, const ExceptionalCover& cover,
                                   std::vector<LocalProjection>& locals, const TileCollection& P_k,
                                   const DyadicFunction& g, const ChoiceFunction& N) {
  const int K = f.resolution();
  ProjectionReport r;
  r.support_ok = (f * cover.indicator(K)) == f;
  if (!r.support_ok) throw std::invalid_argument("f must vanish off the exceptional cover");

  const CoefficientTable coeffs(f);
  const auto rev = reversal_table(K);
  r.phi = DyadicFunction(K);
  std::vector<double> phi(f.size(), 0.0);
  for (auto& lp : locals) {
    std::vector<double> local(f.size(), 0.0);
    const auto b = lp.interval.cell_begin(K), e = lp.interval.cell_end(K);
    for (const auto& p : lp.tiles) {
      if (!representable(p, K)) continue;
      const double c = coeffs(p);
      if (c == 0.0) continue;
      const double amp = c * std::sqrt(std::ldexp(1.0, p.scale));
      for (auto i = b; i < e; ++i) local[i] += packet_value(p, K, i, rev[i], amp);
    }
    double sq = 0.0;
    for (auto i = b; i < e; ++i) {
      phi[i] += local[i];
      sq += local[i] * local[i];
    }
    lp.phi = DyadicFunction(K, std::move(local));
    lp.phi_norm = std::sqrt(sq * f.cell_measure());
  }
  r.phi = DyadicFunction(K, std::move(phi));

  // Cover intervals are disjoint and sorted by position.
  for (const auto& P : P_k) {
    const Tile lower = P.lower();
    const double amp = std::sqrt(std::ldexp(1.0, P.scale));
    const auto pb = P.rect().cell_begin(K), pe = P.rect().cell_end(K);
    for (const auto& lp : locals) {
      const auto b = std::max<std::uint64_t>(pb, lp.interval.cell_begin(K));
      const auto e = std::min<std::uint64_t>(pe, lp.interval.cell_end(K));
      if (b >= e) continue;
      double acc = 0.0;
      for (auto i = b; i < e; ++i) acc += (f[i] - lp.phi[i]) * packet_value(lower, K, i, rev[i], amp);
      r.max_cancellation = std::max(r.max_cancellation, std::abs(acc * f.cell_measure()));
    }
  }
  r.cancellation_holds = r.max_cancellation <= 1e-10;
  r.form_f = bilinear_form(P_k, f, g, N);
  r.form_phi = bilinear_form(P_k, r.phi, g, N);
  r.form_holds = std::abs(r.form_f - r.form_phi) <= 1e-9;
  return r;
}

ZygmundReport zygmund_ratio(const DyadicFunction& f, const LacunarySequence& seq, const OrliczGauge& gauge) {
  if (!seq.fits(f.resolution())) throw std::invalid_argument("lacunary terms must be below 2^K");
  ZygmundReport r;
  const auto coeffs = walsh_transform(f);
  double sq = 0.0;
  for (auto n : seq.terms()) sq += coeffs[n] * coeffs[n];
  r.lhs = std::sqrt(sq);
  r.rhs = luxembourg_norm(f, gauge);
  r.ratio = r.rhs > 0.0 ? r.lhs / r.rhs : 0.0;
  return r;
}

KhintchineReport khintchine_ratio(const std::vector<double>& a, const LacunarySequence& seq, int p,
                                  int resolution) {
  if (p < 2 || p > 10 || p % 2 != 0) throw std::invalid_argument("p must be one of 2, 4, 6, 8, 10");
  if (a.size() != seq.count()) throw std::invalid_argument("one coefficient per lacunary term");
  if (!seq.fits(resolution)) throw std::invalid_argument("lacunary terms must be below 2^K");
  std::vector<double> coeffs(std::size_t{1} << resolution, 0.0);
  double sq = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    coeffs[seq[j]] = a[j];
    sq += a[j] * a[j];
  }
  if (sq == 0.0) throw std::invalid_argument("coefficient sequence must be nonzero");
  const auto sum = inverse_walsh_transform(coeffs, resolution);
  KhintchineReport r;
  r.p = p;
  r.l2_coefficients = std::sqrt(sq);
  double acc = 0.0;
  for (double v : sum.values()) acc += std::pow(std::abs(v), p);
  r.lp_norm = std::pow(acc * sum.cell_measure(), 1.0 / p);
  r.lp_ratio = r.lp_norm / (std::sqrt(static_cast<double>(p)) * r.l2_coefficients);
  r.exp_ratio = luxembourg_norm(sum, OrliczGauge::named(GaugeTag::exp_L2)) / r.l2_coefficients;
  return r;
}

PhiChainReport phi_l2_chain(const DyadicFunction& F, const ExceptionalCover& cover,
                            const std::vector<LocalProjection>& locals, double G_measure, double C_phi) {
  PhiChainReport r;
  r.lambda = cover.lambda;
  r.F_measure = F.integral();
  r.G_measure = G_measure;
  r.constant = C_phi;
  const double log_factor = std::sqrt(log_plus(1.0 / cover.lambda));
  double sq = 0.0;
  for (const auto& lp : locals) {
    const double ratio = lp.phi_norm / (cover.lambda * log_factor * std::sqrt(lp.interval.length()));
    r.interval_ratios.push_back(ratio);
    r.max_interval_ratio = std::max(r.max_interval_ratio, ratio);
    sq += lp.phi_norm * lp.phi_norm;
  }
  r.phi_norm = std::sqrt(sq);
  const double denom = r.F_measure / std::sqrt(G_measure) * log_factor;
  r.total_ratio = denom > 0.0 ? r.phi_norm / denom : 0.0;
  r.holds = r.max_interval_ratio <= C_phi && r.total_ratio <= C_phi;
  return r;
}

K0Report k0_summation(double F_measure, double lambda, double C_k) {
  if (!(lambda > 0.0)) throw std::invalid_argument("k0 summation needs lambda > 0");
  K0Report r;
  r.k0 = C_k * loglog_plus(1.0 / lambda);
  const double first = std::floor(r.k0) + 1.0;
  const double geometric = std::pow(2.0, -first / 2.0) / (1.0 - std::sqrt(0.5));
  r.tail_sum = geometric * F_measure * std::sqrt(log_plus(1.0 / lambda));
  r.ratio = F_measure > 0.0 ? r.tail_sum / F_measure : 0.0;
  r.holds = r.ratio <= 1.0;
  return r;
}

TileCollection restrict_to_sets(const TileCollection& tiles, const DyadicFunction& F, const DyadicFunction& G_prime) {
  const int K = F.resolution();
  std::vector<double> pf(F.size() + 1, 0.0), pg(F.size() + 1, 0.0);
  for (std::size_t i = 0; i < F.size(); ++i) {
    pf[i + 1] = pf[i] + (F[i] != 0.0);
    pg[i + 1] = pg[i] + (G_prime[i] != 0.0);
  }
  return tiles.filter([&](const BiTile& P) {
    const auto b = P.rect().cell_begin(K), e = P.rect().cell_end(K);
    return pf[e] > pf[b] && pg[e] > pg[b];
  });
}

}  // namespace walsh
