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

#include <bit>
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "walsh/estimates.hpp"
#include "walsh/multifreq.hpp"
#include "walsh/walsh.hpp"

using namespace walsh;

namespace {

ChoiceFunction random_choice(std::mt19937_64& rng, int K, const LacunarySequence& seq) {
  std::uniform_int_distribution<std::size_t> pick(0, seq.count() - 1);
  std::vector<std::uint64_t> v(std::size_t{1} << K);
  for (auto& n : v) n = seq[pick(rng)];
  return ChoiceFunction(K, std::move(v));
}

/// Measure of {M 1_F > lambda} from the brute-force dyadic maximal function.
double superlevel_measure(const std::vector<double>& F, int K, double lambda) {
  const auto m = oracle::dyadic_maximal(F, K);
  double count = 0.0;
  for (double v : m) count += v > lambda;
  return count / static_cast<double>(F.size());
}

/// A union of random dyadic intervals at scales 3..7.
std::vector<double> random_dyadic_union(std::mt19937_64& rng, int K, int pieces) {
  std::vector<double> F(std::size_t{1} << K, 0.0);
  std::uniform_int_distribution<int> scale(3, 7);
  for (int j = 0; j < pieces; ++j) {
    const int s = scale(rng);
    const std::size_t len = std::size_t{1} << (K - s);
    const std::size_t start = std::uniform_int_distribution<std::size_t>(0, (std::size_t{1} << s) - 1)(rng) * len;
    for (std::size_t i = start; i < start + len; ++i) F[i] = 1.0;
  }
  return F;
}

}  // namespace

TEST_CASE("lambda selection") {
  CHECK(choose_lambda(std::ldexp(1.0, -6), 1.0) == std::ldexp(1.0, -5));
  CHECK(choose_lambda(0.25, 1.0) == 0.5);
  CHECK(choose_lambda(0.125, 0.5) == 0.5);
  CHECK_THROWS_AS(choose_lambda(0.3, 1.0), std::domain_error);
  CHECK_THROWS_AS(choose_lambda(0.0, 1.0), std::domain_error);
}

TEST_CASE("exhaustive majority at K = 4") {
  // Every F with |F| <= 1/4 and G = [0,1]: |{M 1_F > 2|F|}| <= 1/2.
  const int K = 4;
  std::size_t checked = 0;
  for (std::uint32_t mask = 1; mask < (1u << 16); ++mask) {
    if (std::popcount(mask) > 4) continue;
    std::vector<double> F(16);
    for (int i = 0; i < 16; ++i) F[i] = (mask >> i) & 1;
    const double measure = std::popcount(mask) / 16.0;
    const double lambda = choose_lambda(measure, 1.0);
    REQUIRE(superlevel_measure(F, K, lambda) <= 0.5);
    const auto cover = exceptional_cover(DyadicFunction(K, F), lambda);
    REQUIRE(cover.holds());
    REQUIRE(cover.total_measure == superlevel_measure(F, K, lambda));
    ++checked;
  }
  CHECK(checked == 2516);
}

TEST_CASE("exceptional cover examples") {
  const int K = 8;
  const auto F = DyadicFunction::indicator(K, 0, 16);  // [0, 2^-4)
  // Means along the left spine are 2^{s-4}; the largest interval with mean > 1/8 has s = 2.
  const auto c = exceptional_cover(F, 0.125);
  REQUIRE(c.intervals.size() == 1);
  CHECK(c.intervals[0] == DyadicInterval{2, 0});
  CHECK(c.densities[0] == 0.25);
  CHECK(c.holds());

  const auto tight = exceptional_cover(F, 0.5);
  REQUIRE(tight.intervals.size() == 1);
  CHECK(tight.intervals[0] == DyadicInterval{4, 0});

  const auto none = exceptional_cover(F, 1.0);
  CHECK_FALSE(none.applicable);
  CHECK(none.intervals.empty());
  CHECK(none.holds());
}

TEST_CASE("random covers satisfy the weak-(1,1) bound") {
  std::mt19937_64 rng(71);
  const int K = 8;
  for (int trial = 0; trial < 30; ++trial) {
    const auto Fv = trial % 2 ? oracle::random_set(rng, K, 0.05) : random_dyadic_union(rng, K, 1 + trial % 4);
    const DyadicFunction F(K, Fv);
    if (F.support_measure() == 0.0) continue;
    const double lambda = std::uniform_real_distribution<double>(0.01, 0.9)(rng);
    const auto c = exceptional_cover(F, lambda);
    CHECK(c.holds());
    CHECK(c.total_measure <= F.support_measure() / lambda + 1e-12);
    CHECK(c.total_measure == doctest::Approx(superlevel_measure(Fv, K, lambda)));
    for (std::size_t j = 0; j < c.intervals.size(); ++j) {
      const auto& I = c.intervals[j];
      double inside = 0.0;
      for (auto i = I.cell_begin(K); i < I.cell_end(K); ++i) inside += Fv[i];
      CHECK(c.densities[j] == doctest::Approx(inside / double(I.cell_end(K) - I.cell_begin(K))));
      CHECK(c.densities[j] <= 2 * lambda + 1e-12);
    }
  }
}

TEST_CASE("local tile families") {
  const int K = 6;
  const auto I = DyadicInterval{3, 0};
  CHECK(collect_local_tiles(I, TileCollection{}, 2.0, K).tiles.empty());

  // P over [0,1/2) with lower half [4,6): the only scale-3 tile over I meeting it is [0,8).
  const TileCollection single({BiTile{1, 0, 1}});
  const auto q = collect_local_tiles(I, single, 2.0, K);
  REQUIRE(q.tiles.size() == 1);
  CHECK(q.tiles[0] == Tile{3, 0, 0});
  CHECK(q.order_holds);
  CHECK(q.inner_tiles == 0);
}

TEST_CASE("local frequencies are lacunary after the prefix") {
  const int K = 12;
  const auto seq = LacunarySequence::geometric(2.0, K);
  const auto P = enumerate_bitiles(K, seq).filter([](const BiTile& p) { return p.scale < 8; });
  const auto q = collect_local_tiles(DyadicInterval{8, 3}, P, seq.ratio(), K);
  CHECK(q.dropped == 3);  // 1 + ceil(2 / (2 - 1))
  CHECK(q.required_ratio == 1.5);
  CHECK(q.tail_ratio >= 1.5);
  CHECK(q.tail_lacunary);
  CHECK(q.order_holds);
  for (const auto& p : q.tiles) CHECK((p.scale == 8 && p.time == 3));
  for (std::size_t j = 0; j < q.mu.size(); ++j) {
    CHECK(q.mu[j] == q.tiles[j].freq);
    if (j) CHECK(q.mu[j] > q.mu[j - 1]);
  }
}

TEST_CASE("projection fixes its range and kills its complement") {
  const int K = 8;
  const auto seq = LacunarySequence::geometric(2.0, K);
  const auto F = DyadicFunction::indicator(K, 0, 16);
  const auto cover = exceptional_cover(F, 0.5);
  REQUIRE(cover.intervals.size() == 1);
  const auto I = cover.intervals[0];
  const auto P = enumerate_bitiles(K, seq).filter([](const BiTile& p) { return p.scale < 4; });
  std::mt19937_64 rng(72);
  const DyadicFunction g(K, oracle::random_values(rng, K));
  const auto N = random_choice(rng, K, seq);

  std::vector<LocalProjection> locals{collect_local_tiles(I, P, seq.ratio(), K)};
  REQUIRE_FALSE(locals[0].tiles.empty());
  const auto member = locals[0].tiles.back();
  const auto in = wave_packet(member, K);
  const auto r = multifreq_project(in, cover, locals, P, g, N);
  CHECK((r.phi - in).sup_norm() <= 1e-12);
  CHECK(r.holds());

  std::optional<Tile> outside;
  for (std::uint64_t n = 0; n < 16 && !outside; ++n) {
    const Tile p{4, 0, n};
    bool used = false;
    for (const auto& t : locals[0].tiles) used = used || t == p;
    if (!used) outside = p;
  }
  REQUIRE(outside.has_value());
  std::vector<LocalProjection> again{collect_local_tiles(I, P, seq.ratio(), K)};
  const auto zero = multifreq_project(wave_packet(*outside, K), cover, again, P, g, N);
  CHECK(zero.phi.sup_norm() <= 1e-12);
  CHECK(zero.holds());

  CHECK_THROWS(multifreq_project(DyadicFunction::indicator(K, 100, 101), cover, again, P, g, N));
}

TEST_CASE("randomized cancellation and form identity") {
  std::mt19937_64 rng(73);
  const int K = 8;
  for (int trial = 0; trial < 10; ++trial) {
    const auto seq = LacunarySequence::geometric(trial % 2 ? 2.0 : 3.0, K);
    const DyadicFunction F(K, random_dyadic_union(rng, K, 1 + trial % 3));
    const auto G = DyadicFunction::indicator(K, 0, 256);
    if (F.support_measure() > 0.25) continue;
    const auto N = choose_N(F, seq, NStrategy::argmax);
    const auto run = multifreq_experiment(F, G, seq, N);
    CHECK(run.projection.max_cancellation <= 1e-10);
    CHECK(std::abs(run.projection.form_f - run.projection.form_phi) <= 1e-9);
    CHECK(run.holds());
    CHECK(run.chain.holds);
  }
}

TEST_CASE("phi chain") {
  const int K = 8;
  const auto seq = LacunarySequence::geometric(2.0, K);
  const auto F = DyadicFunction::indicator(K, 0, 16);
  const auto cover = exceptional_cover(F, 0.5);
  const auto P = enumerate_bitiles(K, seq).filter([](const BiTile& p) { return p.scale < 4; });
  const auto G = DyadicFunction::indicator(K, 0, 256);
  const auto N = ChoiceFunction::constant(K, 1);
  std::vector<LocalProjection> locals{collect_local_tiles(cover.intervals[0], P, seq.ratio(), K)};
  multifreq_project(DyadicFunction(K), cover, locals, P, G, N);
  const auto zero = phi_l2_chain(F, cover, locals, 1.0);
  CHECK(zero.phi_norm == 0.0);
  CHECK(zero.max_interval_ratio == 0.0);

  multifreq_project(F, cover, locals, P, G, N);
  const auto one = phi_l2_chain(F, cover, locals, 1.0);
  REQUIRE(one.interval_ratios.size() == 1);
  // The norm of phi_I is the l2 norm of the coefficients of 1_F over Q_I.
  double energy = 0.0;
  const std::vector<double> Fv(F.values().begin(), F.values().end());
  for (const auto& p : locals[0].tiles) energy += std::pow(oracle::inner_packet(Fv, p.scale, p.time, p.freq, K), 2);
  CHECK(one.phi_norm == doctest::Approx(std::sqrt(energy)));
  CHECK(one.max_interval_ratio <= 16.0);
  CHECK(one.holds);
}

TEST_CASE("Zygmund ratio") {
  const int K = 8;
  const auto seq = LacunarySequence::geometric(2.0, K);
  // ||1||_{L(log L)^{1/2}} = sqrt(27) since log_+ is 27 on [0, e].
  const auto first = zygmund_ratio(walsh_function(seq.front(), K), seq);
  CHECK(first.lhs == doctest::Approx(1.0));
  CHECK(first.ratio == doctest::Approx(1.0 / std::sqrt(27.0)).epsilon(1e-9));
  CHECK(zygmund_ratio(walsh_function(3, K), seq).ratio == 0.0);

  for (int m = 2; m <= 6; ++m) {
    const auto f = DyadicFunction::indicator(K, 0, std::size_t{1} << (K - m)) * std::ldexp(1.0, m);
    const auto c = oracle::transform(std::vector<double>(f.values().begin(), f.values().end()), K);
    double lhs = 0.0;
    for (auto n : seq.terms()) lhs += c[n] * c[n];
    const auto r = zygmund_ratio(f, seq);
    CHECK(r.lhs == doctest::Approx(std::sqrt(lhs)).epsilon(1e-12));
    CHECK(r.ratio <= 1.0);
  }
}

TEST_CASE("Khintchine ratio") {
  const int K = 10;
  const auto seq = LacunarySequence::geometric(2.0, K);
  std::vector<double> single(seq.count(), 0.0);
  single[0] = 3.0;
  for (int p : {2, 4, 6, 8, 10}) {
    const auto r = khintchine_ratio(single, seq, p, K);
    CHECK(r.lp_ratio == doctest::Approx(1.0 / std::sqrt(double(p))));
    CHECK(r.exp_ratio == doctest::Approx(1.0 / std::sqrt(std::log(2.0))).epsilon(1e-9));
  }
  std::mt19937_64 rng(74);
  std::vector<double> coeffs(seq.count());
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& x : coeffs) x = u(rng);
  CHECK(khintchine_ratio(coeffs, seq, 2, K).lp_ratio == doctest::Approx(std::sqrt(0.5)));
  for (int p : {4, 6, 8, 10}) CHECK(khintchine_ratio(coeffs, seq, p, K).lp_ratio <= 4.0);
  CHECK_THROWS(khintchine_ratio(coeffs, seq, 3, K));
}

TEST_CASE("k0 tail summation") {
  const double lambda = std::ldexp(1.0, -5), F = std::ldexp(1.0, -6);
  const auto r = k0_summation(F, lambda);
  CHECK(r.k0 == doctest::Approx(8.0 * std::log(27.0 + std::log(32.0))));
  double tail = 0.0;
  for (int k = static_cast<int>(std::floor(r.k0)) + 1; k < 400; ++k) tail += std::pow(2.0, -k / 2.0);
  tail *= F * std::sqrt(27.0 + std::log(32.0));
  CHECK(r.tail_sum == doctest::Approx(tail).epsilon(1e-12));
  CHECK(r.holds);
}

TEST_CASE("restriction to F and G'") {
  std::mt19937_64 rng(75);
  const int K = 6;
  const auto tiles = enumerate_bitiles(K, LacunarySequence::geometric(2.0, K));
  const auto Fv = oracle::random_set(rng, K, 0.1);
  const auto Gv = oracle::random_set(rng, K, 0.3);
  const auto kept = restrict_to_sets(tiles, DyadicFunction(K, Fv), DyadicFunction(K, Gv));
  std::size_t expected = 0;
  for (const auto& p : tiles) {
    bool f = false, g = false;
    for (auto i = p.rect().cell_begin(K); i < p.rect().cell_end(K); ++i) {
      f = f || Fv[i] != 0.0;
      g = g || Gv[i] != 0.0;
    }
    if (f && g) {
      ++expected;
      CHECK(kept.contains(p));
    }
  }
  CHECK(kept.size() == expected);
}
