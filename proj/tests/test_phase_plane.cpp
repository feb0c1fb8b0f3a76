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

#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "walsh/phase_plane.hpp"
#include "walsh/walsh.hpp"

using namespace walsh;

namespace {

std::vector<oracle::Bi> to_oracle(const TileCollection& tiles) {
  std::vector<oracle::Bi> out;
  for (const auto& p : tiles) out.push_back({p.scale, p.time, p.freq});
  return out;
}

ChoiceFunction random_choice(std::mt19937_64& rng, int K, const LacunarySequence& seq) {
  std::uniform_int_distribution<std::size_t> pick(0, seq.count() - 1);
  std::vector<std::uint64_t> v(std::size_t{1} << K);
  for (auto& n : v) n = seq[pick(rng)];
  return ChoiceFunction(K, std::move(v));
}

}  // namespace

TEST_CASE("wave packet examples") {
  const auto w0 = wave_packet(Tile{0, 0, 0}, 3);
  for (double x : w0.values()) CHECK(x == 1.0);
  const auto a = wave_packet(Tile{1, 0, 0}, 3);  // [0,1/2) x [0,2)
  const auto b = wave_packet(Tile{1, 0, 1}, 3);  // [0,1/2) x [2,4)
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(a[i] == doctest::Approx(i < 4 ? std::sqrt(2.0) : 0.0));
    const double expected = i < 2 ? std::sqrt(2.0) : (i < 4 ? -std::sqrt(2.0) : 0.0);
    CHECK(b[i] == doctest::Approx(expected));
  }
  CHECK_THROWS(wave_packet(Tile{1, 0, 4}, 3));
}

TEST_CASE("wave packets match the rescaled Walsh oracle and are orthonormal") {
  const int K = 5;
  std::vector<Tile> tiles;
  for (int s = 0; s <= K; ++s) {
    for (std::uint64_t m = 0; m < (1u << s); ++m) {
      for (std::uint64_t n = 0; n < (1u << (K - s)); ++n) tiles.push_back({s, m, n});
    }
  }
  std::vector<DyadicFunction> packets;
  for (const auto& p : tiles) {
    packets.push_back(wave_packet(p, K));
    for (std::size_t i = 0; i < (1u << K); ++i) {
      REQUIRE(packets.back()[i] == doctest::Approx(oracle::packet(p.scale, p.time, p.freq, i, K)));
    }
  }
  for (std::size_t a = 0; a < tiles.size(); ++a) {
    CHECK(packets[a].inner(packets[a]) == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t b = a + 1; b < tiles.size(); ++b) {
      if (!rects_intersect(tiles[a].rect(), tiles[b].rect())) {
        REQUIRE(std::abs(packets[a].inner(packets[b])) <= 1e-12);
      }
    }
  }
}

TEST_CASE("restriction of a packet to a finer interval") {
  // p < P_l: w_{P_l} on I_p is a multiple of w_p with |scalar| = (|I_p|/|I_{P_l}|)^{1/2}.
  const int K = 6;
  const BiTile P{1, 1, 3};
  const Tile lower = P.lower();
  const auto wP = wave_packet(lower, K);
  for (int s = P.scale + 1; s <= 4; ++s) {
    const std::uint64_t m = (P.time << (s - P.scale)) + 1;
    const std::uint64_t n = (lower.freq << lower.scale) >> s;
    const Tile p{s, m, n};
    REQUIRE(tile_less(p, lower));
    const auto wp = wave_packet(p, K);
    const auto restricted = wP * DyadicFunction::dyadic_indicator(K, s, m);
    const double scalar = restricted.inner(wp);
    CHECK(std::abs(scalar) == doctest::Approx(std::sqrt(std::ldexp(1.0, P.scale - s))));
    const auto diff = restricted - wp * scalar;
    CHECK(diff.sup_norm() <= 1e-12);
  }
}

TEST_CASE("coefficients") {
  const auto w5 = walsh_function(5, 3);
  CHECK(coefficient(w5, Tile{0, 0, 5}) == doctest::Approx(1.0));
  std::mt19937_64 rng(41);
  const int K = 6;
  const auto v = oracle::random_values(rng, K);
  const DyadicFunction f(K, v);
  const CoefficientTable table(f);
  for (const Tile p : {Tile{0, 0, 17}, Tile{2, 3, 5}, Tile{6, 40, 0}, Tile{4, 9, 3}}) {
    const double expected = oracle::inner_packet(v, p.scale, p.time, p.freq, K);
    CHECK(coefficient(f, p) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(table(p) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("Bessel for disjoint tiles") {
  std::mt19937_64 rng(42);
  const int K = 6;
  const DyadicFunction f(K, oracle::random_values(rng, K));
  // One column of the phase plane per scale: disjoint, and a full basis for s = 3.
  double sum = 0.0;
  for (std::uint64_t m = 0; m < 8; ++m) {
    for (std::uint64_t n = 0; n < 8; ++n) sum += std::pow(coefficient(f, Tile{3, m, n}), 2);
  }
  CHECK(sum == doctest::Approx(f.l2_norm() * f.l2_norm()).epsilon(1e-10));
  double partial = 0.0;
  for (std::uint64_t n = 0; n < 8; n += 2) partial += std::pow(coefficient(f, Tile{3, 1, n}), 2);
  CHECK(partial <= f.l2_norm() * f.l2_norm() + 1e-10);
}

TEST_CASE("bi-tile enumeration") {
  CHECK(enumerate_bitiles(1, LacunarySequence({1})).size() == 1);
  for (int K = 0; K <= 8; ++K) CHECK(enumerate_bitiles(K, LacunarySequence({1})).size() == 1);

  // Brute force: every bi-tile whose upper half contains a term.
  for (int K : {4, 6}) {
    const auto seq = LacunarySequence::geometric(1.6, K);
    std::size_t count = 0;
    for (int s = 0; s <= K; ++s) {
      for (std::uint64_t n = 0; n < (1u << (K - s)); ++n) {
        const std::uint64_t lo = (2 * n + 1) << s, hi = (2 * n + 2) << s;
        bool hit = false;
        for (auto t : seq.terms()) hit = hit || (t >= lo && t < hi);
        if (hit) count += std::size_t{1} << s;
      }
    }
    const auto tiles = enumerate_bitiles(K, seq);
    CHECK(tiles.size() == count);
  }
  // Terms reaching 2^{K-1}: the count roughly doubles with K.
  const double ratio = double(enumerate_bitiles(9, LacunarySequence::geometric(2.0, 9)).size()) /
                       double(enumerate_bitiles(8, LacunarySequence::geometric(2.0, 8)).size());
  CHECK(ratio == doctest::Approx(2.0).epsilon(0.2));
  // A fixed sequence saturates: scales with 2^s above the top term add nothing.
  const auto fixed = LacunarySequence::geometric(2.0, 6);
  CHECK(enumerate_bitiles(8, fixed).size() == enumerate_bitiles(7, fixed).size());
  CHECK_THROWS(enumerate_bitiles(3, LacunarySequence({1, 16})));
}

TEST_CASE("master identity on small examples") {
  const auto one = carleson_apply(walsh_function(0, 1), ChoiceFunction::constant(1, 1),
                                  enumerate_bitiles(1, LacunarySequence({1})));
  CHECK(one[0] == 1.0);
  CHECK(one[1] == 1.0);
  const auto seq = LacunarySequence({1, 2});
  const auto zero = carleson_apply(walsh_function(1, 3), ChoiceFunction::constant(3, 1), enumerate_bitiles(3, seq));
  CHECK(zero.sup_norm() <= 1e-15);
}

TEST_CASE("master identity against direct partial sums") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const int K = 5 + trial % 3;
    const auto seq = LacunarySequence::geometric(1.5 + 0.1 * (trial % 5), K);
    const auto v = oracle::random_values(rng, K);
    const auto N = random_choice(rng, K, seq);
    const auto out = carleson_apply(DyadicFunction(K, v), N, enumerate_bitiles(K, seq));
    const auto coeffs = oracle::transform(v, K);
    for (std::size_t i = 0; i < v.size(); ++i) {
      double direct = 0.0;
      for (std::uint64_t k = 0; k < N[i]; ++k) direct += coeffs[k] * oracle::walsh(k, oracle::midpoint(i, K));
      REQUIRE(std::abs(out[i] - direct) <= 1e-9);
    }
  }
}

TEST_CASE("linearization of the lacunary maximal function") {
  std::mt19937_64 rng(44);
  const int K = 7;
  const auto seq = LacunarySequence::geometric(2.0, K);
  const DyadicFunction f(K, oracle::random_values(rng, K));
  const auto lm = lacunary_maximal(f, seq);
  const auto cf = carleson_apply(f, lm.argmax, enumerate_bitiles(K, seq));
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(std::abs(std::abs(cf[i]) - lm.value[i]) <= 1e-12);
}

TEST_CASE("bilinear form") {
  std::mt19937_64 rng(45);
  const int K = 6;
  const auto seq = LacunarySequence::geometric(2.0, K);
  const DyadicFunction f(K, oracle::random_values(rng, K));
  const DyadicFunction g(K, oracle::random_values(rng, K));
  const auto N = random_choice(rng, K, seq);
  const auto tiles = enumerate_bitiles(K, seq);
  CHECK(bilinear_form(tiles, f, DyadicFunction(K), N) == 0.0);
  CHECK(std::abs(bilinear_form(tiles, f, g, N) - carleson_apply(f, N, tiles).inner(g)) <= 1e-10);
  const auto coarse = tiles.filter([](const BiTile& p) { return p.scale < 3; });
  const auto fine = tiles.minus(coarse);
  CHECK(bilinear_form(coarse, f, g, N) + bilinear_form(fine, f, g, N) ==
        doctest::Approx(bilinear_form(tiles, f, g, N)).epsilon(1e-12));
  CHECK(coarse.united(fine).size() == tiles.size());
}

TEST_CASE("density examples") {
  const auto G = DyadicFunction::indicator(3, 0, 8);
  CHECK(density(BiTile{0, 0, 0}, G, ChoiceFunction::constant(3, 1)) == 1.0);
  CHECK(density(BiTile{0, 0, 0}, DyadicFunction(3), ChoiceFunction::constant(3, 1)) == 0.0);
}

TEST_CASE("density against brute force over all witnesses") {
  std::mt19937_64 rng(46);
  for (int trial = 0; trial < 6; ++trial) {
    const int K = 5;
    const auto seq = LacunarySequence::geometric(1.5 + 0.25 * trial, K);
    const auto G = oracle::random_set(rng, K, 0.3 + 0.1 * trial);
    const auto N = random_choice(rng, K, seq);
    const auto tiles = enumerate_bitiles(K, seq);
    const DyadicFunction Gf(K, G);
    const DensityField field(Gf, N);
    std::vector<std::uint64_t> Nv(N.values().begin(), N.values().end());
    double worst = 0.0;
    for (const auto& p : tiles) {
      const double expected = oracle::density({p.scale, p.time, p.freq}, G, Nv, K);
      REQUIRE(field.density(p) == doctest::Approx(expected).epsilon(1e-12));
      worst = std::max(worst, expected);
    }
    CHECK(density(tiles, Gf, N) == doctest::Approx(worst));
    // Enlarging G never decreases density.
    const DyadicFunction bigger(K, std::vector<double>(G.size(), 1.0));
    CHECK(density(tiles, bigger, N) >= worst);
  }
}

TEST_CASE("size examples") {
  const int K = 3;
  const TileCollection one({BiTile{1, 0, 0}});
  const auto f = wave_packet(Tile{1, 0, 0}, K);
  const auto r = size_with_witness(one, CoefficientTable(f));
  CHECK(r.size == doctest::Approx(1.0));
  REQUIRE(r.witness.has_value());
  CHECK(*r.witness == TreeTop::from(BiTile{0, 0, 1}));
  CHECK(size(one, DyadicFunction(K)) == 0.0);
}

TEST_CASE("size against brute force over all tops") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 6; ++trial) {
    const int K = 5;
    const auto seq = LacunarySequence::geometric(1.5 + 0.2 * trial, K);
    const auto v = oracle::random_values(rng, K);
    auto tiles = enumerate_bitiles(K, seq);
    std::bernoulli_distribution keep(0.5);
    tiles = tiles.filter([&](const BiTile&) { return keep(rng); });
    const double got = size(tiles, DyadicFunction(K, v));
    CHECK(got == doctest::Approx(oracle::size(to_oracle(tiles), v, K)).epsilon(1e-10));
    // Monotone in the collection.
    const auto part = tiles.filter([](const BiTile& p) { return p.scale % 2 == 0; });
    CHECK(size(part, DyadicFunction(K, v)) <= got + 1e-12);
  }
}

TEST_CASE("upper size check") {
  const int K = 6;
  const auto seq = LacunarySequence::geometric(2.0, K);
  const auto tiles = enumerate_bitiles(K, seq);
  const DyadicFunction constant(K, std::vector<double>(64, 0.75));
  const auto c = upper_size_check(tiles, constant, 0.75);
  CHECK(c.precondition_holds);
  CHECK(c.measured_C <= 1.0 + 1e-9);
  CHECK(upper_size_check(tiles, DyadicFunction(K), 1.0).size == 0.0);
  for (int m = 2; m <= 6; ++m) {
    const auto f = DyadicFunction::indicator(K, 0, std::size_t{1} << (K - m)) * std::ldexp(1.0, m);
    const auto right = tiles.filter([&](const BiTile& p) { return p.rect().cell_end(K) > 32; });
    const auto r = upper_size_check(right, f, 2.0);
    CHECK(r.precondition_holds);
    CHECK(r.measured_C <= 8.0);
  }
  const auto spike = DyadicFunction::indicator(K, 0, 1) * 64.0;
  const auto left = tiles.filter([](const BiTile& p) { return p.scale == 3 && p.time == 0; });
  REQUIRE_FALSE(left.empty());
  const auto bad = upper_size_check(left, spike, 2.0);
  CHECK_FALSE(bad.precondition_holds);
  CHECK(bad.violations > 0);
}
