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

#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "walsh/tf_algorithm.hpp"
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

TileCollection random_subset(std::mt19937_64& rng, const TileCollection& tiles, double p) {
  std::bernoulli_distribution keep(p);
  return tiles.filter([&](const BiTile&) { return keep(rng); });
}

DyadicFunction sign_indicator(const DyadicFunction& h, const DyadicFunction& G) {
  DyadicFunction g(h.resolution());
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (G[i] != 0.0 && h[i] != 0.0) g.set(i, h[i] > 0 ? 1.0 : -1.0);
  }
  return g;
}

}  // namespace

TEST_CASE("density split of a single full-density bi-tile") {
  const int K = 3;
  const auto G = DyadicFunction::indicator(K, 0, 8);
  const auto N = ChoiceFunction::constant(K, 1);
  const TileCollection P({BiTile{0, 0, 0}});
  const auto cert = density_split(P, G, N, 1.0);
  CHECK(cert.small.empty());
  CHECK(cert.big.size() == 1);
  REQUIRE(cert.trees.size() == 1);
  CHECK(cert.trees[0].top == TreeTop::from(BiTile{0, 0, 0}));
  CHECK(cert.tree_top_length_sum == 1.0);
  CHECK(cert.measured_ratio == 1.0);
  CHECK(cert.holds);
  CHECK(verify_split(cert, G, G, N).holds());
}

TEST_CASE("density split preconditions") {
  const int K = 3;
  const auto N = ChoiceFunction::constant(K, 1);
  const TileCollection P({BiTile{0, 0, 0}});
  CHECK_THROWS(density_split(P, DyadicFunction(K), N, 1.0));
  CHECK_THROWS(density_split(P, DyadicFunction::indicator(K, 0, 8), N, 0.0));
}

TEST_CASE("random density splits re-verify against brute-force density") {
  std::mt19937_64 rng(51);
  const int K = 6;
  for (int trial = 0; trial < 12; ++trial) {
    const auto seq = LacunarySequence::geometric(1.5 + 0.1 * trial, K);
    const auto Gv = oracle::random_set(rng, K, 0.2 + 0.05 * trial);
    const DyadicFunction G(K, Gv);
    if (G.support_measure() == 0.0) continue;
    const auto N = random_choice(rng, K, seq);
    const auto P = random_subset(rng, enumerate_bitiles(K, seq), 0.6);
    const double delta = density(P, G, N);
    if (delta == 0.0) continue;
    const auto cert = density_split(P, G, N, delta);
    const auto check = verify_split(cert, G, G, N);
    INFO(check.failures.size());
    CHECK(check.holds());
    CHECK(cert.holds);
    CHECK(cert.measured_ratio <= 16.0);
    CHECK(cert.small.size() + cert.big.size() == P.size());
    std::vector<std::uint64_t> Nv(N.values().begin(), N.values().end());
    for (const auto& p : cert.small) {
      REQUIRE(oracle::density({p.scale, p.time, p.freq}, Gv, Nv, K) <= delta / 2 + 1e-12);
    }
    double sum = 0.0;
    for (const auto& t : cert.trees) {
      sum += t.top_length();
      CHECK(t.members_below_top());
    }
    CHECK(sum == doctest::Approx(cert.tree_top_length_sum));
  }
}

TEST_CASE("size split of a single bi-tile") {
  const int K = 3;
  const TileCollection P({BiTile{1, 0, 0}});
  const auto f = wave_packet(Tile{1, 0, 0}, K);
  const auto cert = size_split(P, f, 1.0);
  CHECK(cert.small.empty());
  REQUIRE(cert.trees.size() == 1);
  CHECK(cert.tree_top_length_sum == doctest::Approx(1.0));
  CHECK(cert.tree_top_length_sum <= 4.0 * f.l2_norm() * f.l2_norm());
  CHECK(cert.holds);
  CHECK_THROWS(size_split(P, DyadicFunction(K), 0.0));
}

TEST_CASE("random size splits: brute-force size, orthogonality and Bessel") {
  std::mt19937_64 rng(52);
  const int K = 5;
  for (int trial = 0; trial < 10; ++trial) {
    const auto seq = LacunarySequence::geometric(1.4 + 0.15 * trial, K);
    const auto v = oracle::random_values(rng, K);
    const DyadicFunction f(K, v);
    const auto P = random_subset(rng, enumerate_bitiles(K, seq), 0.7);
    const double sigma = size(P, f);
    if (sigma == 0.0) continue;
    const auto cert = size_split(P, f, sigma);
    const DyadicFunction G = DyadicFunction::indicator(K, 0, f.size());
    CHECK(verify_split(cert, f, G, ChoiceFunction::constant(K, 1)).holds());
    CHECK(cert.iterations <= P.size());
    CHECK(oracle::size(to_oracle(cert.small), v, K) <= sigma / 2 + 1e-12);

    std::vector<Tile> selected;
    for (const auto& t : cert.trees) {
      for (const auto& p : t.size_eligible()) selected.push_back(p.lower());
    }
    double bessel = 0.0;
    for (std::size_t a = 0; a < selected.size(); ++a) {
      const auto& p = selected[a];
      bessel += std::pow(oracle::inner_packet(v, p.scale, p.time, p.freq, K), 2);
      for (std::size_t b = a + 1; b < selected.size(); ++b) {
        const auto& q = selected[b];
        if (p == q) continue;
        double ip = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
          ip += oracle::packet(p.scale, p.time, p.freq, i, K) * oracle::packet(q.scale, q.time, q.freq, i, K);
        }
        REQUIRE(std::abs(ip) / double(v.size()) <= 1e-10);
      }
    }
    const double norm_sq = f.l2_norm() * f.l2_norm();
    CHECK(bessel <= norm_sq * (1 + 1e-12));
    CHECK(cert.tree_top_length_sum <= 4.0 * norm_sq / (sigma * sigma) * (1 + 1e-12));
  }
}

TEST_CASE("tampered certificates fail verification") {
  std::mt19937_64 rng(53);
  const int K = 6;
  const auto seq = LacunarySequence::geometric(2.0, K);
  const DyadicFunction G(K, oracle::random_set(rng, K, 0.5));
  const auto N = random_choice(rng, K, seq);
  const auto P = enumerate_bitiles(K, seq);
  const auto cert = density_split(P, G, N, density(P, G, N));
  REQUIRE(verify_split(cert, G, G, N).holds());

  auto sum = cert;
  sum.tree_top_length_sum += 0.5;
  CHECK_FALSE(verify_split(sum, G, G, N).holds());

  REQUIRE_FALSE(cert.big.empty());
  auto moved = cert;
  const auto victim = *cert.big.begin();
  moved.big = cert.big.filter([&](const BiTile& p) { return p != victim; });
  moved.small = cert.small.united(TileCollection({victim}));
  CHECK_FALSE(verify_split(moved, G, G, N).holds());

  auto dropped = cert;
  dropped.trees.pop_back();
  CHECK_FALSE(verify_split(dropped, G, G, N).holds());
}

TEST_CASE("tree bound examples") {
  const int K = 4;
  const BiTile P{1, 0, 0};
  const auto f = wave_packet(P.lower(), K);
  const auto G = DyadicFunction::indicator(K, 0, 16);
  const auto N = ChoiceFunction::constant(K, 2);  // inside omega_u = [2, 4)

  const auto empty = tree_bound_check(Tree{TreeTop::from(P), {}}, f, G, G, N);
  CHECK(empty.form == 0.0);
  CHECK(empty.holds);

  const auto r = tree_bound_check(Tree{TreeTop::from(P), {P}}, f, G, G, N);
  // <f, w_l> = 1 and the pairing with g = 1 is the integral of w_l over I_P.
  CHECK(r.form == doctest::Approx(std::sqrt(0.5)));
  CHECK(r.density == doctest::Approx(1.0));
  CHECK(r.size == doctest::Approx(1.0));
  CHECK(r.top_length == 0.5);
  CHECK(r.ratio <= 8.0);
  CHECK(r.holds);

  CHECK_THROWS(tree_bound_check(Tree{TreeTop::from(P), {P}}, f, G * 2.0, G, N));
}

TEST_CASE("tree bound ratio is invariant under scaling f") {
  std::mt19937_64 rng(54);
  const int K = 6;
  const auto seq = LacunarySequence::geometric(2.0, K);
  const auto tiles = enumerate_bitiles(K, seq);
  for (int trial = 0; trial < 10; ++trial) {
    const DyadicFunction f(K, oracle::random_values(rng, K));
    const DyadicFunction G(K, oracle::random_set(rng, K, 0.6));
    const auto N = random_choice(rng, K, seq);
    const auto top = TreeTop::from(BiTile{1, trial % 2u, 0});
    Tree tree{top, {}};
    for (const auto& p : tiles) {
      if (below_top(p, top)) tree.members.push_back(p);
    }
    REQUIRE_FALSE(tree.members.empty());
    const auto g = sign_indicator(carleson_apply(f, N, TileCollection(tree.members)), G);
    const auto a = tree_bound_check(tree, f, g, G, N);
    const auto b = tree_bound_check(tree, f * 2.0, g, G, N);
    CHECK(b.form == doctest::Approx(2.0 * a.form).epsilon(1e-12));
    if (a.bound > 0.0) {
      CHECK(std::abs(a.ratio - b.ratio) <= 1e-12 * std::max(1.0, a.ratio));
      CHECK(a.ratio <= 8.0);
    }
  }
}

TEST_CASE("Carleson decomposition of W_0") {
  const int K = 6;
  const auto seq = LacunarySequence::geometric(2.0, K);
  const auto tiles = enumerate_bitiles(K, seq);
  const auto f = walsh_function(0, K);
  const auto G = DyadicFunction::indicator(K, 0, 64);
  const auto N = ChoiceFunction::constant(K, seq.front());
  const auto g = sign_indicator(carleson_apply(f, N, tiles), G);
  const auto d = carleson_decomposition(tiles, f, g, G, N);
  CHECK(d.partition_exact);
  CHECK(d.total_form == doctest::Approx(1.0));
  CHECK(std::isfinite(d.total_bound));
  CHECK(d.total_bound >= d.total_form);
  CHECK(d.holds);

  const auto none = carleson_decomposition(TileCollection{}, f, g, G, N);
  CHECK(none.levels.empty());
  CHECK(none.total_form == 0.0);
}

TEST_CASE("random Carleson decompositions partition the collection") {
  std::mt19937_64 rng(55);
  const int K = 6;
  for (int trial = 0; trial < 6; ++trial) {
    const auto seq = LacunarySequence::geometric(1.6 + 0.2 * trial, K);
    const auto tiles = random_subset(rng, enumerate_bitiles(K, seq), 0.8);
    const DyadicFunction f(K, oracle::random_values(rng, K));
    const DyadicFunction G(K, oracle::random_set(rng, K, 0.7));
    const auto N = random_choice(rng, K, seq);
    const auto g = sign_indicator(carleson_apply(f, N, tiles), G);
    const auto d = carleson_decomposition(tiles, f, g, G, N);
    std::size_t count = 0;
    TileCollection seen;
    for (const auto& level : d.levels) {
      count += level.tiles.size();
      seen = seen.united(level.tiles);
      CHECK(level.facts_hold);
      std::size_t in_trees = 0;
      for (const auto& t : level.trees) in_trees += t.members.size();
      CHECK(in_trees == level.tiles.size());
    }
    CHECK(count == tiles.size());
    CHECK(seen.size() == tiles.size());
    CHECK(d.partition_exact);
    CHECK(std::abs(d.total_form - std::abs(bilinear_form(tiles, f, g, N))) <= 1e-10);
    CHECK(d.holds);
  }
}

TEST_CASE("effective bound level count") {
  const int K = 6;
  const auto seq = LacunarySequence::geometric(2.0, K);
  const auto G = DyadicFunction::indicator(K, 0, 64);
  std::vector<std::uint64_t> spread(64);
  for (std::size_t i = 0; i < spread.size(); ++i) spread[i] = seq[i % seq.count()];
  const ChoiceFunction N(K, spread);
  const DensityField field(G, N);
  const auto tiles = enumerate_bitiles(K, seq).filter([&](const BiTile& p) { return field.density(p) <= 0.25; });
  REQUIRE_FALSE(tiles.empty());
  const auto f = walsh_function(0, K);

  const auto r = effective_bound(tiles, f, G, N, 0.25);
  CHECK(r.n0 == 2);
  CHECK_FALSE(r.degenerate);
  CHECK(r.holds);

  const auto d = effective_bound(tiles, f, G, N, 1.0);
  CHECK(d.degenerate);
  CHECK(d.second_branch >= d.first_branch);
  CHECK(d.min_bound == d.first_branch);

  CHECK_THROWS(effective_bound(enumerate_bitiles(K, seq), f, G, ChoiceFunction::constant(K, 1), 0.25));
}

TEST_CASE("random effective bounds") {
  std::mt19937_64 rng(56);
  const int K = 6;
  for (int trial = 0; trial < 6; ++trial) {
    const auto seq = LacunarySequence::geometric(2.0, K);
    const auto tiles = random_subset(rng, enumerate_bitiles(K, seq), 0.7);
    const DyadicFunction f(K, oracle::random_values(rng, K));
    const DyadicFunction G(K, oracle::random_set(rng, K, 0.5));
    const auto N = random_choice(rng, K, seq);
    const double delta = density(tiles, G, N);
    if (delta == 0.0) continue;
    const auto r = effective_bound(tiles, f, G, N, delta);
    CHECK(r.n0 == (r.degenerate ? 0 : int(std::floor(-std::log2(delta * std::pow(f.l2_norm(), 2) / G.support_measure())))));
    CHECK(r.ratio <= 32.0);
    CHECK(r.holds);
  }
}

TEST_CASE("maximal tree cover") {
  const int K = 5;
  const auto tiles = enumerate_bitiles(K, LacunarySequence::geometric(2.0, K));
  const auto cover = maximal_tree_cover(tiles);
  std::size_t members = 0;
  for (const auto& t : cover) {
    CHECK(t.members_below_top());
    members += t.members.size();
    const BiTile top{t.top.scale, t.top.time, t.top.freq};
    for (const auto& p : tiles) CHECK_FALSE(bitile_less(top, p));
  }
  CHECK(members == tiles.size());
}
