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

#include "walsh/tf_algorithm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "walsh/size_index.hpp"

namespace walsh {

namespace {

constexpr double kRel = 1e-12;

// First T in `tops` (scanned coarsest scale first) with p <= T.
const BiTile* first_above(const std::set<BiTile>& tops, const BiTile& p) {
  for (int s = 0; s <= p.scale; ++s) {
    const std::uint64_t m = p.time >> (p.scale - s);
    const std::uint64_t lo = p.freq << (p.scale - s);
    const std::uint64_t hi = (p.freq + 1) << (p.scale - s);
    auto it = tops.lower_bound(BiTile{s, m, lo});
    if (it != tops.end() && it->scale == s && it->time == m && it->freq < hi) return &*it;
  }
  return nullptr;
}

double length_sum(const std::vector<Tree>& trees) {
  double total = 0.0;
  for (const auto& t : trees) total += t.top_length();
  return total;
}

struct Packet {
  Tile tile;
  double coefficient;
};

std::vector<Packet> eligible_packets(const std::vector<Tree>& trees, const CoefficientTable& coeffs) {
  std::vector<Packet> out;
  for (const auto& t : trees) {
    for (const auto& p : t.size_eligible()) out.push_back({p.lower(), coeffs(p.lower())});
  }
  return out;
}

// |<w_p, w_q>| for distinct tiles is 0 when they are disjoint and
// (|I_small| / |I_large|)^{1/2} when they intersect.
double max_cross_inner(const std::vector<Packet>& packets) {
  double worst = 0.0;
  for (std::size_t a = 0; a < packets.size(); ++a) {
    for (std::size_t b = a + 1; b < packets.size(); ++b) {
      const Tile& p = packets[a].tile;
      const Tile& q = packets[b].tile;
      if (p == q) {
        worst = std::max(worst, 1.0);
        continue;
      }
      if (rects_intersect(p.rect(), q.rect())) {
        worst = std::max(worst, std::sqrt(std::ldexp(1.0, -std::abs(p.scale - q.scale))));
      }
    }
  }
  return worst;
}

double bessel(const std::vector<Packet>& packets) {
  double total = 0.0;
  for (const auto& p : packets) total += p.coefficient * p.coefficient;
  return total;
}

// Each member goes to the first tree in `trees` whose top lies above it.
std::vector<Tree> partition_under(const std::vector<TreeTop>& tops, const TileCollection& members) {
  std::vector<Tree> trees;
  for (const auto& t : tops) trees.push_back({t, {}});
  for (const auto& p : members) {
    for (auto& t : trees) {
      if (below_top(p, t.top)) {
        t.members.push_back(p);
        break;
      }
    }
  }
  std::erase_if(trees, [](const Tree& t) { return t.members.empty(); });
  return trees;
}

std::string mismatch(const char* field, double claimed, double recomputed) {
  std::ostringstream os;
  os.precision(17);
  os << field << ": claimed " << claimed << ", recomputed " << recomputed;
  return os.str();
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace

const char* to_string(SplitKind kind) { return kind == SplitKind::density ? "density" : "size"; }

SplitCertificate density_split(const TileCollection& tiles, const DyadicFunction& G, const ChoiceFunction& N,
                               double delta, double C_dens) {
  return density_split(tiles, DensityField(G, N), delta, C_dens);
}

SplitCertificate density_split(const TileCollection& tiles, const DensityField& field, double delta,
                               double C_dens) {
  if (!(delta > 0.0)) throw std::invalid_argument("density split needs delta > 0");
  const double actual = field.density(tiles);
  if (!(actual > 0.0)) throw std::invalid_argument("density split needs dense(P) > 0");
  if (actual > delta * (1 + kRel)) throw std::invalid_argument("delta is below dense(P)");

  std::vector<BiTile> witnesses;
  for (const auto& p : tiles) field.witnesses_above(p, delta / 2, witnesses);
  std::sort(witnesses.begin(), witnesses.end());
  witnesses.erase(std::unique(witnesses.begin(), witnesses.end()), witnesses.end());

  // Scale-major order visits larger |I'| first; any witness not under an
  // earlier selection is disjoint from all of them.
  std::set<BiTile> selected;
  std::vector<BiTile> order;
  for (const auto& w : witnesses) {
    if (first_above(selected, w)) continue;
    selected.insert(w);
    order.push_back(w);
  }

  std::map<BiTile, std::size_t> index;
  SplitCertificate cert;
  cert.kind = SplitKind::density;
  cert.parameter = delta;
  cert.input = tiles;
  cert.constant = C_dens;
  for (const auto& w : order) {
    index[w] = cert.trees.size();
    cert.trees.push_back({TreeTop::from(w), {}});
  }
  std::vector<BiTile> big, small;
  for (const auto& p : tiles) {
    const BiTile* top = first_above(selected, p);
    if (top) {
      cert.trees[index[*top]].members.push_back(p);
      big.push_back(p);
    } else {
      small.push_back(p);
    }
  }
  cert.big = TileCollection(std::move(big));
  cert.small = TileCollection(std::move(small));
  cert.tree_top_length_sum = length_sum(cert.trees);
  cert.scale_measure = field.g_measure();
  cert.energy_unit = field.g_measure() / delta;
  cert.claimed_bound = C_dens * cert.energy_unit;
  cert.measured_ratio = cert.tree_top_length_sum / cert.energy_unit;
  cert.small_value = field.density(cert.small);
  cert.iterations = order.size();
  cert.holds = cert.measured_ratio <= C_dens && cert.small_value <= delta / 2 * (1 + kRel);
  return cert;
}

SplitCertificate size_split(const TileCollection& tiles, const DyadicFunction& f, double sigma, double C_size) {
  const double norm = f.l2_norm();
  return size_split(tiles, CoefficientTable(f), norm * norm, sigma, C_size);
}

SplitCertificate size_split(const TileCollection& tiles, const CoefficientTable& coeffs, double f_norm_sq,
                            double sigma, double C_size) {
  if (!(sigma > 0.0)) throw std::invalid_argument("size split needs sigma > 0");
  SizeIndex index(tiles, coeffs);
  const double actual = index.sup().size;
  if (!(actual > 0.0)) throw std::invalid_argument("size split needs size_f(P) > 0");
  if (actual > sigma * (1 + kRel)) throw std::invalid_argument("sigma is below size_f(P)");

  SplitCertificate cert;
  cert.kind = SplitKind::size;
  cert.parameter = sigma;
  cert.input = tiles;
  cert.constant = C_size;

  const double level = sigma * sigma / 4;
  index.track_above(level);
  std::vector<BiTile> big;
  while (index.any_tracked()) {
    const TreeTop top = index.first_tracked();
    const double exact = index.recompute(top);
    if (!(exact > level)) {
      index.reset(top, exact);
      continue;
    }
    if (++cert.iterations > tiles.size()) throw std::logic_error("size split failed to terminate");
    Tree tree{top, index.members_below(top)};
    for (const auto& p : tree.members) {
      index.remove(p);
      big.push_back(p);
    }
    cert.trees.push_back(std::move(tree));
  }
  cert.big = TileCollection(std::move(big));
  cert.small = tiles.minus(cert.big);
  cert.tree_top_length_sum = length_sum(cert.trees);
  cert.scale_measure = f_norm_sq;
  cert.energy_unit = f_norm_sq / (sigma * sigma);
  cert.claimed_bound = C_size * cert.energy_unit;
  cert.measured_ratio = cert.energy_unit > 0.0 ? cert.tree_top_length_sum / cert.energy_unit
                                               : std::numeric_limits<double>::infinity();
  cert.small_value = size(cert.small, coeffs);
  const auto packets = eligible_packets(cert.trees, coeffs);
  cert.bessel_sum = bessel(packets);
  cert.max_cross_inner = max_cross_inner(packets);
  cert.holds = cert.measured_ratio <= C_size && cert.small_value <= sigma / 2 * (1 + kRel) &&
               cert.bessel_sum <= f_norm_sq * (1 + 1e-10) && cert.max_cross_inner <= 1e-10;
  return cert;
}

CertificateCheck verify_split(const SplitCertificate& cert, const DyadicFunction& f, const DyadicFunction& G,
                              const ChoiceFunction& N) {
  CertificateCheck c;
  const auto joined = cert.small.united(cert.big);
  c.partition_exact = joined.bitiles() == cert.input.bitiles() &&
                      cert.small.size() + cert.big.size() == cert.input.size();
  if (!c.partition_exact) c.failures.push_back("small and big do not partition the input");

  std::set<BiTile> covered;
  bool below = true;
  for (const auto& t : cert.trees) {
    below = below && t.members_below_top();
    covered.insert(t.members.begin(), t.members.end());
  }
  c.trees_cover_big = below && std::equal(covered.begin(), covered.end(), cert.big.begin(), cert.big.end());
  if (!c.trees_cover_big) c.failures.push_back("certificate trees do not cover big exactly");

  c.recomputed_length_sum = length_sum(cert.trees);
  c.length_sum_matches = close(c.recomputed_length_sum, cert.tree_top_length_sum);
  if (!c.length_sum_matches) {
    c.failures.push_back(mismatch("tree_top_length_sum", cert.tree_top_length_sum, c.recomputed_length_sum));
  }

  double unit = 0.0;
  if (cert.kind == SplitKind::density) {
    const DensityField field(G, N);
    c.recomputed_small_value = field.density(cert.small);
    c.small_bound_holds = c.recomputed_small_value <= cert.parameter / 2 * (1 + kRel);
    unit = field.g_measure() / cert.parameter;
    const double input_density = field.density(cert.input);
    if (input_density > cert.parameter * (1 + kRel)) {
      c.failures.push_back(mismatch("parameter below dense(P)", cert.parameter, input_density));
    }
  } else {
    const CoefficientTable coeffs(f);
    c.recomputed_small_value = size(cert.small, coeffs);
    c.small_bound_holds = c.recomputed_small_value <= cert.parameter / 2 * (1 + kRel);
    const double norm_sq = f.l2_norm() * f.l2_norm();
    unit = norm_sq / (cert.parameter * cert.parameter);
    const auto packets = eligible_packets(cert.trees, coeffs);
    c.recomputed_bessel_sum = bessel(packets);
    const double cross = max_cross_inner(packets);
    c.orthogonality_holds = cross <= 1e-10 && c.recomputed_bessel_sum <= norm_sq * (1 + 1e-10);
    if (!c.orthogonality_holds) c.failures.push_back(mismatch("selected packets not orthogonal", 0.0, cross));
    if (!close(c.recomputed_bessel_sum, cert.bessel_sum)) {
      c.failures.push_back(mismatch("bessel_sum", cert.bessel_sum, c.recomputed_bessel_sum));
    }
    const double input_size = size(cert.input, coeffs);
    if (input_size > cert.parameter * (1 + kRel)) {
      c.failures.push_back(mismatch("parameter below size_f(P)", cert.parameter, input_size));
    }
  }
  if (!c.small_bound_holds) {
    c.failures.push_back(mismatch("small part exceeds half the parameter", cert.parameter / 2,
                                  c.recomputed_small_value));
  }
  if (!close(c.recomputed_small_value, cert.small_value)) {
    c.failures.push_back(mismatch("small_value", cert.small_value, c.recomputed_small_value));
  }
  c.recomputed_ratio = unit > 0.0 ? c.recomputed_length_sum / unit : std::numeric_limits<double>::infinity();
  c.ratio_within_constant = c.recomputed_ratio <= cert.constant;
  if (!c.ratio_within_constant) {
    c.failures.push_back(mismatch("ratio exceeds constant", cert.constant, c.recomputed_ratio));
  }
  if (!close(c.recomputed_ratio, cert.measured_ratio)) {
    c.failures.push_back(mismatch("measured_ratio", cert.measured_ratio, c.recomputed_ratio));
  }
  if (!close(unit * cert.constant, cert.claimed_bound)) {
    c.failures.push_back(mismatch("claimed_bound", cert.claimed_bound, unit * cert.constant));
  }
  return c;
}

TreeBoundReport tree_bound_check(const Tree& tree, const DyadicFunction& f, const DyadicFunction& g,
                                 const DyadicFunction& G, const ChoiceFunction& N, double C_tree) {
  if (!g.dominated_by(G)) throw std::invalid_argument("g must satisfy |g| <= 1_G");
  if (!tree.members_below_top()) throw std::invalid_argument("tree members must lie below the top");
  TreeBoundReport r;
  r.constant = C_tree;
  r.top_length = tree.top_length();
  const TileCollection members(tree.members);
  if (members.empty()) {
    r.holds = true;
    return r;
  }
  const CoefficientTable coeffs(f);
  r.form = std::abs(bilinear_form(members, coeffs, g, N));
  r.density = density(members, G, N);
  r.size = size(members, coeffs);
  r.bound = r.density * r.size * r.top_length;
  if (r.bound > 0.0) {
    r.ratio = r.form / r.bound;
  } else {
    r.ratio = r.form == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  r.holds = r.ratio <= C_tree;
  return r;
}

std::vector<Tree> maximal_tree_cover(const TileCollection& tiles) {
  std::set<BiTile> all(tiles.begin(), tiles.end());
  std::set<BiTile> maximal;
  for (const auto& p : tiles) {
    // p is maximal when the first member above it is itself.
    const BiTile* top = first_above(all, p);
    if (top && *top == p) maximal.insert(p);
  }
  std::map<BiTile, std::vector<BiTile>> groups;
  for (const auto& p : tiles) groups[*first_above(maximal, p)].push_back(p);
  std::vector<Tree> trees;
  for (auto& [top, members] : groups) trees.push_back({TreeTop::from(top), std::move(members)});
  return trees;
}

std::vector<Level> density_levels(const TileCollection& tiles, const DensityField& field) {
  std::vector<Level> levels;
  TileCollection remaining = tiles;
  const int limit = 2 * field.resolution() + 8;
  for (int k = 0; !remaining.empty() && k <= limit; ++k) {
    const double d = field.density(remaining);
    if (d == 0.0) break;
    const double delta = std::ldexp(1.0, -k);
    if (d <= delta / 2) continue;
    auto split = density_split(remaining, field, delta);
    Level level;
    level.n = k;
    level.tiles = split.big;
    level.trees = std::move(split.trees);
    level.density = field.density(level.tiles);
    level.energy = split.tree_top_length_sum;
    level.facts_hold = split.holds && level.density <= delta * (1 + kRel);
    levels.push_back(std::move(level));
    remaining = split.small;
  }
  if (!remaining.empty()) {
    Level rest;
    rest.n = limit + 1;
    rest.residual = true;
    rest.tiles = remaining;
    rest.trees = maximal_tree_cover(remaining);
    rest.density = field.density(remaining);
    rest.energy = length_sum(rest.trees);
    rest.facts_hold = rest.density == 0.0;
    levels.push_back(std::move(rest));
  }
  return levels;
}

LevelDecomposition carleson_decomposition(const TileCollection& tiles, const DyadicFunction& f,
                                          const DyadicFunction& g, const DyadicFunction& G,
                                          const ChoiceFunction& N, double C_tree) {
  if (!g.dominated_by(G)) throw std::invalid_argument("g must satisfy |g| <= 1_G");
  LevelDecomposition out;
  out.f_norm = f.l2_norm();
  out.g_measure = G.support_measure();
  const CoefficientTable raw(f);
  out.total_form = std::abs(bilinear_form(tiles, raw, g, N));
  if (tiles.empty() || out.f_norm == 0.0) {
    out.partition_exact = true;
    out.holds = out.total_form == 0.0;
    if (!tiles.empty()) {
      Level rest;
      rest.residual = true;
      rest.tiles = tiles;
      rest.facts_hold = true;
      out.levels.push_back(std::move(rest));
    }
    return out;
  }

  const CoefficientTable coeffs(f * (1.0 / out.f_norm));
  const DensityField field(G, N);
  const int limit = 2 * f.resolution() + 8;
  const double inf = std::numeric_limits<double>::infinity();

  TileCollection remaining = tiles;
  const double d0 = field.density(remaining);
  const double s0 = size(remaining, coeffs);
  const double start = std::min(d0 > 0.0 ? -std::log2(d0) : inf, s0 > 0.0 ? -2.0 * std::log2(s0) : inf);
  bool all_ok = true;
  if (std::isfinite(start)) {
    for (int n = static_cast<int>(std::floor(start)); !remaining.empty() && n <= limit; ++n) {
      Level level;
      level.n = n;
      const double delta = std::ldexp(1.0, -n);
      const double sigma = std::sqrt(delta);
      std::vector<BiTile> big;
      const double d = field.density(remaining);
      if (d > delta / 2) {
        auto split = density_split(remaining, field, std::max(delta, d));
        all_ok = all_ok && split.holds;
        big.insert(big.end(), split.big.begin(), split.big.end());
        for (auto& t : split.trees) level.trees.push_back(std::move(t));
        remaining = split.small;
      }
      const double s = size(remaining, coeffs);
      if (s > sigma / 2) {
        auto split = size_split(remaining, coeffs, 1.0, sigma);
        all_ok = all_ok && split.holds;
        big.insert(big.end(), split.big.begin(), split.big.end());
        for (auto& t : split.trees) level.trees.push_back(std::move(t));
        remaining = split.small;
      }
      if (big.empty()) continue;
      level.tiles = TileCollection(std::move(big));
      level.density = field.density(level.tiles);
      level.size = size(level.tiles, coeffs);
      level.energy = length_sum(level.trees);
      level.form = std::abs(bilinear_form(level.tiles, raw, g, N));
      const double dense_bound = std::min(1.0, delta);
      level.level_bound = C_tree * dense_bound * sigma * level.energy * out.f_norm;
      level.schematic = std::min(std::sqrt(std::ldexp(1.0, n)), sigma);
      level.facts_hold = level.density <= dense_bound * (1 + kRel) && level.size <= sigma * (1 + kRel) &&
                         level.energy <= (2 * out.g_measure + 4) * std::ldexp(1.0, n) * (1 + kRel);
      out.levels.push_back(std::move(level));
    }
  }
  if (!remaining.empty()) {
    Level rest;
    rest.n = limit + 1;
    rest.residual = true;
    rest.tiles = remaining;
    rest.trees = maximal_tree_cover(remaining);
    rest.density = field.density(remaining);
    rest.size = size(remaining, coeffs);
    rest.energy = length_sum(rest.trees);
    rest.form = std::abs(bilinear_form(remaining, raw, g, N));
    rest.level_bound = C_tree * rest.density * rest.size * rest.energy * out.f_norm;
    rest.facts_hold = true;
    out.levels.push_back(std::move(rest));
  }

  std::vector<BiTile> joined;
  for (const auto& level : out.levels) {
    joined.insert(joined.end(), level.tiles.begin(), level.tiles.end());
    out.total_bound += level.level_bound;
    all_ok = all_ok && level.facts_hold;
  }
  out.partition_exact = joined.size() == tiles.size() && TileCollection(joined).bitiles() == tiles.bitiles();
  out.holds = all_ok && out.partition_exact && out.total_form <= out.total_bound * (1 + 1e-9) + 1e-15;
  return out;
}

EffectiveBoundReport effective_bound(const TileCollection& tiles, const DyadicFunction& f, const DyadicFunction& G,
                                     const ChoiceFunction& N, double delta, const std::optional<DyadicFunction>& g,
                                     const Constants& constants) {
  if (!(delta > 0.0)) throw std::invalid_argument("effective bound needs delta > 0");
  EffectiveBoundReport r;
  r.delta = delta;
  r.constant = constants.C_eff;
  const DensityField field(G, N);
  r.density = field.density(tiles);
  if (r.density > delta * (1 + kRel)) throw std::invalid_argument("delta is below dense(P)");
  r.f_norm = f.l2_norm();
  r.g_measure = field.g_measure();

  const CoefficientTable raw(f);
  r.size = size(tiles, raw);
  DyadicFunction gg = g ? *g : DyadicFunction(f.resolution());
  if (!g) {
    const auto cf = carleson_apply(raw, N, tiles);
    for (std::size_t i = 0; i < gg.size(); ++i) {
      if (G[i] != 0.0 && cf[i] != 0.0) gg.set(i, cf[i] > 0 ? 1.0 : -1.0);
    }
  }
  if (!gg.dominated_by(G)) throw std::invalid_argument("g must satisfy |g| <= 1_G");
  r.form = std::abs(bilinear_form(tiles, raw, gg, N));

  const std::vector<Tree> cover = tiles.certificate() ? *tiles.certificate() : maximal_tree_cover(tiles);
  r.basic_length_sum = length_sum(cover);
  r.basic_bound = r.g_measure > 0.0 ? constants.C_dens * r.g_measure / delta : 0.0;
  r.basic_assumption_holds = r.basic_length_sum <= r.basic_bound * (1 + kRel);

  r.first_branch = r.size * r.g_measure;
  r.second_branch = std::sqrt(delta * r.g_measure) * r.f_norm;
  const double x = r.g_measure > 0.0 ? delta * r.f_norm * r.f_norm / r.g_measure : 1.0;
  r.degenerate = !(x < 1.0);
  r.n0 = r.degenerate ? 0 : static_cast<int>(std::floor(-std::log2(x)));
  r.min_bound = r.degenerate ? r.first_branch : std::min(r.first_branch, r.second_branch);

  if (!r.degenerate && r.f_norm > 0.0 && !tiles.empty()) {
    const CoefficientTable coeffs(f * (1.0 / r.f_norm));
    std::vector<TreeTop> cover_tops;
    for (const auto& t : cover) cover_tops.push_back(t.top);
    TileCollection remaining = tiles;
    const double s0 = size(remaining, coeffs);
    const int start = s0 > 0.0 ? static_cast<int>(std::floor(-2.0 * std::log2(s0))) : r.n0;
    for (int n = std::min(start, r.n0); n <= r.n0 && !remaining.empty(); ++n) {
      Level level;
      level.n = n;
      const double sigma = std::sqrt(std::ldexp(1.0, -n));
      if (n < r.n0) {
        const double s = size(remaining, coeffs);
        if (!(s > sigma / 2)) continue;
        auto split = size_split(remaining, coeffs, 1.0, sigma, constants.C_size);
        level.tiles = split.big;
        level.trees = std::move(split.trees);
        remaining = split.small;
      } else {
        level.tiles = remaining;
        level.trees = partition_under(cover_tops, remaining);
        remaining = TileCollection();
      }
      level.density = field.density(level.tiles);
      level.size = size(level.tiles, coeffs);
      level.energy = length_sum(level.trees);
      level.form = std::abs(bilinear_form(level.tiles, raw, gg, N));
      level.level_bound = constants.C_tree * delta * sigma * level.energy * r.f_norm;
      level.schematic = delta * std::sqrt(std::ldexp(1.0, n));
      r.series += level.schematic * r.f_norm;
      level.facts_hold = level.density <= delta * (1 + kRel) && level.size <= sigma * (1 + kRel);
      r.levels.push_back(std::move(level));
    }
  }
  if (r.min_bound > 0.0) {
    r.ratio = r.form / r.min_bound;
  } else {
    r.ratio = r.form == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  r.holds = r.basic_assumption_holds && r.ratio <= constants.C_eff;
  return r;
}

}  // namespace walsh
