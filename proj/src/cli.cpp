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

#include "walsh/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "walsh/certificate_io.hpp"
#include "walsh/estimates.hpp"
#include "walsh/multifreq.hpp"
#include "walsh/orlicz.hpp"
#include "walsh/walsh.hpp"

namespace walsh {

namespace {

using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Configuration.

struct ConstantSlot {
  std::string_view name;
  double Constants::*field;
};

constexpr ConstantSlot kConstantSlots[] = {
    {"C_dens", &Constants::C_dens}, {"C_size", &Constants::C_size},   {"C_tree", &Constants::C_tree},
    {"C_eff", &Constants::C_eff},   {"C_upper", &Constants::C_upper}, {"C_rw", &Constants::C_rw},
    {"C_dist", &Constants::C_dist}, {"C_fac", &Constants::C_fac},     {"C_phi", &Constants::C_phi},
    {"C_k", &Constants::C_k},       {"C_0", &Constants::C_0},         {"C_khin", &Constants::C_khin},
    {"C_growth", &Constants::C_growth}};

double* constant_slot(Constants& c, std::string_view name) {
  for (const auto& slot : kConstantSlots) {
    if (slot.name == name) return &(c.*slot.field);
  }
  return nullptr;
}

void parse_m_range(RunConfig& config, std::string_view text) {
  const auto dots = text.find("..");
  try {
    std::size_t used = 0;
    const std::string a(text.substr(0, dots));
    config.m_min = std::stoi(a, &used);
    if (used != a.size()) throw std::invalid_argument(a);
    if (dots == std::string_view::npos) {
      config.m_max = config.m_min;
    } else {
      const std::string b(text.substr(dots + 2));
      config.m_max = std::stoi(b, &used);
      if (used != b.size()) throw std::invalid_argument(b);
    }
  } catch (const std::exception&) {
    throw ConfigError("m-range: expected 'a..b' or 'a', got '" + std::string(text) + "'");
  }
}

std::vector<std::uint64_t> parse_list(std::string_view text) {
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const std::string item(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    try {
      std::size_t used = 0;
      if (!item.empty() && item[0] == '-') throw std::invalid_argument(item);
      out.push_back(std::stoull(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("lacunary-list: '" + item + "' is not a non-negative integer");
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::int64_t json_int(const ordered_json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ConfigError(where + ": expected an integer");
  return v.get<std::int64_t>();
}

double json_number(const ordered_json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where + ": expected a number");
  return v.get<double>();
}

std::string json_string(const ordered_json& v, const std::string& where) {
  if (!v.is_string()) throw ConfigError(where + ": expected a string");
  return v.get<std::string>();
}

// ---------------------------------------------------------------------------
// Worker pool and per-point randomness.

template <class T, class Fn>
std::vector<T> parallel_map(std::size_t count, unsigned jobs, Fn&& fn) {
  std::vector<T> out(count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  const unsigned n = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, jobs), count));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  return out;
}

std::mt19937_64 point_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

DyadicFunction random_function(int K, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(std::size_t{1} << K);
  for (auto& x : v) x = u(rng);
  return DyadicFunction(K, std::move(v));
}

DyadicFunction random_set(int K, std::mt19937_64& rng, double p) {
  std::bernoulli_distribution b(p);
  std::vector<double> v(std::size_t{1} << K);
  for (auto& x : v) x = b(rng) ? 1.0 : 0.0;
  return DyadicFunction(K, std::move(v));
}

ChoiceFunction random_choice(int K, const LacunarySequence& seq, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, seq.count() - 1);
  std::vector<std::uint64_t> v(std::size_t{1} << K);
  for (auto& n : v) n = seq[pick(rng)];
  return ChoiceFunction(K, std::move(v));
}

DyadicFunction initial_interval(int K, int m) {
  return DyadicFunction::indicator(K, 0, std::size_t{1} << (K - m));
}

// ---------------------------------------------------------------------------
// Report helpers.

std::string num(double v) { return format_number(v); }
std::string num(std::uint64_t v) { return std::to_string(v); }
std::string num(int v) { return std::to_string(v); }
std::string flag(bool b) { return b ? "true" : "false"; }

Table summary_table() {
  return {"summary", {"experiment", "K", "m", "seq_ratio", "measured", "bound", "ratio", "pass"}, {}};
}

void summary_row(Table& t, const std::string& experiment, int K, const std::string& m, double seq_ratio,
                 double measured, double bound, double ratio, bool pass) {
  t.add_row({experiment, num(K), m, num(seq_ratio), num(measured), num(bound), num(ratio), flag(pass)});
}

std::vector<int> m_grid(const RunConfig& c) {
  std::vector<int> ms;
  for (int m = c.m_min; m <= c.m_max; ++m) ms.push_back(m);
  return ms;
}

/// max over the family divided by the value at m = 4 (or the first m).
double growth_factor(const std::vector<int>& ms, const std::vector<double>& values) {
  const auto it = std::find(ms.begin(), ms.end(), 4);
  const double ref = values[it == ms.end() ? 0 : static_cast<std::size_t>(it - ms.begin())];
  const double top = *std::max_element(values.begin(), values.end());
  return ref > 0.0 ? top / ref : (top > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
}

NStrategy parse_strategy(std::string_view s) {
  if (s == "argmax") return NStrategy::argmax;
  if (s == "first_term") return NStrategy::first_term;
  if (s == "last_term") return NStrategy::last_term;
  throw ConfigError("n_strategy: expected argmax, first_term or last_term, got '" + std::string(s) + "'");
}

DyadicFunction load_input(const RunConfig& c) {
  auto f = parse_dyadic_function(read_file(c.input));
  if (f.resolution() != c.resolution) {
    throw ResolutionMismatch("input: resolution " + std::to_string(f.resolution()) + " differs from K = " +
                             std::to_string(c.resolution));
  }
  return f;
}

// ---------------------------------------------------------------------------
// Experiments.

void run_transform(const RunConfig& c, ExperimentReport& r) {
  const int K = c.resolution;
  auto rng = point_rng(c.seed, 0);
  const auto f = c.input.empty() ? random_function(K, rng) : load_input(c);
  const auto coeffs = walsh_transform(f);
  const auto back = inverse_walsh_transform(coeffs, K);
  double roundtrip = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) roundtrip = std::max(roundtrip, std::abs(back[i] - f[i]));
  double energy = 0.0;
  for (double a : coeffs) energy += a * a;
  const double norm_sq = f.l2_norm() * f.l2_norm();
  const double parseval = std::abs(energy - norm_sq);

  Table t{"coefficients", {"n", "coefficient"}, {}};
  for (std::size_t n = 0; n < coeffs.size(); ++n) t.add_row({num(static_cast<std::uint64_t>(n)), num(coeffs[n])});
  Table s{"summary", {"K", "roundtrip_error", "parseval_error", "l2_norm_sq"}, {}};
  s.add_row({num(K), num(roundtrip), num(parseval), num(norm_sq)});
  r.tables = {std::move(s), std::move(t)};
  r.check("roundtrip_error", roundtrip, 1e-12);
  r.check("parseval_error", parseval, 1e-12 * std::max(1.0, norm_sq));
}

void run_carleson_identity(const RunConfig& c, const LacunarySequence& seq, ExperimentReport& r) {
  const int K = c.resolution;
  const auto tiles = enumerate_bitiles(K, seq);
  const auto errors = parallel_map<double>(c.trials, c.jobs, [&](std::size_t i) {
    auto rng = point_rng(c.seed, i);
    const auto f = random_function(K, rng);
    const auto N = random_choice(K, seq, rng);
    const auto fast = carleson_apply(f, N, tiles);
    const auto coeffs = walsh_transform(f);
    std::map<std::uint64_t, DyadicFunction> sums;
    double err = 0.0;
    for (std::size_t x = 0; x < f.size(); ++x) {
      auto it = sums.find(N[x]);
      if (it == sums.end()) it = sums.emplace(N[x], partial_sum_from_coefficients(coeffs, N[x], K)).first;
      err = std::max(err, std::abs(fast[x] - it->second[x]));
    }
    return err;
  });
  Table t{"trials", {"trial", "max_pointwise_error"}, {}};
  double worst = 0.0;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    t.add_row({num(static_cast<std::uint64_t>(i)), num(errors[i])});
    worst = std::max(worst, errors[i]);
  }
  r.parameter("tiles", std::to_string(tiles.size()));
  r.tables = {std::move(t)};
  r.check("max_pointwise_error", worst, 1e-9);
}

void run_decompose(const RunConfig& c, const LacunarySequence& seq, ExperimentReport& r) {
  const int K = c.resolution;
  const auto& k = c.constants;
  auto rng = point_rng(c.seed, 0);
  const auto f = c.input.empty() ? random_function(K, rng) : load_input(c);
  const auto G = random_set(K, rng, 0.5);
  const auto N = lacunary_maximal(f, seq).argmax;
  const auto tiles = enumerate_bitiles(K, seq);
  const auto cf = carleson_apply(f, N, tiles);
  DyadicFunction g(K);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (G[i] != 0.0 && cf[i] != 0.0) g.set(i, cf[i] > 0.0 ? 1.0 : -1.0);
  }
  r.parameter("tiles", std::to_string(tiles.size()));
  r.parameter("G_measure", num(G.integral()));

  Table certs{"certificates",
              {"kind", "parameter", "input", "small", "big", "trees", "length_sum", "energy_unit", "ratio", "constant",
               "small_value", "bessel_sum", "max_cross_inner", "verified"},
              {}};
  const double dens = density(tiles, G, N);
  const double sz = size(tiles, f);
  for (auto kind : {SplitKind::density, SplitKind::size}) {
    const bool is_density = kind == SplitKind::density;
    if ((is_density ? dens : sz) <= 0.0) continue;
    const auto cert = is_density ? density_split(tiles, G, N, dens, k.C_dens) : size_split(tiles, f, sz, k.C_size);
    const auto check = verify_split(cert, f, G, N);
    certs.add_row({to_string(kind), num(cert.parameter), num(static_cast<std::uint64_t>(cert.input.size())),
                   num(static_cast<std::uint64_t>(cert.small.size())),
                   num(static_cast<std::uint64_t>(cert.big.size())), num(static_cast<std::uint64_t>(cert.trees.size())),
                   num(cert.tree_top_length_sum), num(cert.energy_unit), num(cert.measured_ratio), num(cert.constant),
                   num(cert.small_value), num(cert.bessel_sum), num(cert.max_cross_inner), flag(check.holds())});
    r.attachments.emplace_back(std::string("decompose_") + to_string(kind) + "_certificate",
                               certificate_to_json(cert, f, G, N));
    r.require(std::string(to_string(kind)) + "_certificate_verifies", check.holds());
    r.check(std::string(to_string(kind)) + "_ratio", cert.measured_ratio, cert.constant);
  }

  const auto dec = carleson_decomposition(tiles, f, g, G, N, k.C_tree);
  Table levels{"levels",
               {"n", "tiles", "trees", "density", "size", "energy", "form", "level_bound", "schematic", "residual",
                "facts_hold"},
               {}};
  for (const auto& L : dec.levels) {
    levels.add_row({num(L.n), num(static_cast<std::uint64_t>(L.tiles.size())),
                    num(static_cast<std::uint64_t>(L.trees.size())), num(L.density), num(L.size), num(L.energy),
                    num(L.form), num(L.level_bound), num(L.schematic), flag(L.residual), flag(L.facts_hold)});
  }
  r.require("decomposition_partition_exact", dec.partition_exact);
  r.check("decomposition_total_form", dec.total_form, dec.total_bound);
  r.require("decomposition_level_facts", dec.holds);

  Table trees{"trees", {"top", "members", "form", "density", "size", "top_length", "bound", "ratio"}, {}};
  double worst_tree = 0.0;
  for (const auto& L : dec.levels) {
    for (const auto& T : L.trees) {
      const auto tb = tree_bound_check(T, f, g, G, N, k.C_tree);
      worst_tree = std::max(worst_tree, tb.ratio);
      trees.add_row({T.top.to_string(), num(static_cast<std::uint64_t>(T.members.size())), num(tb.form),
                     num(tb.density), num(tb.size), num(tb.top_length), num(tb.bound), num(tb.ratio)});
    }
  }
  r.check("tree_ratio", worst_tree, k.C_tree);

  if (dens > 0.0) {
    const auto eff = effective_bound(tiles, f, G, N, dens, g, k);
    Table e{"effective_bound",
            {"delta", "n0", "degenerate", "form", "first_branch", "second_branch", "min_bound", "ratio"},
            {}};
    e.add_row({num(eff.delta), num(eff.n0), flag(eff.degenerate), num(eff.form), num(eff.first_branch),
               num(eff.second_branch), num(eff.min_bound), num(eff.ratio)});
    r.tables.push_back(std::move(e));
    r.check("effective_bound_ratio", eff.ratio, eff.constant);
  }
  r.tables.insert(r.tables.begin(), {std::move(certs), std::move(levels), std::move(trees)});
}

void run_zygmund(const RunConfig& c, const LacunarySequence& seq, ExperimentReport& r) {
  const int K = c.resolution;
  const auto ms = m_grid(c);
  const auto reports = parallel_map<ZygmundReport>(ms.size(), c.jobs, [&](std::size_t i) {
    return zygmund_ratio(initial_interval(K, ms[i]) * std::ldexp(1.0, ms[i]), seq);
  });
  std::vector<double> ratios;
  for (const auto& z : reports) ratios.push_back(z.ratio);
  const double growth = growth_factor(ms, ratios);
  Table t = summary_table();
  for (std::size_t i = 0; i < ms.size(); ++i) {
    summary_row(t, "zygmund", K, num(ms[i]), seq.ratio(), reports[i].lhs, reports[i].rhs, reports[i].ratio,
                growth <= c.constants.C_growth);
  }
  r.check("zygmund_growth", growth, c.constants.C_growth);

  auto rng = point_rng(c.seed, 0);
  std::normal_distribution<double> normal;
  std::vector<double> a(seq.count());
  for (auto& x : a) x = normal(rng);
  Table kt{"khintchine", {"p", "lp_norm", "l2_coefficients", "lp_ratio", "exp_ratio"}, {}};
  double worst = 0.0;
  for (int p = 2; p <= 10; p += 2) {
    const auto kr = khintchine_ratio(a, seq, p, K);
    kt.add_row({num(p), num(kr.lp_norm), num(kr.l2_coefficients), num(kr.lp_ratio), num(kr.exp_ratio)});
    worst = std::max({worst, kr.lp_ratio, kr.exp_ratio});
  }
  r.check("khintchine_ratio", worst, c.constants.C_khin);
  r.tables = {std::move(t), std::move(kt)};
}

void run_restricted_weak(const RunConfig& c, const LacunarySequence& seq, ExperimentReport& r) {
  const int K = c.resolution;
  const auto ms = m_grid(c);
  const auto strategy = parse_strategy(c.n_strategy);
  struct Point {
    RestrictedWeakReport rw;
    std::optional<MultifreqRun> mf;
  };
  const DyadicFunction G = initial_interval(K, 0);
  const auto points = parallel_map<Point>(ms.size(), c.jobs, [&](std::size_t i) {
    const auto F = initial_interval(K, ms[i]);
    Point p;
    p.rw = restricted_weak_experiment(F, G, seq, strategy, c.constants, true);
    if (!p.rw.l2_regime && p.rw.F_measure > 0.0) {
      p.mf = multifreq_experiment(F, G, seq, choose_N(F, seq, strategy), c.constants);
    }
    return p;
  });

  Table t = summary_table();
  Table levels{"levels", {"m", "K", "F", "G", "lambda", "k", "level_bound", "measured_form", "ratio"}, {}};
  Table intervals{"intervals", {"m", "interval", "I", "Q_I", "tail_ratio", "phi_norm"}, {}};
  std::vector<double> ratios;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto& rw = points[i].rw;
    ratios.push_back(rw.ratio);
    summary_row(t, rw.l2_regime ? "restricted-weak/l2" : "restricted-weak", K, num(ms[i]), seq.ratio(), rw.form,
                rw.bound, rw.ratio, rw.ratio <= rw.constant);
    r.check("restricted_weak_ratio_m" + std::to_string(ms[i]), rw.ratio, rw.constant);
    r.check("form_identity_gap_m" + std::to_string(ms[i]), rw.form_identity_gap, 1e-9);
    for (const auto& L : rw.levels) {
      levels.add_row({num(ms[i]), num(K), num(rw.F_measure), num(rw.G_measure), num(rw.lambda), num(L.k),
                      num(L.level_bound), num(L.measured_form), num(L.ratio)});
    }
    if (const auto& mf = points[i].mf) {
      for (const auto& lp : mf->locals) {
        intervals.add_row({num(ms[i]), lp.interval.to_string(), num(lp.interval.length()),
                           num(static_cast<std::uint64_t>(lp.tiles.size())), num(lp.tail_ratio), num(lp.phi_norm)});
      }
      r.require("multifreq_m" + std::to_string(ms[i]), mf->holds());
      r.check("phi_chain_m" + std::to_string(ms[i]), std::max(mf->chain.max_interval_ratio, mf->chain.total_ratio),
              mf->chain.constant);
      r.check("k0_tail_m" + std::to_string(ms[i]), mf->k0.ratio, 1.0);
    }
  }
  r.check("restricted_weak_growth", growth_factor(ms, ratios), c.constants.C_growth);
  r.tables = {std::move(t), std::move(levels), std::move(intervals)};
}

void run_strong_type(const RunConfig& c, const LacunarySequence& seq, ExperimentReport& r) {
  const int K = c.resolution;
  const auto ms = m_grid(c);
  const auto reports = parallel_map<StrongTypeReport>(ms.size(), c.jobs, [&](std::size_t i) {
    return strong_type_iteration(initial_interval(K, ms[i]), seq, std::nullopt, c.constants);
  });
  Table t = summary_table();
  Table steps{"steps", {"m", "t", "G_t", "G_prime_t", "form", "bound", "final", "halved"}, {}};
  std::vector<double> ratios;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto& s = reports[i];
    ratios.push_back(s.ratio);
    summary_row(t, "strong-type", K, num(ms[i]), seq.ratio(), s.l1_norm, s.bound, s.ratio, s.holds);
    for (const auto& st : s.table) {
      steps.add_row({num(ms[i]), num(st.t), num(st.G_measure), num(st.G_prime_measure), num(st.form), num(st.bound),
                     flag(st.final_step), flag(st.halved)});
    }
    const std::string tag = "_m" + std::to_string(ms[i]);
    r.require("t0_formula" + tag, s.t0 == 2 + ms[i] || ms[i] == 0);
    r.require("partition_exact" + tag, s.partition_exact);
    r.require("iteration" + tag, s.holds);
  }
  r.check("strong_type_growth", growth_factor(ms, ratios), c.constants.C_growth);
  r.tables = {std::move(t), std::move(steps)};
}

void run_distribution(const RunConfig& c, const LacunarySequence& seq, ExperimentReport& r) {
  const int K = c.resolution;
  const auto ms = m_grid(c);
  const auto reports = parallel_map<DistributionReport>(ms.size(), c.jobs, [&](std::size_t i) {
    const auto F = initial_interval(K, ms[i]);
    return distribution_curve(F, F.integral(), seq, c.constants.C_dist);
  });
  Table t = summary_table();
  r.tables.push_back({});
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto& d = reports[i];
    summary_row(t, "distribution", K, num(ms[i]), seq.ratio(), d.sup, d.constant, d.sup / d.constant, d.holds);
    Table curve{"curve_m" + std::to_string(ms[i]), {"t", "rearranged", "normalized"}, {}};
    for (const auto& p : d.curve) curve.add_row({num(p.t), num(p.rearranged), num(p.normalized)});
    r.tables.push_back(std::move(curve));
    r.check("distribution_sup_m" + std::to_string(ms[i]), d.sup, d.constant);
  }
  r.tables.front() = std::move(t);
}

void run_antonov(const RunConfig& c, ExperimentReport& r) {
  const int K = c.resolution;
  const int Kf = c.fine_resolution ? c.fine_resolution : std::min(K + 4, kMaxResolution);
  if (Kf <= K) throw ConfigError("fine_resolution: must exceed resolution " + std::to_string(K));
  r.parameter("fine_resolution", std::to_string(Kf));
  const auto reports = parallel_map<AntonovReport>(c.trials, c.jobs, [&](std::size_t i) {
    auto rng = point_rng(c.seed, i);
    const std::uint64_t steps = std::uint64_t{1} << (Kf - K);
    std::uniform_int_distribution<std::uint64_t> pick(0, steps);
    std::vector<double> v(std::size_t{1} << K);
    for (auto& x : v) x = std::ldexp(static_cast<double>(pick(rng)), -(Kf - K));
    const DyadicFunction f(K, std::move(v));
    return antonov_check(f, antonov_indicator(f, Kf));
  });
  Table t{"trials", {"trial", "max_partial_error", "mass_gap", "holds"}, {}};
  double worst = 0.0, gap = 0.0;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    t.add_row({num(static_cast<std::uint64_t>(i)), num(reports[i].max_partial_error), num(reports[i].mass_gap),
               flag(reports[i].holds)});
    worst = std::max(worst, reports[i].max_partial_error);
    gap = std::max(gap, reports[i].mass_gap);
  }
  r.check("max_partial_error", worst, 1e-12);
  r.check("mass_gap", gap, 0.0);
  r.tables = {std::move(t)};
}

void run_final_norms(const RunConfig& c, const LacunarySequence& seq, ExperimentReport& r) {
  const int K = c.resolution;
  const double C = c.constants.C_fac;
  Table t = summary_table();
  if (!c.input.empty()) {
    const auto f = load_input(c);
    const auto fn = final_norm_checks(f, seq, C);
    summary_row(t, "final-norms/weak", K, "", seq.ratio(), fn.weak_lhs, fn.weak_rhs, fn.weak_ratio, fn.weak_ratio <= C);
    summary_row(t, "final-norms/strong", K, "", seq.ratio(), fn.strong_lhs, fn.strong_rhs, fn.strong_ratio,
                fn.strong_ratio <= C);
    r.check("weak_ratio", fn.weak_ratio, C);
    r.check("strong_ratio", fn.strong_ratio, C);
    if (fn.atom) {
      summary_row(t, "final-norms/factorization", K, "", seq.ratio(), fn.factorization_sup, C,
                  fn.factorization_sup / C, fn.holds);
      r.check("factorization", fn.factorization_sup, C);
    }
    r.tables = {std::move(t)};
    return;
  }
  const auto ms = m_grid(c);
  struct Point {
    FinalNormReport spike;
    FinalNormReport atom;
  };
  const auto points = parallel_map<Point>(ms.size(), c.jobs, [&](std::size_t i) {
    const auto F = initial_interval(K, ms[i]);
    return Point{final_norm_checks(F * std::ldexp(1.0, ms[i]), seq, C), final_norm_checks(F, seq, C)};
  });
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto& s = points[i].spike;
    const auto& a = points[i].atom;
    const std::string m = num(ms[i]);
    summary_row(t, "final-norms/weak", K, m, seq.ratio(), s.weak_lhs, s.weak_rhs, s.weak_ratio, s.weak_ratio <= C);
    summary_row(t, "final-norms/strong", K, m, seq.ratio(), s.strong_lhs, s.strong_rhs, s.strong_ratio,
                s.strong_ratio <= C);
    summary_row(t, "final-norms/factorization", K, m, seq.ratio(), a.factorization_sup, C, a.factorization_sup / C,
                a.holds);
    r.check("weak_ratio_m" + m, s.weak_ratio, C);
    r.check("strong_ratio_m" + m, s.strong_ratio, C);
    r.check("factorization_m" + m, a.factorization_sup, C);
  }
  r.tables = {std::move(t)};
}

void run_verify_certificate(const RunConfig& c, ExperimentReport& r, std::ostream& log) {
  const auto stored = parse_certificate(read_file(c.certificate));
  std::optional<DyadicFunction> f_override;
  if (!c.input.empty()) f_override = parse_dyadic_function(read_file(c.input));
  const auto v = verify_stored(stored, f_override);
  Table t{"diff", {"field", "claimed", "recomputed", "agrees"}, {}};
  for (const auto& d : v.diffs) {
    t.add_row({d.field, num(d.claimed), num(d.recomputed), flag(d.agrees)});
    log << (d.agrees ? "  same " : "  DIFF ") << d.field << ": claimed " << num(d.claimed) << ", recomputed "
        << num(d.recomputed) << '\n';
  }
  for (const auto& fail : v.failures) log << "  failure: " << fail << '\n';
  r.parameter("certificate", c.certificate);
  r.parameter("kind", to_string(stored.certificate.kind));
  r.require("certificate_verifies", v.holds());
  r.tables = {std::move(t)};
}

// ---------------------------------------------------------------------------
// Output.

class OutputSet {
 public:
  ~OutputSet() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& p : written_) std::filesystem::remove(p, ec);
  }
  void write(const std::filesystem::path& path, std::string_view contents) {
    write_file(path.string(), contents);
    written_.push_back(path.string());
  }
  std::vector<std::string> commit() {
    committed_ = true;
    return written_;
  }

 private:
  std::vector<std::string> written_;
  bool committed_ = false;
};

}  // namespace

void validate(const RunConfig& c) {
  if (std::find(std::begin(kExperiments), std::end(kExperiments), c.experiment) == std::end(kExperiments)) {
    std::string names;
    for (auto e : kExperiments) names += (names.empty() ? "" : ", ") + std::string(e);
    throw ConfigError("experiment: unknown '" + c.experiment + "' (expected one of " + names + ")");
  }
  if (c.resolution < 0 || c.resolution > kMaxResolution) {
    throw ConfigError("resolution: " + std::to_string(c.resolution) + " outside [0, 16]");
  }
  if (c.lacunary_list.empty()) {
    if (!(c.lacunary_ratio > 1.0)) throw ConfigError("lacunary_ratio: must exceed 1");
  } else {
    try {
      LacunarySequence check(c.lacunary_list);
      if (!check.fits(c.resolution)) throw ConfigError("lacunary_list: every term must be below 2^K");
    } catch (const ConfigError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("lacunary_list: ") + e.what());
    }
  }
  static const std::set<std::string> m_family = {"zygmund", "restricted-weak", "strong-type", "distribution",
                                                  "final-norms"};
  if (m_family.contains(c.experiment) && (c.m_min < 0 || c.m_max < c.m_min || c.m_max > c.resolution)) {
    throw ConfigError("m_range: need 0 <= a <= b <= K, got " + std::to_string(c.m_min) + ".." +
                      std::to_string(c.m_max));
  }
  if (c.jobs == 0) throw ConfigError("jobs: must be at least 1");
  if (c.trials == 0) throw ConfigError("trials: must be at least 1");
  if (c.format != "csv" && c.format != "json") throw ConfigError("format: expected csv or json, got '" + c.format + "'");
  if (c.fine_resolution != 0 && (c.fine_resolution <= c.resolution || c.fine_resolution > kMaxResolution)) {
    throw ConfigError("fine_resolution: need K < K' <= 16");
  }
  parse_strategy(c.n_strategy);
  for (const auto& slot : kConstantSlots) {
    const double v = c.constants.*slot.field;
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("constants." + std::string(slot.name) + ": must be positive");
  }
  if (c.experiment == "verify-certificate" && c.certificate.empty()) {
    throw ConfigError("certificate: verify-certificate needs --certificate PATH");
  }
  static const std::set<std::string> takes_input = {"transform", "decompose", "final-norms", "verify-certificate"};
  if (!c.input.empty() && !takes_input.contains(c.experiment)) {
    throw ConfigError("input: not used by experiment '" + c.experiment + "'");
  }
}

void set_constant(Constants& constants, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw ConfigError("set: expected C_NAME=VALUE, got '" + std::string(assignment) + "'");
  const std::string name(assignment.substr(0, eq));
  const std::string value(assignment.substr(eq + 1));
  double* slot = constant_slot(constants, name);
  if (!slot) throw ConfigError("set: unknown constant '" + name + "'");
  try {
    std::size_t used = 0;
    *slot = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
  } catch (const std::exception&) {
    throw ConfigError("set: " + name + " value '" + value + "' is not a number");
  }
}

void apply_config_json(RunConfig& c, std::string_view text, std::string_view origin) {
  const std::string where(origin);
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw ConfigError(where + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError(where + ": top level must be an object");
  for (const auto& [key, v] : doc.items()) {
    const std::string field = where + ": field '" + key + "'";
    if (key == "experiment") {
      c.experiment = json_string(v, field);
    } else if (key == "resolution") {
      c.resolution = static_cast<int>(json_int(v, field));
    } else if (key == "lacunary_ratio") {
      c.lacunary_ratio = json_number(v, field);
    } else if (key == "lacunary_terms") {
      const auto n = json_int(v, field);
      if (n < 0) throw ConfigError(field + ": must be non-negative");
      c.lacunary_terms = static_cast<std::size_t>(n);
    } else if (key == "lacunary_list") {
      if (!v.is_array()) throw ConfigError(field + ": expected an array");
      c.lacunary_list.clear();
      for (const auto& x : v) {
        const auto n = json_int(x, field);
        if (n < 0) throw ConfigError(field + ": terms must be non-negative");
        c.lacunary_list.push_back(static_cast<std::uint64_t>(n));
      }
    } else if (key == "m_range") {
      parse_m_range(c, json_string(v, field));
    } else if (key == "seed") {
      if (!v.is_number_unsigned()) throw ConfigError(field + ": expected a non-negative integer");
      c.seed = v.get<std::uint64_t>();
    } else if (key == "jobs") {
      const auto n = json_int(v, field);
      if (n < 1) throw ConfigError(field + ": must be at least 1");
      c.jobs = static_cast<unsigned>(n);
    } else if (key == "out") {
      c.out = json_string(v, field);
    } else if (key == "format") {
      c.format = json_string(v, field);
    } else if (key == "constants") {
      if (!v.is_object()) throw ConfigError(field + ": expected an object");
      for (const auto& [name, value] : v.items()) {
        double* slot = constant_slot(c.constants, name);
        if (!slot) throw ConfigError(where + ": unknown constant '" + name + "'");
        *slot = json_number(value, where + ": constant '" + name + "'");
      }
    } else if (key == "input") {
      c.input = json_string(v, field);
    } else if (key == "certificate") {
      c.certificate = json_string(v, field);
    } else if (key == "fine_resolution") {
      c.fine_resolution = static_cast<int>(json_int(v, field));
    } else if (key == "trials") {
      const auto n = json_int(v, field);
      if (n < 1) throw ConfigError(field + ": must be at least 1");
      c.trials = static_cast<std::size_t>(n);
    } else if (key == "n_strategy") {
      c.n_strategy = json_string(v, field);
    } else {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }
}

std::string config_to_json(const RunConfig& c) {
  ordered_json doc;
  doc["experiment"] = c.experiment;
  doc["resolution"] = c.resolution;
  doc["lacunary_ratio"] = c.lacunary_ratio;
  doc["lacunary_terms"] = c.lacunary_terms;
  doc["lacunary_list"] = c.lacunary_list;
  doc["m_range"] = std::to_string(c.m_min) + ".." + std::to_string(c.m_max);
  doc["seed"] = c.seed;
  doc["jobs"] = c.jobs;
  doc["out"] = c.out;
  doc["format"] = c.format;
  auto& k = doc["constants"] = ordered_json::object();
  for (const auto& slot : kConstantSlots) k[std::string(slot.name)] = c.constants.*slot.field;
  doc["input"] = c.input;
  doc["certificate"] = c.certificate;
  doc["fine_resolution"] = c.fine_resolution;
  doc["trials"] = c.trials;
  doc["n_strategy"] = c.n_strategy;
  return doc.dump(2);
}

LacunarySequence make_sequence(const RunConfig& c) {
  if (!c.lacunary_list.empty()) return LacunarySequence(c.lacunary_list);
  return LacunarySequence::geometric(c.lacunary_ratio, c.resolution, c.lacunary_terms);
}

RunOutcome run(const RunConfig& config, std::ostream& log) {
  validate(config);
  RunOutcome outcome;
  auto& r = outcome.report;
  r.experiment = config.experiment;
  r.seed = config.seed;
  r.parameter("K", std::to_string(config.resolution));
  std::optional<LacunarySequence> seq;
  if (config.experiment != "transform" && config.experiment != "antonov" &&
      config.experiment != "verify-certificate") {
    seq = make_sequence(config);
    r.parameter("seq", seq->to_string());
    r.parameter("seq_ratio", format_number(seq->ratio()));
  }

  const auto& e = config.experiment;
  if (e == "transform") run_transform(config, r);
  else if (e == "carleson-identity") run_carleson_identity(config, *seq, r);
  else if (e == "decompose") run_decompose(config, *seq, r);
  else if (e == "zygmund") run_zygmund(config, *seq, r);
  else if (e == "restricted-weak") run_restricted_weak(config, *seq, r);
  else if (e == "strong-type") run_strong_type(config, *seq, r);
  else if (e == "distribution") run_distribution(config, *seq, r);
  else if (e == "antonov") run_antonov(config, r);
  else if (e == "final-norms") run_final_norms(config, *seq, r);
  else run_verify_certificate(config, r, log);

  const std::string config_json = config_to_json(config);
  std::string inputs = config_json;
  if (!config.input.empty()) inputs += read_file(config.input);
  if (!config.certificate.empty()) inputs += read_file(config.certificate);
  const std::string input_hash = git_blob_hash(inputs);
  const std::string stamp = utc_timestamp();

  const std::filesystem::path dir(config.out);
  std::filesystem::create_directories(dir);
  OutputSet out;
  if (config.format == "json") {
    out.write(dir / (e + ".json"), json_envelope(r, config_json, input_hash, stamp));
  } else {
    for (const auto& t : r.tables) out.write(dir / (e + "_" + t.name + ".csv"), csv_document(t, stamp));
  }
  for (const auto& [stem, doc] : r.attachments) out.write(dir / (stem + ".json"), doc);
  outcome.written = out.commit();

  for (const auto& a : r.assertions) {
    log << (a.passed ? "PASS " : "FAIL ") << a.name << ": " << format_number(a.measured)
        << " <= " << format_number(a.bound) << '\n';
  }
  for (const auto& p : outcome.written) log << "wrote " << p << '\n';
  outcome.exit_code = r.passed() ? 0 : 1;
  return outcome;
}

int run_main(int argc, char** argv) {
  CLI::App app{"Walsh phase-plane experiments for lacunary Carleson operators", "walsh-tf"};
  std::string experiment, lacunary_list, m_range, out, format, input, certificate, config_path, n_strategy;
  int resolution = 0, fine_resolution = 0;
  double lacunary_ratio = 0.0;
  std::size_t lacunary_terms = 0, trials = 0;
  std::uint64_t seed = 0;
  unsigned jobs = 0;
  std::vector<std::string> sets;

  auto* o_config = app.add_option("--config", config_path, "JSON config file (flags override it)");
  auto* o_exp = app.add_option("-e,--experiment", experiment, "experiment name");
  auto* o_res = app.add_option("-K,--resolution", resolution, "resolution K (<= 16)");
  auto* o_ratio = app.add_option("--lacunary-ratio", lacunary_ratio, "geometric lacunary ratio (> 1)");
  auto* o_terms = app.add_option("--lacunary-terms", lacunary_terms, "number of lacunary terms (0: all below 2^K)");
  auto* o_list = app.add_option("--lacunary-list", lacunary_list, "explicit lacunary terms, comma separated");
  auto* o_m = app.add_option("--m-range", m_range, "m family as a..b");
  auto* o_seed = app.add_option("--seed", seed, "random seed");
  auto* o_jobs = app.add_option("--jobs", jobs, "worker threads for grid points");
  auto* o_out = app.add_option("--out", out, "output directory");
  auto* o_fmt = app.add_option("--format", format, "csv or json");
  app.add_option("--set", sets, "constant override C_NAME=VALUE (repeatable)");
  auto* o_in = app.add_option("--input", input, "input function f (JSON or headerless CSV)");
  auto* o_cert = app.add_option("--certificate", certificate, "certificate JSON for verify-certificate");
  auto* o_fine = app.add_option("--fine-resolution", fine_resolution, "antonov fine resolution K'");
  auto* o_trials = app.add_option("--trials", trials, "random trials for identity / antonov experiments");
  auto* o_strat = app.add_option("--n-strategy", n_strategy, "argmax, first_term or last_term");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    RunConfig c;
    if (*o_config) apply_config_json(c, read_file(config_path), config_path);
    if (*o_exp) c.experiment = experiment;
    if (*o_res) c.resolution = resolution;
    if (*o_ratio) {
      c.lacunary_ratio = lacunary_ratio;
      c.lacunary_list.clear();
    }
    if (*o_terms) c.lacunary_terms = lacunary_terms;
    if (*o_list) c.lacunary_list = parse_list(lacunary_list);
    if (*o_m) parse_m_range(c, m_range);
    if (*o_seed) c.seed = seed;
    if (*o_jobs) c.jobs = jobs;
    if (*o_out) c.out = out;
    if (*o_fmt) c.format = format;
    for (const auto& s : sets) set_constant(c.constants, s);
    if (*o_in) c.input = input;
    if (*o_cert) c.certificate = certificate;
    if (*o_fine) c.fine_resolution = fine_resolution;
    if (*o_trials) c.trials = trials;
    if (*o_strat) c.n_strategy = n_strategy;
    return run(c, std::cout).exit_code;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
  } catch (const ResolutionMismatch& e) {
    std::cerr << "resolution mismatch: " << e.what() << '\n';
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return 2;
}

}  // namespace walsh
