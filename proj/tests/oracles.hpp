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

// Brute-force reference implementations shared by the tests. None of them
// calls into the library: Walsh functions come from sign sin(2^{k+1} pi x)
// evaluated at cell midpoints, transforms and partial sums are direct sums,
// and the phase-plane functionals enumerate every candidate top.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <set>
#include <tuple>
#include <vector>

namespace oracle {

inline double midpoint(std::size_t cell, int K) { return (static_cast<double>(cell) + 0.5) / std::ldexp(1.0, K); }

/// r_k(x) = sign sin(2^{k+1} pi x).
inline int rademacher(int k, double x) { return std::sin(std::ldexp(std::numbers::pi, k + 1) * x) > 0 ? 1 : -1; }

/// W_n = prod over set bits k of n of r_k.
inline int walsh(std::uint64_t n, double x) {
  int v = 1;
  for (int k = 0; n >> k; ++k) {
    if ((n >> k) & 1) v *= rademacher(k, x);
  }
  return v;
}

inline std::vector<double> transform(const std::vector<double>& f, int K) {
  const std::size_t size = f.size();
  std::vector<double> c(size, 0.0);
  for (std::size_t n = 0; n < size; ++n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < size; ++i) acc += f[i] * walsh(n, midpoint(i, K));
    c[n] = acc / static_cast<double>(size);
  }
  return c;
}

/// sum_{k < n} c_k W_k at every cell.
inline std::vector<double> partial_sum(const std::vector<double>& coeffs, std::uint64_t n, int K) {
  std::vector<double> out(coeffs.size(), 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double x = midpoint(i, K);
    for (std::uint64_t k = 0; k < n && k < coeffs.size(); ++k) out[i] += coeffs[k] * walsh(k, x);
  }
  return out;
}

/// w_p(x) = 2^{s/2} W_n(2^s x - m) on [m 2^-s, (m+1) 2^-s).
inline double packet(int s, std::uint64_t m, std::uint64_t n, std::size_t cell, int K) {
  const double x = midpoint(cell, K);
  const double y = std::ldexp(x, s) - static_cast<double>(m);
  if (y < 0.0 || y >= 1.0) return 0.0;
  return std::sqrt(std::ldexp(1.0, s)) * walsh(n, y);
}

inline double inner_packet(const std::vector<double>& f, int s, std::uint64_t m, std::uint64_t n, int K) {
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += f[i] * packet(s, m, n, i, K);
  return acc / static_cast<double>(f.size());
}

struct Bi {
  int s;
  std::uint64_t m, n;  ///< omega = [n 2^{s+1}, (n+1) 2^{s+1})
};

/// sup over bi-tiles P' >= P (I' inside [0,1]) of |{x in I' cap G : N(x) in omega'}| / |I'|.
inline double density(const Bi& P, const std::vector<double>& G, const std::vector<std::uint64_t>& N, int K) {
  double best = 0.0;
  for (int s2 = 0; s2 <= P.s; ++s2) {
    const std::uint64_t m2 = P.m >> (P.s - s2);
    const std::uint64_t width = std::uint64_t{1} << (s2 + 1);
    const std::uint64_t first = P.n << (P.s - s2), last = (P.n + 1) << (P.s - s2);
    for (std::uint64_t n2 = first; n2 < last; ++n2) {
      std::size_t count = 0;
      const std::size_t b = m2 << (K - s2), e = (m2 + 1) << (K - s2);
      for (std::size_t i = b; i < e; ++i) {
        if (G[i] != 0.0 && N[i] >= n2 * width && N[i] < (n2 + 1) * width) ++count;
      }
      best = std::max(best, static_cast<double>(count) / static_cast<double>(e - b));
    }
  }
  return best;
}

/// sqrt of sup over tops of |I_T|^{-1} sum over eligible members below the top
/// of <f, w_{P_l}>^2. Tops: every bi-tile above some member, plus the area-one
/// tops [0,1) x [k, k+1) with k a half of a scale-0 member's frequency block.
inline double size(const std::vector<Bi>& members, const std::vector<double>& f, int K) {
  std::vector<double> c;
  for (const auto& P : members) c.push_back(inner_packet(f, P.s, P.m, 2 * P.n, K));
  // (scale, time, frequency start, frequency length)
  std::set<std::tuple<int, std::uint64_t, std::uint64_t, std::uint64_t>> tops;
  for (const auto& P : members) {
    for (int s2 = 0; s2 <= P.s; ++s2) {
      const std::uint64_t len = std::uint64_t{1} << (s2 + 1);
      const std::uint64_t first = P.n << (P.s - s2), last = (P.n + 1) << (P.s - s2);
      for (std::uint64_t n2 = first; n2 < last; ++n2) tops.insert({s2, P.m >> (P.s - s2), n2 * len, len});
    }
    if (P.s == 0) {
      tops.insert({0, 0, 2 * P.n, 1});
      tops.insert({0, 0, 2 * P.n + 1, 1});
    }
  }
  double best = 0.0;
  for (const auto& [s2, m2, start, len] : tops) {
    double acc = 0.0;
    for (std::size_t j = 0; j < members.size(); ++j) {
      const auto& P = members[j];
      if (P.s < s2 || (P.m >> (P.s - s2)) != m2) continue;
      const std::uint64_t plen = std::uint64_t{1} << (P.s + 1);
      const std::uint64_t pb = P.n * plen;
      if (start < pb || start + len > pb + plen) continue;   // omega_T inside omega_P
      if (start < pb + plen / 2) continue;                    // lower half meets the top
      acc += c[j] * c[j];
    }
    best = std::max(best, acc * std::ldexp(1.0, s2));
  }
  return std::sqrt(best);
}

/// sup over dyadic intervals containing each cell of the mean of |f|.
inline std::vector<double> dyadic_maximal(const std::vector<double>& f, int K) {
  std::vector<double> out(f.size(), 0.0);
  for (int s = 0; s <= K; ++s) {
    const std::size_t len = std::size_t{1} << (K - s);
    for (std::size_t b = 0; b < f.size(); b += len) {
      double mean = 0.0;
      for (std::size_t i = b; i < b + len; ++i) mean += std::abs(f[i]);
      mean /= static_cast<double>(len);
      for (std::size_t i = b; i < b + len; ++i) out[i] = std::max(out[i], mean);
    }
  }
  return out;
}

inline std::vector<double> random_values(std::mt19937_64& rng, int K, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(std::size_t{1} << K);
  for (auto& x : v) x = u(rng);
  return v;
}

inline std::vector<double> random_set(std::mt19937_64& rng, int K, double p = 0.5) {
  std::bernoulli_distribution b(p);
  std::vector<double> v(std::size_t{1} << K);
  for (auto& x : v) x = b(rng) ? 1.0 : 0.0;
  return v;
}

}  // namespace oracle
