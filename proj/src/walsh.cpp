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

#include "walsh/walsh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace walsh {

ChoiceFunction::ChoiceFunction(int resolution, std::vector<std::uint64_t> assignment)
    : resolution_(resolution), assignment_(std::move(assignment)) {
  if (resolution < 0 || resolution > kMaxResolution) {
    throw std::invalid_argument("choice function resolution out of range");
  }
  if (assignment_.size() != (std::size_t{1} << resolution)) {
    throw std::invalid_argument("choice function needs one frequency per cell");
  }
}

ChoiceFunction ChoiceFunction::constant(int resolution, std::uint64_t n) {
  return ChoiceFunction(resolution, std::vector<std::uint64_t>(std::size_t{1} << resolution, n));
}

bool ChoiceFunction::in_range(const LacunarySequence& seq) const {
  return std::all_of(assignment_.begin(), assignment_.end(),
                     [&](std::uint64_t n) { return seq.contains(n); });
}

int walsh_eval(std::uint64_t n, std::uint64_t cell, int resolution) {
  if (resolution < 0 || resolution > kMaxResolution) {
    throw std::invalid_argument("resolution out of range");
  }
  const std::uint64_t cells = std::uint64_t{1} << resolution;
  if (n >= cells) {
    throw std::invalid_argument("W_" + std::to_string(n) + " is not constant on cells at resolution " +
                                std::to_string(resolution));
  }
  if (cell >= cells) throw std::out_of_range("cell index out of range");
  return walsh_sign(n, bit_reverse(cell, resolution));
}

DyadicFunction walsh_function(std::uint64_t n, int resolution) {
  DyadicFunction w(resolution);
  for (std::size_t i = 0; i < w.size(); ++i) w.set(i, walsh_eval(n, i, resolution));
  return w;
}

void fwht_inplace(std::span<double> data) {
  const std::size_t n = data.size();
  for (std::size_t len = 1; len < n; len <<= 1) {
    for (std::size_t i = 0; i < n; i += len << 1) {
      for (std::size_t j = i; j < i + len; ++j) {
        const double a = data[j];
        const double b = data[j + len];
        data[j] = a + b;
        data[j + len] = a - b;
      }
    }
  }
}

namespace {

int log2_exact(std::size_t n) {
  if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("length must be a power of two");
  return __builtin_ctzll(n);
}

// Bit-reversal permutation followed by the natural-order butterfly yields the
// Paley-ordered coefficients: H[u] = sum_j f_j (-1)^{u . rev(j)}.
void bitrev_permute(std::span<double> data, int bits) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    const std::size_t r = bit_reverse(i, bits);
    if (r > i) std::swap(data[i], data[r]);
  }
}

}  // namespace

std::vector<double> walsh_transform(std::span<const double> values) {
  const int bits = log2_exact(values.size());
  std::vector<double> out(values.begin(), values.end());
  bitrev_permute(out, bits);
  fwht_inplace(out);
  const double scale = 1.0 / static_cast<double>(out.size());
  for (double& c : out) c *= scale;
  return out;
}

std::vector<double> walsh_transform(const DyadicFunction& f) { return walsh_transform(f.values()); }

DyadicFunction inverse_walsh_transform(std::span<const double> coefficients, int resolution) {
  if (coefficients.size() != (std::size_t{1} << resolution)) {
    throw std::invalid_argument("coefficient count does not match resolution");
  }
  std::vector<double> out(coefficients.begin(), coefficients.end());
  fwht_inplace(out);
  bitrev_permute(out, resolution);
  return DyadicFunction(resolution, std::move(out));
}

DyadicFunction partial_sum_from_coefficients(std::span<const double> coefficients, std::uint64_t n,
                                             int resolution) {
  const std::uint64_t cells = std::uint64_t{1} << resolution;
  if (n > cells) {
    throw std::invalid_argument("partial sum index " + std::to_string(n) + " exceeds 2^K = " +
                                std::to_string(cells));
  }
  std::vector<double> trunc(coefficients.begin(), coefficients.end());
  std::fill(trunc.begin() + static_cast<std::ptrdiff_t>(n), trunc.end(), 0.0);
  return inverse_walsh_transform(trunc, resolution);
}

DyadicFunction partial_sum(const DyadicFunction& f, std::uint64_t n) {
  return partial_sum_from_coefficients(walsh_transform(f), n, f.resolution());
}

LacunaryMaximal lacunary_maximal(const DyadicFunction& f, const LacunarySequence& seq) {
  const int K = f.resolution();
  if (seq.back() > (std::uint64_t{1} << K)) {
    throw std::invalid_argument("lacunary term exceeds 2^K");
  }
  const auto coeffs = walsh_transform(f);
  std::vector<double> best(f.size(), -1.0);
  std::vector<std::uint64_t> arg(f.size(), seq.front());
  for (std::uint64_t n : seq.terms()) {
    const auto s = partial_sum_from_coefficients(coeffs, n, K);
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double a = std::abs(s[i]);
      if (a > best[i]) {
        best[i] = a;
        arg[i] = n;
      }
    }
  }
  return {DyadicFunction(K, std::move(best)), ChoiceFunction(K, std::move(arg))};
}

DyadicFunction dyadic_maximal(const DyadicFunction& f) {
  const int K = f.resolution();
  std::vector<double> level(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) level[i] = std::abs(f[i]);
  std::vector<double> result = level;
  // level holds means over intervals of the current scale; climb to [0,1].
  for (int s = K - 1; s >= 0; --s) {
    const std::size_t count = std::size_t{1} << s;
    std::vector<double> parent(count);
    for (std::size_t m = 0; m < count; ++m) parent[m] = 0.5 * (level[2 * m] + level[2 * m + 1]);
    const std::size_t width = std::size_t{1} << (K - s);
    for (std::size_t i = 0; i < f.size(); ++i) result[i] = std::max(result[i], parent[i / width]);
    level = std::move(parent);
  }
  return DyadicFunction(K, std::move(result));
}

}  // namespace walsh
