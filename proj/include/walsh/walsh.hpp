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

// Walsh-Paley analysis of dyadic step functions.
//
// W_n = prod_k r_k^{eps_k} where n = sum eps_k 2^k and r_k(x) = sign sin(2^{k+1} pi x).
// On cell i of resolution K the k-th binary digit of x is bit (K-1-k) of i, so
// W_n(cell i) = (-1)^{popcount(n & bitrev_K(i))}.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "walsh/choice_function.hpp"
#include "walsh/dyadic_function.hpp"

namespace walsh {

/// Value of W_n on cell `cell` at resolution K. Throws if n >= 2^K.
int walsh_eval(std::uint64_t n, std::uint64_t cell, int resolution);

/// Same as walsh_eval without range checks; for inner loops.
inline int walsh_sign(std::uint64_t n, std::uint64_t reversed_cell) {
  return (__builtin_popcountll(n & reversed_cell) & 1) ? -1 : 1;
}

/// W_n sampled at resolution K.
DyadicFunction walsh_function(std::uint64_t n, int resolution);

/// In-place natural-order Walsh-Hadamard butterfly (unnormalized).
void fwht_inplace(std::span<double> data);

/// Coefficients f^(k) = int f W_k for 0 <= k < 2^K, Paley order.
std::vector<double> walsh_transform(const DyadicFunction& f);
std::vector<double> walsh_transform(std::span<const double> values);

/// Inverse of walsh_transform.
DyadicFunction inverse_walsh_transform(std::span<const double> coefficients, int resolution);

/// Half-open partial sum S^-_n f = sum_{k<n} f^(k) W_k. The closed sum
/// S_n f = sum_{k<=n} is partial_sum(f, n + 1).
DyadicFunction partial_sum(const DyadicFunction& f, std::uint64_t n);

/// Partial sum from precomputed coefficients.
DyadicFunction partial_sum_from_coefficients(std::span<const double> coefficients, std::uint64_t n,
                                             int resolution);

struct LacunaryMaximal {
  DyadicFunction value;   ///< sup_j |S^-_{n_j} f|
  ChoiceFunction argmax;  ///< maximizing n_j per cell, ties to the smallest j
};

LacunaryMaximal lacunary_maximal(const DyadicFunction& f, const LacunarySequence& seq);

/// Dyadic Hardy-Littlewood maximal function: max over dyadic I containing x of
/// the mean of |f| on I.
DyadicFunction dyadic_maximal(const DyadicFunction& f);

}  // namespace walsh
