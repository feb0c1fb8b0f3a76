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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace walsh {

/// Largest resolution accepted anywhere in the library (2^16 cells).
inline constexpr int kMaxResolution = 16;

/// Reverse the low `bits` bits of `v`.
std::uint64_t bit_reverse(std::uint64_t v, int bits);

/// A real function on [0,1) that is constant on each of the 2^K dyadic cells
/// [i 2^-K, (i+1) 2^-K). Cells all have measure 2^-K, so integrals are means.
class DyadicFunction {
 public:
  DyadicFunction() : DyadicFunction(0) {}
  explicit DyadicFunction(int resolution);
  DyadicFunction(int resolution, std::vector<double> values);

  /// 1 on cells [begin, end), 0 elsewhere.
  static DyadicFunction indicator(int resolution, std::size_t begin, std::size_t end);
  /// Indicator of the dyadic interval [m 2^-s, (m+1) 2^-s) sampled at `resolution`.
  static DyadicFunction dyadic_indicator(int resolution, int scale, std::uint64_t time);

  int resolution() const { return resolution_; }
  std::size_t size() const { return values_.size(); }
  double cell_measure() const { return 1.0 / static_cast<double>(values_.size()); }

  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  void set(std::size_t i, double v);

  double integral() const;
  double l1_norm() const;
  double l2_norm() const;
  double sup_norm() const;
  double inner(const DyadicFunction& other) const;

  /// Measure of the support {f != 0}.
  double support_measure() const;
  bool is_indicator() const;
  bool is_zero() const;
  /// True when |f| <= 1_F pointwise.
  bool dominated_by(const DyadicFunction& set) const;

  DyadicFunction abs() const;
  /// Same function sampled at a finer resolution.
  DyadicFunction refine(int finer_resolution) const;
  /// Pointwise product.
  DyadicFunction operator*(const DyadicFunction& other) const;
  DyadicFunction operator+(const DyadicFunction& other) const;
  DyadicFunction operator-(const DyadicFunction& other) const;
  DyadicFunction operator*(double c) const;

  bool operator==(const DyadicFunction&) const = default;

 private:
  void require_same_resolution(const DyadicFunction& other) const;

  int resolution_ = 0;
  std::vector<double> values_;
};

/// Strictly increasing positive integers n_1 < ... < n_N with lacunarity
/// constant min n_{j+1}/n_j > 1.
class LacunarySequence {
 public:
  explicit LacunarySequence(std::vector<std::uint64_t> terms);

  /// n_1 = 1, n_{j+1} = max(n_j + 1, ceil(ratio * n_j)), all terms < 2^K.
  /// Ratio 2 gives 1, 2, 4, ..., 2^{K-1}.
  static LacunarySequence geometric(double ratio, int resolution, std::size_t max_terms = 0);

  std::span<const std::uint64_t> terms() const { return terms_; }
  std::size_t count() const { return terms_.size(); }
  std::uint64_t front() const { return terms_.front(); }
  std::uint64_t back() const { return terms_.back(); }
  std::uint64_t operator[](std::size_t j) const { return terms_[j]; }
  /// min n_{j+1}/n_j; +inf for a single term.
  double ratio() const { return ratio_; }
  bool contains(std::uint64_t n) const;
  /// All terms < 2^K.
  bool fits(int resolution) const;

  std::string to_string() const;

 private:
  std::vector<std::uint64_t> terms_;
  double ratio_;
};

}  // namespace walsh
