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

#include "walsh/dyadic_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace walsh {

std::uint64_t bit_reverse(std::uint64_t v, int bits) {
  std::uint64_t r = 0;
  for (int b = 0; b < bits; ++b) {
    r = (r << 1) | ((v >> b) & 1u);
  }
  return r;
}

namespace {

void check_resolution(int resolution) {
  if (resolution < 0 || resolution > kMaxResolution) {
    throw std::invalid_argument("resolution must lie in [0, " + std::to_string(kMaxResolution) +
                                "], got " + std::to_string(resolution));
  }
}

}  // namespace

DyadicFunction::DyadicFunction(int resolution) : resolution_(resolution) {
  check_resolution(resolution);
  values_.assign(std::size_t{1} << resolution, 0.0);
}

DyadicFunction::DyadicFunction(int resolution, std::vector<double> values)
    : resolution_(resolution), values_(std::move(values)) {
  check_resolution(resolution);
  if (values_.size() != (std::size_t{1} << resolution)) {
    throw std::invalid_argument("DyadicFunction at resolution " + std::to_string(resolution) +
                                " needs " + std::to_string(std::size_t{1} << resolution) +
                                " values, got " + std::to_string(values_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("DyadicFunction values must be finite");
  }
}

DyadicFunction DyadicFunction::indicator(int resolution, std::size_t begin, std::size_t end) {
  DyadicFunction f(resolution);
  if (begin > end || end > f.size()) throw std::out_of_range("indicator cell range out of bounds");
  std::fill(f.values_.begin() + static_cast<std::ptrdiff_t>(begin),
            f.values_.begin() + static_cast<std::ptrdiff_t>(end), 1.0);
  return f;
}

DyadicFunction DyadicFunction::dyadic_indicator(int resolution, int scale, std::uint64_t time) {
  if (scale < 0 || scale > resolution || time >= (std::uint64_t{1} << scale)) {
    throw std::out_of_range("dyadic interval not representable at this resolution");
  }
  const std::size_t width = std::size_t{1} << (resolution - scale);
  return indicator(resolution, time * width, (time + 1) * width);
}

void DyadicFunction::set(std::size_t i, double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("DyadicFunction values must be finite");
  values_.at(i) = v;
}

double DyadicFunction::integral() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s * cell_measure();
}

double DyadicFunction::l1_norm() const {
  double s = 0.0;
  for (double v : values_) s += std::abs(v);
  return s * cell_measure();
}

double DyadicFunction::l2_norm() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return std::sqrt(s * cell_measure());
}

double DyadicFunction::sup_norm() const {
  double s = 0.0;
  for (double v : values_) s = std::max(s, std::abs(v));
  return s;
}

double DyadicFunction::inner(const DyadicFunction& other) const {
  require_same_resolution(other);
  double s = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) s += values_[i] * other.values_[i];
  return s * cell_measure();
}

double DyadicFunction::support_measure() const {
  const auto n = std::count_if(values_.begin(), values_.end(), [](double v) { return v != 0.0; });
  return static_cast<double>(n) * cell_measure();
}

bool DyadicFunction::is_indicator() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0 || v == 1.0; });
}

bool DyadicFunction::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

bool DyadicFunction::dominated_by(const DyadicFunction& set) const {
  require_same_resolution(set);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (std::abs(values_[i]) > (set.values_[i] != 0.0 ? 1.0 : 0.0)) return false;
  }
  return true;
}

DyadicFunction DyadicFunction::abs() const {
  DyadicFunction r = *this;
  for (double& v : r.values_) v = std::abs(v);
  return r;
}

DyadicFunction DyadicFunction::refine(int finer_resolution) const {
  if (finer_resolution < resolution_) throw std::invalid_argument("refine needs a finer resolution");
  DyadicFunction r(finer_resolution);
  const std::size_t width = std::size_t{1} << (finer_resolution - resolution_);
  for (std::size_t i = 0; i < r.size(); ++i) r.values_[i] = values_[i / width];
  return r;
}

DyadicFunction DyadicFunction::operator*(const DyadicFunction& other) const {
  require_same_resolution(other);
  DyadicFunction r = *this;
  for (std::size_t i = 0; i < values_.size(); ++i) r.values_[i] *= other.values_[i];
  return r;
}

DyadicFunction DyadicFunction::operator+(const DyadicFunction& other) const {
  require_same_resolution(other);
  DyadicFunction r = *this;
  for (std::size_t i = 0; i < values_.size(); ++i) r.values_[i] += other.values_[i];
  return r;
}

DyadicFunction DyadicFunction::operator-(const DyadicFunction& other) const {
  require_same_resolution(other);
  DyadicFunction r = *this;
  for (std::size_t i = 0; i < values_.size(); ++i) r.values_[i] -= other.values_[i];
  return r;
}

DyadicFunction DyadicFunction::operator*(double c) const {
  DyadicFunction r = *this;
  for (double& v : r.values_) v *= c;
  return r;
}

void DyadicFunction::require_same_resolution(const DyadicFunction& other) const {
  if (other.resolution_ != resolution_) {
    throw std::invalid_argument("resolution mismatch: " + std::to_string(resolution_) + " vs " +
                                std::to_string(other.resolution_));
  }
}

LacunarySequence::LacunarySequence(std::vector<std::uint64_t> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw std::invalid_argument("lacunary sequence must be non-empty");
  if (terms_.front() == 0) throw std::invalid_argument("lacunary terms must be positive");
  ratio_ = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j < terms_.size(); ++j) {
    if (terms_[j] <= terms_[j - 1]) {
      throw std::invalid_argument("lacunary terms must be strictly increasing (index " +
                                  std::to_string(j) + ")");
    }
    ratio_ = std::min(ratio_, static_cast<double>(terms_[j]) / static_cast<double>(terms_[j - 1]));
  }
  if (!(ratio_ > 1.0)) throw std::invalid_argument("lacunarity constant must exceed 1");
}

LacunarySequence LacunarySequence::geometric(double ratio, int resolution, std::size_t max_terms) {
  if (!(ratio > 1.0)) throw std::invalid_argument("lacunary ratio must exceed 1");
  check_resolution(resolution);
  const std::uint64_t limit = std::uint64_t{1} << resolution;
  std::vector<std::uint64_t> terms;
  std::uint64_t n = 1;
  while (n < limit && (max_terms == 0 || terms.size() < max_terms)) {
    terms.push_back(n);
    const double next = std::ceil(ratio * static_cast<double>(n) - 1e-9);
    n = std::max(n + 1, static_cast<std::uint64_t>(next));
  }
  if (terms.empty()) throw std::invalid_argument("no lacunary terms fit below 2^K");
  return LacunarySequence(std::move(terms));
}

bool LacunarySequence::contains(std::uint64_t n) const {
  return std::binary_search(terms_.begin(), terms_.end(), n);
}

bool LacunarySequence::fits(int resolution) const {
  return terms_.back() < (std::uint64_t{1} << resolution);
}

std::string LacunarySequence::to_string() const {
  std::ostringstream os;
  for (std::size_t j = 0; j < terms_.size(); ++j) os << (j ? " " : "") << terms_[j];
  return os.str();
}

}  // namespace walsh
