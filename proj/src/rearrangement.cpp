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

#include "walsh/rearrangement.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace walsh {

RearrangementCurve::RearrangementCurve(std::vector<std::pair<double, double>> breakpoints)
    : breakpoints_(std::move(breakpoints)) {
  for (std::size_t k = 0; k < breakpoints_.size(); ++k) {
    if (breakpoints_[k].second < 0.0) throw std::invalid_argument("rearrangement values are >= 0");
    if (k > 0 && (breakpoints_[k].first <= breakpoints_[k - 1].first ||
                  breakpoints_[k].second > breakpoints_[k - 1].second)) {
      throw std::invalid_argument("rearrangement breakpoints must be increasing in t, non-increasing in value");
    }
  }
}

double RearrangementCurve::operator()(double t) const {
  if (breakpoints_.empty()) return 0.0;
  if (t <= 0.0) return breakpoints_.front().second;
  // h* is right-continuous: at t = t_k it already takes the next value.
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t,
                             [](double x, const auto& bp) { return x < bp.first; });
  return it == breakpoints_.end() ? 0.0 : it->second;
}

double RearrangementCurve::measure_above(double s) const {
  double t = 0.0;
  for (const auto& [end, v] : breakpoints_) {
    if (v > s) t = end;
  }
  return t;
}

double RearrangementCurve::integral() const {
  double total = 0.0;
  double prev = 0.0;
  for (const auto& [end, v] : breakpoints_) {
    total += (end - prev) * v;
    prev = end;
  }
  return total;
}

RearrangementCurve decreasing_rearrangement(const DyadicFunction& f) {
  std::vector<double> a(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) a[i] = std::abs(f[i]);
  std::sort(a.begin(), a.end(), std::greater<>());
  std::vector<std::pair<double, double>> bps;
  const double cell = f.cell_measure();
  for (std::size_t i = 0; i < a.size() && a[i] > 0.0;) {
    std::size_t j = i;
    while (j < a.size() && a[j] == a[i]) ++j;
    bps.emplace_back(static_cast<double>(j) * cell, a[i]);
    i = j;
  }
  return RearrangementCurve(std::move(bps));
}

double weak_l1_norm(const DyadicFunction& f) {
  return weighted_lorentz_norm_inverse_t(decreasing_rearrangement(f));
}

double weighted_lorentz_norm_inverse_t(const RearrangementCurve& curve) {
  // On (t_{k-1}, t_k] the product t h*(t) peaks at t_k.
  double best = 0.0;
  for (const auto& [end, v] : curve.breakpoints()) best = std::max(best, end * v);
  return best;
}

}  // namespace walsh
