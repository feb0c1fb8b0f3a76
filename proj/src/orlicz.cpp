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

#include "walsh/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

namespace walsh {

double log_plus(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_plus needs x > 0");
  return 27.0 + std::max(0.0, std::log(x));
}

double loglog_plus(double x) { return std::log(log_plus(x)); }

double logloglog_plus(double x) { return std::log(std::log(log_plus(x))); }

const char* to_string(GaugeTag tag) {
  switch (tag) {
    case GaugeTag::identity: return "identity";
    case GaugeTag::L_logL_half: return "L_logL_half";
    case GaugeTag::L_logL_loglogL: return "L_logL_loglogL";
    case GaugeTag::L_loglogL_logloglogL: return "L_loglogL_logloglogL";
    case GaugeTag::exp_L2: return "exp_L2";
    case GaugeTag::custom: return "custom";
  }
  return "unknown";
}

OrliczGauge OrliczGauge::named(GaugeTag tag) {
  switch (tag) {
    case GaugeTag::identity:
      return OrliczGauge(tag, to_string(tag), [](double t) { return t; });
    case GaugeTag::L_logL_half:
      return OrliczGauge(tag, to_string(tag),
                         [](double t) { return t > 0.0 ? t * std::sqrt(log_plus(t)) : 0.0; });
    case GaugeTag::L_logL_loglogL:
      return OrliczGauge(tag, to_string(tag),
                         [](double t) { return t > 0.0 ? t * log_plus(t) * loglog_plus(t) : 0.0; });
    case GaugeTag::L_loglogL_logloglogL:
      return OrliczGauge(tag, to_string(tag), [](double t) {
        return t > 0.0 ? t * loglog_plus(t) * logloglog_plus(t) : 0.0;
      });
    case GaugeTag::exp_L2:
      return OrliczGauge(tag, to_string(tag), [](double t) {
        const double sq = t * t;
        // Past ln(DBL_MAX) the modular is already far beyond 1.
        return sq > 700.0 ? std::numeric_limits<double>::infinity() : std::expm1(sq);
      });
    case GaugeTag::custom:
      break;
  }
  throw std::invalid_argument("custom gauges need an evaluator");
}

OrliczGauge OrliczGauge::custom(std::string name, std::function<double(double)> psi) {
  return OrliczGauge(GaugeTag::custom, std::move(name), std::move(psi));
}

std::vector<double> OrliczGauge::default_grid() {
  std::vector<double> grid{0.0};
  for (int k = -60; k <= 60; ++k) grid.push_back(std::pow(10.0, k / 10.0));
  return grid;
}

GaugeCheck OrliczGauge::check(const std::vector<double>& grid) const {
  GaugeCheck c;
  c.zero_at_origin = std::abs(psi_(0.0)) == 0.0;
  c.non_decreasing = true;
  c.convex = true;
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = psi_(grid[i]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (v[i] < v[i - 1]) c.non_decreasing = false;
  }
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    if (!std::isfinite(v[i + 1])) break;
    const double left = (v[i] - v[i - 1]) / (grid[i] - grid[i - 1]);
    const double right = (v[i + 1] - v[i]) / (grid[i + 1] - grid[i]);
    if (right < left * (1.0 - 1e-9) - 1e-12) c.convex = false;
  }
  c.unbounded = grid.size() > 1 && v.back() > 1e6 * std::max(1.0, std::abs(v[1]));
  return c;
}

OrliczGauge OrliczGauge::convexified(const std::vector<double>& grid) const {
  // Lower convex hull of the sampled points (monotone chain).
  std::vector<std::pair<double, double>> hull;
  for (double t : grid) {
    const double y = psi_(t);
    if (!std::isfinite(y)) break;
    while (hull.size() >= 2) {
      const auto& [x1, y1] = hull[hull.size() - 2];
      const auto& [x2, y2] = hull[hull.size() - 1];
      // Drop the middle point when it lies on or above the chord.
      if ((y2 - y1) * (t - x1) >= (y - y1) * (x2 - x1)) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.emplace_back(t, y);
  }
  auto points = std::make_shared<const std::vector<std::pair<double, double>>>(std::move(hull));
  auto raw = psi_;
  return OrliczGauge(tag_, name_ + "+convex", [points, raw](double t) {
    const auto& p = *points;
    if (p.empty() || t >= p.back().first) return raw(t);
    if (t <= p.front().first) return p.front().second;
    auto it = std::upper_bound(p.begin(), p.end(), t,
                               [](double x, const auto& pt) { return x < pt.first; });
    const auto& [x2, y2] = *it;
    const auto& [x1, y1] = *(it - 1);
    return y1 + (y2 - y1) * (t - x1) / (x2 - x1);
  });
}

double orlicz_modular(const DyadicFunction& f, const OrliczGauge& psi, double scale) {
  double total = 0.0;
  for (double v : f.values()) {
    if (v == 0.0) continue;
    total += psi(std::abs(v) / scale);
    if (!std::isfinite(total)) return total;
  }
  return total * f.cell_measure();
}

double luxembourg_norm(const DyadicFunction& f, const OrliczGauge& psi) {
  if (f.is_zero()) return 0.0;
  double start = f.l1_norm();
  if (!(start > 0.0)) start = f.sup_norm();
  double hi = start;
  while (!(orlicz_modular(f, psi, hi) < 1.0)) hi *= 2.0;
  double lo = std::min(start, hi);
  while (orlicz_modular(f, psi, lo) < 1.0) lo *= 0.5;
  for (int it = 0; it < 200 && hi - lo > 1e-10 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (orlicz_modular(f, psi, mid) < 1.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace walsh
