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

#include <functional>
#include <string>
#include <vector>

#include "walsh/dyadic_function.hpp"

namespace walsh {

/// log_+ x = 27 + max(0, ln x). The offset keeps the iterated logs positive.
double log_plus(double x);
/// ln(log_+ x).
double loglog_plus(double x);
/// ln(ln(log_+ x)).
double logloglog_plus(double x);

enum class GaugeTag {
  identity,              ///< t
  L_logL_half,           ///< t (log_+ t)^{1/2}
  L_logL_loglogL,        ///< t log_+ t loglog_+ t
  L_loglogL_logloglogL,  ///< t loglog_+ t logloglog_+ t
  exp_L2,                ///< e^{t^2} - 1
  custom,
};

const char* to_string(GaugeTag tag);

struct GaugeCheck {
  bool zero_at_origin = false;
  bool non_decreasing = false;
  bool convex = false;
  bool unbounded = false;
  bool ok() const { return zero_at_origin && non_decreasing && convex && unbounded; }
};

/// An Orlicz function psi: convex, non-decreasing, psi(0) = 0, psi -> oo.
class OrliczGauge {
 public:
  static OrliczGauge named(GaugeTag tag);
  static OrliczGauge custom(std::string name, std::function<double(double)> psi);

  GaugeTag tag() const { return tag_; }
  const std::string& name() const { return name_; }
  /// psi(t); may return +inf on overflow.
  double operator()(double t) const { return psi_(t); }

  /// Geometric grid on [1e-6, 1e6] plus the origin.
  static std::vector<double> default_grid();
  GaugeCheck check(const std::vector<double>& grid = default_grid()) const;

  /// Replace psi by the greatest convex minorant of its samples on `grid`
  /// (piecewise linear between grid points, raw psi beyond the last point).
  OrliczGauge convexified(const std::vector<double>& grid = default_grid()) const;

 private:
  OrliczGauge(GaugeTag tag, std::string name, std::function<double(double)> psi)
      : tag_(tag), name_(std::move(name)), psi_(std::move(psi)) {}

  GaugeTag tag_;
  std::string name_;
  std::function<double(double)> psi_;
};

/// E psi(|f| / C) with the expectation over [0,1].
double orlicz_modular(const DyadicFunction& f, const OrliczGauge& psi, double scale);

/// ||f||_psi = inf{C : E psi(|f|/C) < 1}, found by bracketing then bisection
/// to a relative tolerance of 1e-10 (at most 200 halvings). Zero for f == 0.
double luxembourg_norm(const DyadicFunction& f, const OrliczGauge& psi);

}  // namespace walsh
