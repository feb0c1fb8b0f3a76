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

#include <utility>
#include <vector>

#include "walsh/dyadic_function.hpp"

namespace walsh {

/// Right-continuous non-increasing step function h*(t) on (0, 1].
/// Breakpoint (t_k, v_k) means h* = v_k on (t_{k-1}, t_k], with t_{-1} = 0.
class RearrangementCurve {
 public:
  explicit RearrangementCurve(std::vector<std::pair<double, double>> breakpoints);

  const std::vector<std::pair<double, double>>& breakpoints() const { return breakpoints_; }

  /// h*(t) = inf{s >= 0 : |{|h| > s}| <= t}, right-continuous; 0 for t >= the
  /// support measure, sup |h| for t <= 0.
  double operator()(double t) const;
  /// |{h* > s}|.
  double measure_above(double s) const;
  double integral() const;

 private:
  std::vector<std::pair<double, double>> breakpoints_;
};

/// h*(t) = inf{s >= 0 : |{|h| > s}| <= t}, built by sorting |values|.
RearrangementCurve decreasing_rearrangement(const DyadicFunction& f);

/// ||f||_{1,oo} = sup_s s |{|f| > s}|; attained at a value of |f| for step functions.
double weak_l1_norm(const DyadicFunction& f);

/// sup_t h*(t) / R(t) for R(t) = 1/t, i.e. the M_R norm with R(t) = 1/t.
double weighted_lorentz_norm_inverse_t(const RearrangementCurve& curve);

}  // namespace walsh
