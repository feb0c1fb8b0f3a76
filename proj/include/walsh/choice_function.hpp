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

#include <cstdint>
#include <span>
#include <vector>

#include "walsh/dyadic_function.hpp"

namespace walsh {

/// Linearizing frequency choice x -> N(x), one frequency per fine cell.
class ChoiceFunction {
 public:
  ChoiceFunction(int resolution, std::vector<std::uint64_t> assignment);
  static ChoiceFunction constant(int resolution, std::uint64_t n);

  int resolution() const { return resolution_; }
  std::size_t size() const { return assignment_.size(); }
  std::uint64_t operator[](std::size_t cell) const { return assignment_[cell]; }
  std::span<const std::uint64_t> values() const { return assignment_; }

  /// Every value is a term of `seq`.
  bool in_range(const LacunarySequence& seq) const;

  bool operator==(const ChoiceFunction&) const = default;

 private:
  int resolution_;
  std::vector<std::uint64_t> assignment_;
};

}  // namespace walsh
