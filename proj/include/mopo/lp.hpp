// Copyright 2026 The mopo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MOPO_LP_HPP_
#define MOPO_LP_HPP_

#include <cstddef>
#include <vector>

#include "mopo/rational.hpp"

namespace mopo {

enum class Sense { kLe, kEq, kGe };

/// Linear program over rationals. Variables are non-negative unless marked
/// free. An empty objective means a pure feasibility problem.
struct LinearProgram {
  struct Row {
    RationalVector coeffs;
    Sense sense;
    Rational rhs;
  };

  explicit LinearProgram(std::size_t num_vars) : num_vars(num_vars), free(num_vars, false) {}

  void add_row(RationalVector coeffs, Sense sense, Rational rhs) {
    rows.push_back({std::move(coeffs), sense, std::move(rhs)});
  }

  std::size_t num_vars;
  std::vector<bool> free;
  std::vector<Row> rows;
  RationalVector objective;
  bool maximize = false;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  Rational value;
  RationalVector x;

  bool feasible() const { return status == LpStatus::kOptimal; }
};

/// Two-phase primal simplex with Bland's rule on an exact dense tableau.
/// The returned point is a basic solution.
LpResult solve(const LinearProgram& lp);

/// Lexicographic optimisation: optimise objectives in turn, fixing each
/// optimum as an equality before the next one.
LpResult solve_lexicographic(LinearProgram lp, const std::vector<RationalVector>& objectives,
                             bool maximize);

}  // namespace mopo

#endif  // MOPO_LP_HPP_
