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

// Exact dense linear algebra over the rationals.

#ifndef MOPO_LINALG_HPP_
#define MOPO_LINALG_HPP_

#include <cstddef>
#include <vector>

#include "mopo/rational.hpp"

namespace mopo {

using Matrix = std::vector<RationalVector>;

/// Solves a x = b for square non-singular a. Throws SingularSystem.
RationalVector solve_linear(Matrix a, RationalVector b);

/// Reduced row echelon form in place; returns the pivot columns.
std::vector<std::size_t> row_reduce(Matrix& a);

std::size_t rank(Matrix a);

/// Basis of {x : a x = 0}; `cols` is needed when a has no rows.
std::vector<RationalVector> null_space(const Matrix& a, std::size_t cols);

/// Indices of a maximal linearly independent subset of the vectors, chosen
/// greedily in order.
std::vector<std::size_t> independent_subset(const std::vector<RationalVector>& vectors);

Rational dot(const RationalVector& x, const RationalVector& y);

}  // namespace mopo

#endif  // MOPO_LINALG_HPP_
