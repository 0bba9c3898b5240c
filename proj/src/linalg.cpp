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

#include "mopo/linalg.hpp"

#include "mopo/errors.hpp"

namespace mopo {

RationalVector solve_linear(Matrix a, RationalVector b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw DimensionMismatch("solve_linear: right-hand side length");
  for (const auto& row : a)
    if (row.size() != n) throw DimensionMismatch("solve_linear: matrix is not square");
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && sgn(a[piv][col]) == 0) ++piv;
    if (piv == n) throw SingularSystem("linear system is singular");
    if (piv != col) {
      std::swap(a[piv], a[col]);
      std::swap(b[piv], b[col]);
    }
    const Rational inv = 1 / a[col][col];
    for (std::size_t j = col; j < n; ++j)
      if (sgn(a[col][j]) != 0) a[col][j] *= inv;
    b[col] *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || sgn(a[r][col]) == 0) continue;
      const Rational f = a[r][col];
      for (std::size_t j = col; j < n; ++j)
        if (sgn(a[col][j]) != 0) a[r][j] -= f * a[col][j];
      b[r] -= f * b[col];
    }
  }
  return b;
}

std::vector<std::size_t> row_reduce(Matrix& a) {
  std::vector<std::size_t> pivots;
  if (a.empty()) return pivots;
  const std::size_t rows = a.size(), cols = a[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && sgn(a[piv][c]) == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    const Rational inv = 1 / a[r][c];
    for (std::size_t j = c; j < cols; ++j) a[r][j] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || sgn(a[i][c]) == 0) continue;
      const Rational f = a[i][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::size_t rank(Matrix a) { return row_reduce(a).size(); }

std::vector<RationalVector> null_space(const Matrix& a, std::size_t cols) {
  Matrix r = a;
  auto pivots = row_reduce(r);
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<RationalVector> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    RationalVector v(cols);
    v[f] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -r[i][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<std::size_t> independent_subset(const std::vector<RationalVector>& vectors) {
  std::vector<std::size_t> chosen;
  Matrix rows;
  std::size_t current = 0;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    rows.push_back(vectors[i]);
    std::size_t rk = rank(rows);
    if (rk > current) {
      current = rk;
      chosen.push_back(i);
    } else {
      rows.pop_back();
    }
  }
  return chosen;
}

Rational dot(const RationalVector& x, const RationalVector& y) {
  if (x.size() != y.size()) throw DimensionMismatch("dot: length mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

}  // namespace mopo
