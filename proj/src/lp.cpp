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

#include "mopo/lp.hpp"

#include <optional>

#include "mopo/errors.hpp"

namespace mopo {
namespace {

// Dense tableau for: minimise c.x subject to A x = b, x >= 0, b >= 0.
class Tableau {
 public:
  Tableau(std::vector<RationalVector> rows, RationalVector rhs, std::vector<std::size_t> basis,
          std::size_t cols)
      : a_(std::move(rows)), b_(std::move(rhs)), basis_(std::move(basis)), cols_(cols) {}

  void set_objective(const RationalVector& c) {
    z_ = c;
    z_.resize(cols_);
    zval_ = 0;
    for (std::size_t i = 0; i < a_.size(); ++i) {
      const Rational cb = c[basis_[i]];
      if (sgn(cb) == 0) continue;
      for (std::size_t j = 0; j < cols_; ++j)
        if (sgn(a_[i][j]) != 0) z_[j] -= cb * a_[i][j];
      zval_ -= cb * b_[i];
    }
  }

  // Runs Bland's rule over columns with allowed[j]. Returns false when the
  // objective is unbounded below.
  bool optimise(const std::vector<bool>& allowed) {
    while (true) {
      std::optional<std::size_t> enter;
      for (std::size_t j = 0; j < cols_; ++j)
        if (allowed[j] && sgn(z_[j]) < 0) {
          enter = j;
          break;
        }
      if (!enter) return true;
      std::optional<std::size_t> leave;
      Rational best;
      for (std::size_t i = 0; i < a_.size(); ++i) {
        if (sgn(a_[i][*enter]) <= 0) continue;
        Rational ratio = b_[i] / a_[i][*enter];
        if (!leave || ratio < best || (ratio == best && basis_[i] < basis_[*leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (!leave) return false;
      pivot(*leave, *enter);
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    const Rational inv = 1 / a_[r][c];
    for (std::size_t j = 0; j < cols_; ++j)
      if (sgn(a_[r][j]) != 0) a_[r][j] *= inv;
    b_[r] *= inv;
    for (std::size_t i = 0; i < a_.size(); ++i) {
      if (i == r || sgn(a_[i][c]) == 0) continue;
      const Rational f = a_[i][c];
      for (std::size_t j = 0; j < cols_; ++j)
        if (sgn(a_[r][j]) != 0) a_[i][j] -= f * a_[r][j];
      b_[i] -= f * b_[r];
    }
    if (sgn(z_[c]) != 0) {
      const Rational f = z_[c];
      for (std::size_t j = 0; j < cols_; ++j)
        if (sgn(a_[r][j]) != 0) z_[j] -= f * a_[r][j];
      zval_ -= f * b_[r];
    }
    basis_[r] = c;
  }

  void drop_row(std::size_t r) {
    a_.erase(a_.begin() + static_cast<std::ptrdiff_t>(r));
    b_.erase(b_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
  }

  // Objective value c.x of the current basic solution.
  Rational value() const { return -zval_; }
  std::size_t rows() const { return a_.size(); }
  std::size_t basic(std::size_t i) const { return basis_[i]; }
  const Rational& entry(std::size_t i, std::size_t j) const { return a_[i][j]; }

  RationalVector solution() const {
    RationalVector x(cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) x[basis_[i]] = b_[i];
    return x;
  }

 private:
  std::vector<RationalVector> a_;
  RationalVector b_;
  std::vector<std::size_t> basis_;
  std::size_t cols_;
  RationalVector z_;
  Rational zval_;
};

}  // namespace

LpResult solve(const LinearProgram& lp) {
  const std::size_t n = lp.num_vars;
  if (lp.free.size() != n) throw DimensionMismatch("LP free-variable mask has the wrong size");
  if (!lp.objective.empty() && lp.objective.size() != n)
    throw DimensionMismatch("LP objective has the wrong length");
  for (const auto& row : lp.rows)
    if (row.coeffs.size() != n) throw DimensionMismatch("LP row has the wrong length");

  // Column layout: structural (free vars split in two), slacks, artificials.
  std::vector<std::size_t> pos(n), neg(n, SIZE_MAX);
  std::size_t cols = 0;
  for (std::size_t j = 0; j < n; ++j) {
    pos[j] = cols++;
    if (lp.free[j]) neg[j] = cols++;
  }
  const std::size_t structural = cols;
  const std::size_t m = lp.rows.size();
  std::vector<int> sign(m, 1);
  std::vector<Sense> sense(m);
  std::size_t slacks = 0, artificials = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sense[i] = lp.rows[i].sense;
    if (sgn(lp.rows[i].rhs) < 0) {
      sign[i] = -1;
      if (sense[i] == Sense::kLe)
        sense[i] = Sense::kGe;
      else if (sense[i] == Sense::kGe)
        sense[i] = Sense::kLe;
    }
    if (sense[i] != Sense::kEq) ++slacks;
    if (sense[i] != Sense::kLe) ++artificials;
  }
  const std::size_t total = structural + slacks + artificials;
  std::vector<RationalVector> a(m, RationalVector(total));
  RationalVector b(m);
  std::vector<std::size_t> basis(m);
  std::size_t next_slack = structural, next_art = structural + slacks;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& row = lp.rows[i];
    for (std::size_t j = 0; j < n; ++j) {
      if (sgn(row.coeffs[j]) == 0) continue;
      a[i][pos[j]] = sign[i] * row.coeffs[j];
      if (lp.free[j]) a[i][neg[j]] = -a[i][pos[j]];
    }
    b[i] = sign[i] * row.rhs;
    if (sense[i] == Sense::kLe) {
      a[i][next_slack] = 1;
      basis[i] = next_slack++;
    } else {
      if (sense[i] == Sense::kGe) a[i][next_slack++] = -1;
      a[i][next_art] = 1;
      basis[i] = next_art++;
    }
  }

  Tableau t(std::move(a), std::move(b), std::move(basis), total);
  std::vector<bool> allowed(total, true);
  LpResult result;
  if (artificials > 0) {
    RationalVector c1(total);
    for (std::size_t j = structural + slacks; j < total; ++j) c1[j] = 1;
    t.set_objective(c1);
    t.optimise(allowed);
    if (sgn(t.value()) != 0) return result;  // infeasible
    for (std::size_t i = 0; i < t.rows();) {
      if (t.basic(i) < structural + slacks) {
        ++i;
        continue;
      }
      std::optional<std::size_t> col;
      for (std::size_t j = 0; j < structural + slacks && !col; ++j)
        if (sgn(t.entry(i, j)) != 0) col = j;
      if (col) {
        t.pivot(i, *col);
        ++i;
      } else {
        t.drop_row(i);  // redundant constraint
      }
    }
    for (std::size_t j = structural + slacks; j < total; ++j) allowed[j] = false;
  }

  RationalVector c(total);
  for (std::size_t j = 0; j < n && !lp.objective.empty(); ++j) {
    Rational cj = lp.maximize ? Rational(-lp.objective[j]) : lp.objective[j];
    c[pos[j]] = cj;
    if (lp.free[j]) c[neg[j]] = -cj;
  }
  t.set_objective(c);
  if (!t.optimise(allowed)) {
    result.status = LpStatus::kUnbounded;
    return result;
  }
  RationalVector xs = t.solution();
  result.status = LpStatus::kOptimal;
  result.x.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    result.x[j] = xs[pos[j]];
    if (lp.free[j]) result.x[j] -= xs[neg[j]];
  }
  result.value = lp.objective.empty() ? Rational(0)
                                      : (lp.maximize ? Rational(-t.value()) : t.value());
  return result;
}

LpResult solve_lexicographic(LinearProgram lp, const std::vector<RationalVector>& objectives,
                             bool maximize) {
  LpResult last;
  if (objectives.empty()) {
    lp.objective.clear();
    return solve(lp);
  }
  for (const auto& obj : objectives) {
    lp.objective = obj;
    lp.maximize = maximize;
    last = solve(lp);
    if (!last.feasible()) return last;
    lp.add_row(obj, Sense::kEq, last.value);
  }
  return last;
}

}  // namespace mopo
