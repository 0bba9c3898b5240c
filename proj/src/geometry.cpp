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


#include "mopo/geometry.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "mopo/errors.hpp"
#include "mopo/linalg.hpp"
#include "mopo/lp.hpp"

namespace mopo {
namespace {

std::size_t check_points(const PointList& points) {
  if (points.empty()) throw DimensionMismatch("empty point list");
  const std::size_t d = points.front().size();
  if (d == 0) throw DimensionMismatch("points of dimension 0");
  for (const auto& p : points)
    if (p.size() != d) throw DimensionMismatch("points of different dimensions");
  return d;
}

void check_query(const RationalVector& q, std::size_t d) {
  if (q.size() != d) throw DimensionMismatch("query point has the wrong dimension");
}

RationalVector sub(const RationalVector& x, const RationalVector& y) {
  RationalVector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - y[i];
  return out;
}

// Scales (normal, offset) so that the normal is a primitive integer vector.
Hyperplane normalize(RationalVector normal, Rational offset) {
  RationalVector prim = primitive_direction(normal);
  for (std::size_t i = 0; i < normal.size(); ++i)
    if (sgn(normal[i]) != 0) {
      offset *= prim[i] / normal[i];
      break;
    }
  return {std::move(prim), std::move(offset)};
}

// Indices of the first occurrence of every distinct value.
std::vector<std::size_t> distinct(const PointList& points) {
  std::set<RationalVector> seen;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (seen.insert(points[i]).second) out.push_back(i);
  return out;
}

PointList select(const PointList& points, const std::vector<std::size_t>& idx) {
  PointList out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(points[i]);
  return out;
}

RationalVector combine(const PointList& points, const std::vector<std::size_t>& idx,
                       const std::vector<Rational>& coeffs) {
  RationalVector out(points.front().size());
  for (std::size_t k = 0; k < idx.size(); ++k)
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += coeffs[k] * points[idx[k]][j];
  return out;
}

// Calls f on every size-k subset of {0..n-1}.
template <typename F>
void for_each_subset(std::size_t n, std::size_t k, F&& f) {
  if (k > n) return;
  std::vector<std::size_t> pick(k);
  for (std::size_t i = 0; i < k; ++i) pick[i] = i;
  while (true) {
    f(pick);
    std::size_t i = k;
    while (i > 0 && pick[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++pick[i - 1];
    for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
}

}  // namespace

Rational Hyperplane::eval(const RationalVector& x) const { return dot(normal, x); }

bool Hull::contains(const RationalVector& x) const {
  for (const auto& e : equalities)
    if (e.eval(x) != e.offset) return false;
  for (const auto& f : facets)
    if (f.eval(x) > f.offset) return false;
  return true;
}

RationalVector LinearMap::apply(const RationalVector& x) const {
  RationalVector out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(dot(r, x));
  return out;
}

std::optional<std::vector<Rational>> hull_coefficients(const RationalVector& q,
                                                       const PointList& points) {
  const std::size_t d = check_points(points);
  check_query(q, d);
  const std::size_t n = points.size();
  LinearProgram lp(n);
  for (std::size_t k = 0; k < d; ++k) {
    RationalVector row(n);
    for (std::size_t i = 0; i < n; ++i) row[i] = points[i][k];
    lp.add_row(std::move(row), Sense::kEq, q[k]);
  }
  lp.add_row(RationalVector(n, Rational(1)), Sense::kEq, Rational(1));
  LpResult r = solve(lp);
  if (!r.feasible()) return std::nullopt;
  return r.x;
}

bool in_hull(const RationalVector& q, const PointList& points) {
  return hull_coefficients(q, points).has_value();
}

std::vector<std::size_t> extreme_points(const PointList& points) {
  check_points(points);
  const std::vector<std::size_t> uniq = distinct(points);
  std::set<RationalVector> extreme;
  for (std::size_t u : uniq) {
    PointList others;
    for (std::size_t v : uniq)
      if (v != u) others.push_back(points[v]);
    if (others.empty() || !in_hull(points[u], others)) extreme.insert(points[u]);
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (extreme.count(points[i])) out.push_back(i);
  return out;
}

Hull convex_hull(const PointList& points) {
  const std::size_t d = check_points(points);
  Hull h;
  h.points = points;
  h.vertices = extreme_points(points);
  const PointList all_verts = select(points, h.vertices);
  const PointList verts = select(all_verts, distinct(all_verts));
  const RationalVector& ref = verts.front();
  PointList dirs;
  for (const auto& v : verts) dirs.push_back(sub(v, ref));
  Matrix basis;
  for (std::size_t i : independent_subset(dirs)) basis.push_back(dirs[i]);
  h.dimension = basis.size();
  for (auto& e : null_space(basis, d)) {
    Rational off = dot(e, ref);
    h.equalities.push_back(normalize(std::move(e), std::move(off)));
  }
  const std::size_t k = basis.size();
  if (k == 0) return h;
  Matrix rref = basis;
  const std::vector<std::size_t> cols = row_reduce(rref);

  // Reduced coordinates: projection of v - ref onto the pivot columns.
  PointList reduced;
  for (const auto& v : dirs) {
    RationalVector y(k);
    for (std::size_t i = 0; i < k; ++i) y[i] = v[cols[i]];
    reduced.push_back(std::move(y));
  }
  std::set<std::pair<RationalVector, Rational>> found;
  for_each_subset(reduced.size(), k, [&](const std::vector<std::size_t>& pick) {
    Matrix rows;
    for (std::size_t j = 1; j < pick.size(); ++j)
      rows.push_back(sub(reduced[pick[j]], reduced[pick[0]]));
    auto ns = null_space(rows, k);
    if (ns.size() != 1) return;
    RationalVector n = ns[0];
    Rational c = dot(n, reduced[pick[0]]);
    bool le = true, ge = true;
    for (const auto& y : reduced) {
      int s = cmp(dot(n, y), c);
      le = le && s <= 0;
      ge = ge && s >= 0;
    }
    if (!le && !ge) return;
    if (!le) {
      for (auto& x : n) x = -x;
      c = -c;
    }
    Hyperplane f = normalize(std::move(n), std::move(c));
    found.emplace(std::move(f.normal), std::move(f.offset));
  });
  for (const auto& [n, c] : found) {
    RationalVector normal(d);
    for (std::size_t i = 0; i < k; ++i) normal[cols[i]] = n[i];
    Rational off = c + dot(normal, ref);
    h.facets.push_back(normalize(std::move(normal), std::move(off)));
  }
  return h;
}

std::vector<std::size_t> pareto_frontier(const std::vector<ExtRealVector>& points) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < points.size() && !dominated; ++j)
      dominated = points[j] != points[i] && dominates(points[j], points[i]);
    if (!dominated) out.push_back(i);
  }
  return out;
}

std::optional<Hyperplane> separate(const RationalVector& q, const PointList& points) {
  const std::size_t d = check_points(points);
  check_query(q, d);
  // Variables: normal (d, free), offset (free), margin t >= 0.
  const std::size_t nv = d + 2, c = d, t = d + 1;
  LinearProgram lp(nv);
  for (std::size_t j = 0; j <= d; ++j) lp.free[j] = true;
  for (const auto& p : points) {
    RationalVector row(nv);
    for (std::size_t j = 0; j < d; ++j) row[j] = p[j];
    row[c] = -1;
    lp.add_row(std::move(row), Sense::kLe, Rational(0));
  }
  {
    RationalVector row(nv);
    for (std::size_t j = 0; j < d; ++j) row[j] = q[j];
    row[c] = -1;
    row[t] = -1;
    lp.add_row(std::move(row), Sense::kGe, Rational(0));
  }
  for (std::size_t j = 0; j < d; ++j) {
    RationalVector row(nv);
    row[j] = 1;
    lp.add_row(row, Sense::kLe, Rational(1));
    lp.add_row(row, Sense::kGe, Rational(-1));
  }
  RationalVector bound(nv);
  bound[t] = 1;
  lp.add_row(bound, Sense::kLe, Rational(1));
  lp.objective = bound;
  lp.maximize = true;
  LpResult r = solve(lp);
  if (!r.feasible() || sgn(r.value) <= 0) return std::nullopt;
  RationalVector n = primitive_direction(RationalVector(r.x.begin(), r.x.begin() + d));
  Rational hi = dot(n, q), lo = dot(n, points.front());
  for (const auto& p : points) lo = std::max(lo, dot(n, p));
  return Hyperplane{std::move(n), (hi + lo) / 2};
}

LinearMap supporting_map(const RationalVector& q, const PointList& points) {
  const std::size_t d = check_points(points);
  check_query(q, d);
  if (!in_hull(q, points)) throw NotInHull("point " + to_string(to_ext(q)) + " is not in the hull");
  LinearMap map;
  std::vector<std::size_t> face(points.size());
  for (std::size_t i = 0; i < face.size(); ++i) face[i] = i;
  while (true) {
    const std::size_t n = face.size();
    // Relative interior test: q as a combination with every coefficient >= t > 0.
    LinearProgram rel(n + 1);
    for (std::size_t k = 0; k < d; ++k) {
      RationalVector row(n + 1);
      for (std::size_t i = 0; i < n; ++i) row[i] = points[face[i]][k];
      rel.add_row(std::move(row), Sense::kEq, q[k]);
    }
    RationalVector ones(n + 1, Rational(1));
    ones[n] = 0;
    rel.add_row(ones, Sense::kEq, Rational(1));
    for (std::size_t i = 0; i < n; ++i) {
      RationalVector row(n + 1);
      row[i] = 1;
      row[n] = -1;
      rel.add_row(std::move(row), Sense::kGe, Rational(0));
    }
    rel.objective.assign(n + 1, Rational(0));
    rel.objective[n] = 1;
    rel.maximize = true;
    LpResult rr = solve(rel);
    if (rr.feasible() && sgn(rr.value) > 0) break;

    Matrix dirs;
    RationalVector total(d);
    for (std::size_t i : face) {
      dirs.push_back(sub(points[i], q));
      for (std::size_t k = 0; k < d; ++k) total[k] += dirs.back()[k];
    }
    LinearProgram lp(d);
    lp.free.assign(d, true);
    for (auto& e : null_space(dirs, d)) lp.add_row(std::move(e), Sense::kEq, Rational(0));
    for (const auto& v : dirs) lp.add_row(v, Sense::kLe, Rational(0));
    lp.add_row(total, Sense::kEq, Rational(-1));
    std::vector<RationalVector> objectives;
    for (std::size_t k = 0; k < d; ++k) {
      RationalVector e(d);
      e[k] = 1;
      objectives.push_back(std::move(e));
    }
    LpResult w = solve_lexicographic(lp, objectives, false);
    if (!w.feasible()) throw SingularSystem("no supporting form at a boundary point");
    RationalVector row = primitive_direction(w.x);
    std::vector<std::size_t> next;
    for (std::size_t i : face)
      if (sgn(dot(row, sub(points[i], q))) == 0) next.push_back(i);
    map.rows.push_back(std::move(row));
    face = std::move(next);
  }
  return map;
}

Decomposition caratheodory(const RationalVector& q, const PointList& points) {
  const std::size_t d = check_points(points);
  check_query(q, d);
  auto alpha = hull_coefficients(q, points);
  if (!alpha) throw NotInHull("point " + to_string(to_ext(q)) + " is not in the hull");
  std::vector<std::size_t> idx;
  std::vector<Rational> coef;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (sgn((*alpha)[i]) > 0) {
      idx.push_back(i);
      coef.push_back((*alpha)[i]);
    }
  while (true) {
    // Affine dependencies among the support: sum l_i p_i = 0, sum l_i = 0.
    Matrix a(d + 1, RationalVector(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) {
      for (std::size_t k = 0; k < d; ++k) a[k][j] = points[idx[j]][k];
      a[d][j] = 1;
    }
    auto ns = null_space(a, idx.size());
    if (ns.empty()) break;
    RationalVector lambda = ns.front();
    if (std::none_of(lambda.begin(), lambda.end(), [](const Rational& x) { return sgn(x) > 0; }))
      for (auto& x : lambda) x = -x;
    std::optional<Rational> step;
    for (std::size_t j = 0; j < idx.size(); ++j)
      if (sgn(lambda[j]) > 0) {
        Rational r = coef[j] / lambda[j];
        if (!step || r < *step) step = r;
      }
    std::vector<std::size_t> idx2;
    std::vector<Rational> coef2;
    for (std::size_t j = 0; j < idx.size(); ++j) {
      Rational c = coef[j] - *step * lambda[j];
      if (sgn(c) > 0) {
        idx2.push_back(idx[j]);
        coef2.push_back(std::move(c));
      }
    }
    idx = std::move(idx2);
    coef = std::move(coef2);
  }
  Decomposition out{idx, coef, combine(points, idx, coef), false};
  return out;
}

Decomposition dominating_face_decomposition(const RationalVector& q, const PointList& points,
                                            bool allow_dominated) {
  const std::size_t d = check_points(points);
  check_query(q, d);
  if (!allow_dominated && !in_hull(q, points))
    throw NotInHull("point " + to_string(to_ext(q)) + " is not in the hull");
  const std::size_t n = points.size();
  // max beta such that some hull point dominates q + beta * 1.
  LinearProgram lp(n + 1);
  for (std::size_t k = 0; k < d; ++k) {
    RationalVector row(n + 1);
    for (std::size_t i = 0; i < n; ++i) row[i] = points[i][k];
    row[n] = -1;
    lp.add_row(std::move(row), Sense::kGe, q[k]);
  }
  RationalVector ones(n + 1, Rational(1));
  ones[n] = 0;
  lp.add_row(ones, Sense::kEq, Rational(1));
  lp.objective.assign(n + 1, Rational(0));
  lp.objective[n] = 1;
  lp.maximize = true;
  LpResult r = solve(lp);
  if (!r.feasible()) throw NotDominated("no hull point dominates " + to_string(to_ext(q)));
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  const RationalVector x = combine(points, all, RationalVector(r.x.begin(), r.x.begin() + n));

  const LinearMap l = supporting_map(x, points);
  const RationalVector lx = l.apply(x);
  std::vector<std::size_t> face;
  for (std::size_t i = 0; i < n; ++i)
    if (l.apply(points[i]) == lx) face.push_back(i);
  Decomposition local = caratheodory(x, select(points, face));
  Decomposition out;
  for (std::size_t j = 0; j < local.indices.size(); ++j) {
    out.indices.push_back(face[local.indices[j]]);
    out.coefficients.push_back(local.coefficients[j]);
  }
  out.recombined = local.recombined;
  out.dominates = out.recombined != q;
  return out;
}

std::optional<Decomposition> achievability_lp(const RationalVector& q, const PointList& points) {
  const std::size_t d = check_points(points);
  check_query(q, d);
  const std::size_t n = points.size();
  LinearProgram lp(n);
  for (std::size_t k = 0; k < d; ++k) {
    RationalVector row(n);
    for (std::size_t i = 0; i < n; ++i) row[i] = points[i][k];
    lp.add_row(std::move(row), Sense::kGe, q[k]);
  }
  lp.add_row(RationalVector(n, Rational(1)), Sense::kEq, Rational(1));
  if (!solve(lp).feasible()) return std::nullopt;
  return dominating_face_decomposition(q, points, true);
}

}  // namespace mopo
