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

// Exact convex geometry over small-dimensional rational point sets.

#ifndef MOPO_GEOMETRY_HPP_
#define MOPO_GEOMETRY_HPP_

#include <cstddef>
#include <optional>
#include <vector>

#include "mopo/rational.hpp"

namespace mopo {

using PointList = std::vector<RationalVector>;

/// The half-space <normal, x> <= offset.
struct Hyperplane {
  RationalVector normal;
  Rational offset;

  Rational eval(const RationalVector& x) const;
  friend bool operator==(const Hyperplane&, const Hyperplane&) = default;
};

struct Hull {
  PointList points;
  std::vector<std::size_t> vertices;  // indices into points
  std::vector<Hyperplane> facets;
  /// <normal, x> = offset for every point; empty when full-dimensional.
  std::vector<Hyperplane> equalities;
  std::size_t dimension = 0;  // affine dimension

  bool contains(const RationalVector& x) const;
};

/// Rows applied in order; compared lexicographically.
struct LinearMap {
  std::vector<RationalVector> rows;

  RationalVector apply(const RationalVector& x) const;
};

struct Decomposition {
  std::vector<std::size_t> indices;  // ascending
  std::vector<Rational> coefficients;
  RationalVector recombined;
  bool dominates = false;  // recombined >= target, not equal
};

/// Convex coefficients expressing q over the points, or nullopt.
std::optional<std::vector<Rational>> hull_coefficients(const RationalVector& q,
                                                       const PointList& points);
bool in_hull(const RationalVector& q, const PointList& points);

/// Throws DimensionMismatch on ragged or empty input.
Hull convex_hull(const PointList& points);

/// Index i is extreme iff points[i] is not in the hull of the points with a
/// different value. Duplicates of an extreme value are all reported.
std::vector<std::size_t> extreme_points(const PointList& points);

/// Points not strictly dominated component-wise. Equal vectors are kept.
std::vector<std::size_t> pareto_frontier(const std::vector<ExtRealVector>& points);

/// Strongly separating hyperplane with <n,q> > offset >= <n,p> for every p,
/// or nullopt when q lies in the hull. The normal is a primitive integer
/// vector.
std::optional<Hyperplane> separate(const RationalVector& q, const PointList& points);

/// Iterated supporting forms at q. Throws NotInHull.
LinearMap supporting_map(const RationalVector& q, const PointList& points);

/// At most d+1 points recombining exactly to q. Throws NotInHull.
Decomposition caratheodory(const RationalVector& q, const PointList& points);

/// At most d points on a proper face whose combination dominates q. With
/// `allow_dominated` q only has to be dominated by the hull. Throws
/// NotDominated (or NotInHull when q must lie in the hull).
Decomposition dominating_face_decomposition(const RationalVector& q, const PointList& points,
                                            bool allow_dominated = false);

/// Convex combination dominating q, support-reduced; nullopt if none.
std::optional<Decomposition> achievability_lp(const RationalVector& q, const PointList& points);

}  // namespace mopo

#endif  // MOPO_GEOMETRY_HPP_
