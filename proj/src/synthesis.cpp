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


#include "mopo/synthesis.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "mopo/errors.hpp"
#include "mopo/geometry.hpp"
#include "mopo/lp.hpp"

namespace mopo {
namespace {

void check_vectors(const Pool& pool, std::size_t d) {
  for (const auto& e : pool.entries)
    if (e.value.size() != d) throw DimensionMismatch("pool vectors and target differ in length");
}

MixtureCertificate make_certificate(const Pool& pool, const std::vector<std::size_t>& members,
                                    const std::vector<Rational>& weights,
                                    const ExtRealVector& target, Relation rel) {
  MixtureCertificate c;
  std::vector<PureStrategy> support;
  std::vector<ExtRealVector> vectors;
  for (std::size_t i : members) {
    support.push_back(pool.entries[i].strategy);
    vectors.push_back(pool.entries[i].value);
  }
  c.mixture = FiniteMixture(std::move(support), weights);
  c.members = members;
  c.realized = mix_vectors(weights, vectors);
  c.target = target;
  c.relation = rel;
  c.pool = pool.info;
  return c;
}

bool compatible(const ExtRealVector& v, const ExtRealVector& target) {
  for (std::size_t j = 0; j < v.size(); ++j)
    if (!v[j].is_finite() && v[j] != target[j]) return false;
  return true;
}

// Convex weights over `points` keeping finite target dimensions within eps
// and pushing the others beyond +-M. Dimensions where `skip` holds are free.
// Among feasible weights, the total distance to the finite targets is minimal.
std::optional<std::vector<Rational>> band_lp(const PointList& points, const ExtRealVector& target,
                                             const Rational& eps, const Rational& big_m,
                                             const std::vector<bool>& skip) {
  const std::size_t n = points.size();
  if (n == 0) return std::nullopt;
  std::vector<std::size_t> finite_dims;
  for (std::size_t j = 0; j < target.size(); ++j)
    if (!skip[j] && target[j].is_finite()) finite_dims.push_back(j);
  // Variables: weights, then (over, under) deviation pairs.
  const std::size_t nv = n + 2 * finite_dims.size();
  LinearProgram lp(nv);
  lp.objective.assign(nv, Rational(0));
  for (std::size_t j = 0; j < target.size(); ++j) {
    if (skip[j] || target[j].is_finite()) continue;
    RationalVector row(nv);
    for (std::size_t i = 0; i < n; ++i) row[i] = points[i][j];
    if (target[j].is_pos_inf())
      lp.add_row(std::move(row), Sense::kGe, big_m);
    else
      lp.add_row(std::move(row), Sense::kLe, Rational(-big_m));
  }
  for (std::size_t k = 0; k < finite_dims.size(); ++k) {
    const std::size_t j = finite_dims[k], over = n + 2 * k, under = over + 1;
    RationalVector row(nv);
    for (std::size_t i = 0; i < n; ++i) row[i] = points[i][j];
    row[over] = -1;
    row[under] = 1;
    lp.add_row(std::move(row), Sense::kEq, target[j].value());
    RationalVector band(nv);
    band[over] = band[under] = 1;
    lp.add_row(std::move(band), Sense::kLe, eps);
    lp.objective[over] = lp.objective[under] = 1;
  }
  RationalVector ones(nv, Rational(0));
  for (std::size_t i = 0; i < n; ++i) ones[i] = 1;
  lp.add_row(std::move(ones), Sense::kEq, Rational(1));
  LpResult r = solve(lp);
  if (!r.feasible()) return std::nullopt;
  return std::vector<Rational>(r.x.begin(), r.x.begin() + n);
}

}  // namespace

const char* relation_name(Relation r) {
  switch (r) {
    case Relation::kEquals:
      return "equals";
    case Relation::kDominates:
      return "dominates";
    case Relation::kApproximates:
      return "approximates";
  }
  return "?";
}

MixtureCertificate achieve(const Pool& pool, const ExtRealVector& target, AchieveMode mode) {
  if (!all_finite(target)) throw SchemaError("achieve needs a finite target; see approximate");
  check_vectors(pool, target.size());
  const RationalVector q = finite_part(target);
  std::vector<std::size_t> rep;
  PointList points;
  std::set<RationalVector> seen;
  for (std::size_t i = 0; i < pool.entries.size(); ++i) {
    if (!all_finite(pool.entries[i].value)) continue;
    RationalVector p = finite_part(pool.entries[i].value);
    if (seen.insert(p).second) {
      rep.push_back(i);
      points.push_back(std::move(p));
    }
  }
  if (points.empty()) throw NotAchievable("no pool member has a finite payoff vector");
  Decomposition dec;
  if (mode == AchieveMode::kEquals) {
    if (!in_hull(q, points))
      throw NotAchievable(to_string(target) + " is not a mixture of the pool (" +
                          pool.info.skeleton + ")");
    dec = caratheodory(q, points);
  } else {
    auto found = achievability_lp(q, points);
    if (!found)
      throw NotAchievable(to_string(target) + " is not dominated by a mixture of the pool (" +
                          pool.info.skeleton + ")");
    dec = *found;
  }
  std::vector<std::size_t> members;
  for (std::size_t k : dec.indices) members.push_back(rep[k]);
  MixtureCertificate c = make_certificate(
      pool, members, dec.coefficients, target,
      mode == AchieveMode::kEquals ? Relation::kEquals : Relation::kDominates);
  if (mode == AchieveMode::kEquals ? c.realized != target : !dominates(c.realized, target))
    throw SingularSystem("achieve certificate failed verification");
  return c;
}

bool approximates(const ExtRealVector& realized, const ExtRealVector& target, const Rational& eps,
                  const Rational& big_m) {
  if (realized.size() != target.size()) return false;
  for (std::size_t j = 0; j < target.size(); ++j) {
    if (target[j].is_pos_inf()) {
      if (realized[j] < ExtReal(big_m)) return false;
    } else if (target[j].is_neg_inf()) {
      if (realized[j] > ExtReal(Rational(-big_m))) return false;
    } else {
      if (!realized[j].is_finite()) return false;
      if (abs(realized[j].value() - target[j].value()) > eps) return false;
    }
  }
  return true;
}

MixtureCertificate approximate(const Pool& pool, const ExtRealVector& target, const Rational& eps,
                               const Rational& big_m) {
  if (sgn(eps) <= 0) throw SchemaError("eps must be positive");
  const std::size_t d = target.size();
  check_vectors(pool, d);
  auto finish = [&](std::vector<std::size_t> members, std::vector<Rational> weights) {
    std::vector<std::size_t> m2;
    std::vector<Rational> w2;
    for (std::size_t k = 0; k < members.size(); ++k)
      if (sgn(weights[k]) > 0) {
        m2.push_back(members[k]);
        w2.push_back(weights[k]);
      }
    MixtureCertificate c = make_certificate(pool, m2, w2, target, Relation::kApproximates);
    c.eps = eps;
    c.big_m = big_m;
    return c;
  };

  // First members with finite vectors only, then also those whose
  // infinities agree with the target, infinities replaced by +-M.
  for (bool allow_infinite : {false, true}) {
    std::vector<std::size_t> comp;
    PointList points;
    for (std::size_t i = 0; i < pool.entries.size(); ++i) {
      const ExtRealVector& v = pool.entries[i].value;
      if (!compatible(v, target) || (!allow_infinite && !all_finite(v))) continue;
      RationalVector p(d);
      for (std::size_t j = 0; j < d; ++j)
        p[j] = v[j].is_finite() ? v[j].value() : (v[j].is_pos_inf() ? big_m : Rational(-big_m));
      comp.push_back(i);
      points.push_back(std::move(p));
    }
    if (auto w = band_lp(points, target, eps, big_m, std::vector<bool>(d, false))) {
      MixtureCertificate c = finish(comp, *w);
      if (approximates(c.realized, target, eps, big_m)) return c;
    }
  }

  // One witness per infinite target component, a small weight each, and a
  // finite mixture for the rest.
  std::vector<bool> infinite(d, false);
  std::vector<std::size_t> witnesses;
  for (std::size_t j = 0; j < d; ++j) {
    if (target[j].is_finite()) continue;
    infinite[j] = true;
    bool covered = false;
    for (std::size_t w : witnesses) covered = covered || pool.entries[w].value[j] == target[j];
    if (covered) continue;
    std::optional<std::size_t> found;
    for (std::size_t i = 0; i < pool.entries.size() && !found; ++i)
      if (pool.entries[i].value[j] == target[j] && compatible(pool.entries[i].value, target))
        found = i;
    if (!found)
      throw InfeasibleApproximation("no pool member attains " + target[j].str() +
                                    " on dimension " + std::to_string(j) + " (" +
                                    pool.info.skeleton + ")");
    witnesses.push_back(*found);
  }
  std::vector<std::size_t> fin;
  PointList fin_points;
  for (std::size_t i = 0; i < pool.entries.size(); ++i)
    if (all_finite(pool.entries[i].value)) {
      fin.push_back(i);
      fin_points.push_back(finite_part(pool.entries[i].value));
    }
  const Rational third = eps / 3;
  auto nu = witnesses.empty() ? std::nullopt : band_lp(fin_points, target, third, big_m, infinite);
  if (!nu)
    throw InfeasibleApproximation("target " + to_string(target) +
                                  " is not approximable from the pool (" + pool.info.skeleton +
                                  ")");
  RationalVector r(d);
  for (std::size_t i = 0; i < fin.size(); ++i)
    for (std::size_t j = 0; j < d; ++j) r[j] += (*nu)[i] * fin_points[i][j];
  const Rational limit = 2 * eps / 3;
  Rational eta(1, 2);
  for (int k = 1; k <= 256; ++k, eta /= 2) {
    if (eta * witnesses.size() > Rational(1, 2)) continue;
    bool ok = true;
    for (std::size_t j = 0; j < d && ok; ++j) {
      if (infinite[j]) continue;
      Rational spread = 0;
      for (std::size_t w : witnesses) spread += abs(pool.entries[w].value[j].value() - r[j]);
      ok = eta * spread <= limit;
    }
    if (!ok) continue;
    std::vector<std::size_t> members = witnesses;
    std::vector<Rational> weights(witnesses.size(), eta);
    const Rational rest = 1 - eta * witnesses.size();
    for (std::size_t i = 0; i < fin.size(); ++i) {
      members.push_back(fin[i]);
      weights.push_back(rest * (*nu)[i]);
    }
    MixtureCertificate c = finish(members, weights);
    if (approximates(c.realized, target, eps, big_m)) return c;
    break;
  }
  throw InfeasibleApproximation("target " + to_string(target) +
                                " is not approximable from the pool (" + pool.info.skeleton + ")");
}

LexResult lex_optimize(const std::vector<ExtRealVector>& vectors) {
  if (vectors.empty()) throw DimensionMismatch("lex_optimize on an empty pool");
  std::size_t best = 0;
  for (std::size_t i = 1; i < vectors.size(); ++i)
    if (lex_compare(vectors[i], vectors[best]) > 0) best = i;
  return {best, vectors[best]};
}

std::optional<std::size_t> check_pure_dominates_lex(const ExtRealVector& v,
                                                    const std::vector<ExtRealVector>& vectors) {
  if (vectors.empty()) return std::nullopt;
  LexResult r = lex_optimize(vectors);
  if (lex_compare(r.vector, v) >= 0) return r.winner;
  return std::nullopt;
}

std::vector<Rational> reduce_weights(const std::vector<Rational>& weights,
                                     const std::vector<ExtRealVector>& vectors) {
  const ExtRealVector realized = mix_vectors(weights, vectors);
  const std::size_t d = realized.size();
  std::vector<Rational> out(weights.size());
  std::vector<bool> fixed(weights.size(), false);
  std::vector<std::size_t> finite_dims;
  for (std::size_t j = 0; j < d; ++j) {
    if (realized[j].is_finite()) {
      finite_dims.push_back(j);
      continue;
    }
    bool covered = false;
    for (std::size_t i = 0; i < weights.size(); ++i)
      covered = covered || (fixed[i] && vectors[i][j] == realized[j]);
    if (covered) continue;
    for (std::size_t i = 0; i < weights.size(); ++i)
      if (sgn(weights[i]) > 0 && vectors[i][j] == realized[j]) {
        fixed[i] = true;
        out[i] = weights[i];
        break;
      }
  }
  std::vector<std::size_t> rest;
  Rational mass = 0;
  for (std::size_t i = 0; i < weights.size(); ++i)
    if (sgn(weights[i]) > 0 && !fixed[i]) {
      rest.push_back(i);
      mass += weights[i];
    }
  if (!rest.empty()) {
    if (finite_dims.empty()) {
      out[rest.front()] = mass;
    } else {
      PointList points;
      RationalVector q(finite_dims.size());
      for (std::size_t i : rest) {
        RationalVector p;
        for (std::size_t j : finite_dims) p.push_back(vectors[i][j].value());
        for (std::size_t k = 0; k < p.size(); ++k) q[k] += weights[i] / mass * p[k];
        points.push_back(std::move(p));
      }
      Decomposition dec = caratheodory(q, points);
      for (std::size_t k = 0; k < dec.indices.size(); ++k)
        out[rest[dec.indices[k]]] = mass * dec.coefficients[k];
    }
  }
  if (mix_vectors(out, vectors) != realized)
    throw SingularSystem("support reduction changed the mixed vector");
  return out;
}

FiniteMixture reduce_support(const FiniteMixture& mix, const std::vector<ExtRealVector>& vectors) {
  if (vectors.size() != mix.size()) throw DimensionMismatch("one vector per support member");
  std::vector<Rational> w = reduce_weights(mix.weights(), vectors);
  std::vector<PureStrategy> support;
  std::vector<Rational> weights;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (sgn(w[i]) > 0) {
      support.push_back(mix.support()[i]);
      weights.push_back(w[i]);
    }
  return FiniteMixture(std::move(support), std::move(weights));
}

}  // namespace mopo
