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

#include "mopo/evaluate.hpp"

#include <algorithm>
#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/strong_components.hpp>
#include <deque>
#include <future>
#include <map>

#include "mopo/belief.hpp"
#include "mopo/errors.hpp"
#include "mopo/linalg.hpp"

namespace mopo {
namespace {

RationalVector rewards(const MarkovChain& c, const WeightFunction& w) {
  RationalVector r(c.size());
  for (std::size_t i = 0; i < c.size(); ++i)
    for (const auto& [a, p] : c.action_law[i]) r[i] += p * w(c.states[i].state, a);
  return r;
}

std::vector<bool> lift_target(const MarkovChain& c, const std::vector<bool>& target) {
  std::vector<bool> out(c.size(), false);
  for (std::size_t i = 0; i < c.size(); ++i) {
    StateId s = c.states[i].state;
    out[i] = s < target.size() && target[s];
  }
  return out;
}

// States from which `goal` is reachable with positive probability.
std::vector<bool> can_reach(const MarkovChain& c, const std::vector<bool>& goal) {
  std::vector<std::vector<std::size_t>> pred(c.size());
  for (std::size_t i = 0; i < c.size(); ++i)
    for (const auto& e : c.edges[i]) pred[e.target].push_back(i);
  std::vector<bool> out = goal;
  std::deque<std::size_t> queue;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (goal[i]) queue.push_back(i);
  while (!queue.empty()) {
    std::size_t j = queue.front();
    queue.pop_front();
    for (std::size_t i : pred[j])
      if (!out[i]) {
        out[i] = true;
        queue.push_back(i);
      }
  }
  return out;
}

// Solves x_i = r_i + factor * sum_{j in vars} P_ij x_j for i in vars, with
// x_j = fixed_j outside vars. Returns x on all chain states.
RationalVector solve_restricted(const MarkovChain& c, const std::vector<bool>& vars,
                                const RationalVector& r, const Rational& factor,
                                const RationalVector& fixed) {
  std::vector<std::size_t> idx(c.size(), SIZE_MAX), order;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (vars[i]) {
      idx[i] = order.size();
      order.push_back(i);
    }
  const std::size_t n = order.size();
  Matrix a(n, RationalVector(n));
  RationalVector b(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = order[k];
    a[k][k] += 1;
    b[k] = r[i];
    for (const auto& e : c.edges[i]) {
      if (vars[e.target])
        a[k][idx[e.target]] -= factor * e.prob;
      else
        b[k] += factor * e.prob * fixed[e.target];
    }
  }
  RationalVector sol = solve_linear(std::move(a), std::move(b));
  RationalVector x = fixed;
  for (std::size_t k = 0; k < n; ++k) x[order[k]] = sol[k];
  return x;
}

// Bottom strongly connected components of the chain graph.
std::vector<std::vector<std::size_t>> bottom_sccs(const MarkovChain& c) {
  using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::directedS>;
  Graph g(c.size());
  for (std::size_t i = 0; i < c.size(); ++i)
    for (const auto& e : c.edges[i]) boost::add_edge(i, e.target, g);
  std::vector<int> comp(c.size());
  int count = c.size() ? boost::strong_components(g, comp.data()) : 0;
  std::vector<bool> leaves(count, false);
  for (std::size_t i = 0; i < c.size(); ++i)
    for (const auto& e : c.edges[i])
      if (comp[e.target] != comp[i]) leaves[comp[i]] = true;
  std::vector<std::vector<std::size_t>> out(count);
  for (std::size_t i = 0; i < c.size(); ++i) out[comp[i]].push_back(i);
  std::vector<std::vector<std::size_t>> bottom;
  for (int k = 0; k < count; ++k)
    if (!leaves[k]) bottom.push_back(std::move(out[k]));
  std::sort(bottom.begin(), bottom.end());
  return bottom;
}

}  // namespace

RationalVector chain_reach_probabilities(const MarkovChain& c, const std::vector<bool>& goal) {
  std::vector<bool> reach = can_reach(c, goal);
  std::vector<bool> vars(c.size());
  RationalVector fixed(c.size()), r(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    vars[i] = reach[i] && !goal[i];
    if (goal[i]) fixed[i] = 1;
  }
  // r_i collects the one-step mass into the goal through `fixed`.
  return solve_restricted(c, vars, r, Rational(1), fixed);
}

ExtReal chain_expectation(const Pomdp& m, const MarkovChain& c, const PayoffSpec& p) {
  check_payoff(m, p);
  const Rational one(1);
  switch (p.kind) {
    case PayoffKind::kReach:
      return ExtReal(chain_reach_probabilities(c, lift_target(c, p.target))[0]);
    case PayoffKind::kBuchi: {
      std::vector<bool> good(c.size(), false);
      for (const auto& comp : bottom_sccs(c)) {
        bool hits = false;
        for (std::size_t i : comp) hits = hits || p.in_target(c.states[i].state);
        if (hits)
          for (std::size_t i : comp) good[i] = true;
      }
      return ExtReal(chain_reach_probabilities(c, good)[0]);
    }
    case PayoffKind::kDiscounted: {
      std::vector<bool> all(c.size(), true);
      return ExtReal(solve_restricted(c, all, rewards(c, p.weights), p.lambda,
                                      RationalVector(c.size()))[0]);
    }
    case PayoffKind::kReachDiscounted: {
      std::vector<bool> all(c.size(), true);
      RationalVector r = rewards(c, p.weights);
      RationalVector ds = solve_restricted(c, all, r, p.lambda, RationalVector(c.size()));
      std::vector<bool> lifted = lift_target(c, p.target);
      if (lifted[0]) return ExtReal(ds[0]);
      RationalVector reach = chain_reach_probabilities(c, lifted);
      // y_i = E[DS * 1(never reach)] from non-target i.
      RationalVector ry(c.size());
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (lifted[i]) continue;
        for (const auto& e : c.edges[i])
          if (!lifted[e.target])
            ry[i] += e.prob * p.weights(c.states[i].state, e.action) * (one - reach[e.target]);
      }
      std::vector<bool> vars(c.size());
      for (std::size_t i = 0; i < c.size(); ++i) vars[i] = !lifted[i];
      RationalVector y = solve_restricted(c, vars, ry, p.lambda, RationalVector(c.size()));
      return ExtReal(Rational(ds[0] - y[0]));
    }
    case PayoffKind::kShortestPath: {
      std::vector<bool> lifted = lift_target(c, p.target);
      if (lifted[0]) return ExtReal(0);
      RationalVector reach = chain_reach_probabilities(c, lifted);
      if (reach[0] != 1) return ExtReal::pos_inf();
      // Every state met before the target reaches it almost surely.
      std::vector<bool> vars(c.size(), false);
      std::deque<std::size_t> queue{0};
      vars[0] = true;
      while (!queue.empty()) {
        std::size_t i = queue.front();
        queue.pop_front();
        for (const auto& e : c.edges[i])
          if (!lifted[e.target] && !vars[e.target]) {
            vars[e.target] = true;
            queue.push_back(e.target);
          }
      }
      return ExtReal(solve_restricted(c, vars, rewards(c, p.weights), one,
                                      RationalVector(c.size()))[0]);
    }
    case PayoffKind::kTotalReward: {
      RationalVector r = rewards(c, p.weights);
      std::vector<bool> transient(c.size(), true);
      for (const auto& comp : bottom_sccs(c))
        for (std::size_t i : comp) {
          if (sgn(r[i]) > 0) return ExtReal::pos_inf();
          transient[i] = false;
        }
      return ExtReal(solve_restricted(c, transient, r, one, RationalVector(c.size()))[0]);
    }
  }
  throw UnsupportedKind("unknown payoff kind");
}

ExtRealVector expected_payoff(const Pomdp& m, const FiniteMemoryStrategy& s, StateId s0,
                              const MultiPayoff& f) {
  check_payoffs(m, f);
  MarkovChain c = product_chain(m, s, s0);
  ExtRealVector out;
  out.reserve(f.size());
  for (const auto& p : f) out.push_back(chain_expectation(m, c, p));
  return out;
}

std::vector<ExtRealVector> Pool::vectors() const {
  std::vector<ExtRealVector> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.value);
  return out;
}

Pool pure_payoff_set(const Pomdp& m, StateId s0, const MultiPayoff& f,
                     const MemorySkeleton& skeleton, std::size_t cap, std::size_t jobs) {
  check_payoffs(m, f);
  std::vector<PureStrategy> strategies = enumerate_pure(m, skeleton, s0, cap);
  Pool pool;
  pool.info = {skeleton.label(), cap, strategies.size()};
  std::vector<ExtRealVector> values(strategies.size());
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < strategies.size(); i += stride)
      values[i] = expected_payoff(m, strategies[i], s0, f);
  };
  jobs = std::max<std::size_t>(1, std::min(jobs, strategies.size()));
  if (jobs == 1) {
    work(0, 1);
  } else {
    std::vector<std::future<void>> futures;
    for (std::size_t j = 0; j < jobs; ++j) futures.push_back(std::async(std::launch::async, work, j, jobs));
    for (auto& fut : futures) fut.get();
  }
  pool.entries.reserve(strategies.size());
  for (std::size_t i = 0; i < strategies.size(); ++i)
    pool.entries.push_back({std::move(strategies[i]), std::move(values[i])});
  return pool;
}

ExtRealVector mix_vectors(const std::vector<Rational>& weights,
                          const std::vector<ExtRealVector>& vectors) {
  if (weights.size() != vectors.size() || vectors.empty())
    throw DimensionMismatch("mix_vectors: one vector per weight expected");
  const std::size_t d = vectors.front().size();
  ExtRealVector out(d, ExtReal(0));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != d) throw DimensionMismatch("mix_vectors: ragged vectors");
    for (std::size_t k = 0; k < d; ++k) {
      try {
        out[k] += weights[i] * vectors[i][k];
      } catch (const UndefinedExpectation&) {
        throw UndefinedExpectation("dimension " + std::to_string(k) +
                                   " mixes +inf and -inf with positive weights");
      }
    }
  }
  return out;
}

ExtRealVector mixed_expected_payoff(const Pomdp& m, const FiniteMixture& mix, StateId s0,
                                    const MultiPayoff& f) {
  std::vector<ExtRealVector> vs;
  for (const auto& s : mix.support()) vs.push_back(expected_payoff(m, s, s0, f));
  return mix_vectors(mix.weights(), vs);
}

// ---------------------------------------------------------------- integrability

const char* integrability_name(Integrability v) {
  switch (v) {
    case Integrability::kUniversallyIntegrable:
      return "UniversallyIntegrable";
    case Integrability::kUnambiguousOnly:
      return "UniversallyUnambiguouslyIntegrableOnly";
    case Integrability::kNotUnambiguous:
      return "NotUnambiguous";
    case Integrability::kUnknown:
      return "Unknown";
  }
  return "?";
}

namespace {

// Maximal end components of the part of m reachable from s0, as a mask of
// (state, action) pairs kept inside some end component.
std::vector<std::vector<bool>> end_component_actions(const Pomdp& m, StateId s0) {
  const std::size_t n = m.num_states();
  std::vector<bool> alive(n, false);
  for (StateId s : reachable_states(m, s0)) alive[s] = true;
  std::vector<std::vector<bool>> keep(n, std::vector<bool>(m.num_actions(), false));
  for (StateId s = 0; s < n; ++s)
    if (alive[s])
      for (ActionId a : m.enabled_actions(s)) keep[s][a] = true;
  bool changed = true;
  while (changed) {
    changed = false;
    using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::directedS>;
    Graph g(n);
    for (StateId s = 0; s < n; ++s)
      for (ActionId a = 0; a < m.num_actions(); ++a)
        if (keep[s][a])
          for (StateId t : m.successors(s, a)) boost::add_edge(s, t, g);
    std::vector<int> comp(n);
    if (n) boost::strong_components(g, comp.data());
    for (StateId s = 0; s < n; ++s)
      for (ActionId a = 0; a < m.num_actions(); ++a) {
        if (!keep[s][a]) continue;
        for (StateId t : m.successors(s, a))
          if (!alive[t] || comp[t] != comp[s]) {
            keep[s][a] = false;
            changed = true;
            break;
          }
      }
    for (StateId s = 0; s < n; ++s) {
      if (!alive[s]) continue;
      bool any = false;
      for (ActionId a = 0; a < m.num_actions(); ++a) any = any || keep[s][a];
      if (!any) {
        alive[s] = false;
        changed = true;
      }
    }
  }
  return keep;
}

FiniteMemoryStrategy uniform_strategy(const Pomdp& m) {
  std::vector<ActionDistribution> act(m.num_observations());
  for (ObsId z = 0; z < m.num_observations(); ++z) {
    auto en = m.observation_actions(z);
    for (ActionId a : en) {
      Rational u(1, en.size());
      u.canonicalize();
      act[z].emplace_back(a, u);
    }
  }
  return FiniteMemoryStrategy(MemorySkeleton::memoryless(m), std::move(act));
}

}  // namespace

std::vector<IntegrabilityVerdict> classify_integrability(const Pomdp& m, const MultiPayoff& f,
                                                         StateId s0) {
  check_payoffs(m, f);
  std::vector<IntegrabilityVerdict> out;
  for (const auto& p : f) {
    IntegrabilityVerdict v;
    if (p.bounded()) {
      v.verdict = Integrability::kUniversallyIntegrable;
      v.witness = "bounded payoff";
    } else if (p.kind == PayoffKind::kShortestPath) {
      UniversalReach ur = universal_as_reach(m, s0, p.target);
      if (ur.holds) {
        v.verdict = Integrability::kUniversallyIntegrable;
        v.witness = "every strategy reaches the target almost surely";
      } else {
        v.verdict = Integrability::kUnambiguousOnly;
        v.witness = "a belief-based strategy avoids the target forever";
        v.witness_strategy = ur.avoiding_strategy;
      }
    } else if (p.kind == PayoffKind::kTotalReward) {
      auto keep = end_component_actions(m, s0);
      std::optional<std::pair<StateId, ActionId>> hot;
      for (StateId s = 0; s < m.num_states() && !hot; ++s)
        for (ActionId a : m.enabled_actions(s))
          if (keep[s][a] && sgn(p.weights(s, a)) > 0) {
            hot = std::make_pair(s, a);
            break;
          }
      if (!hot) {
        v.verdict = Integrability::kUniversallyIntegrable;
        v.witness = "no reachable end component carries a positive weight";
      } else if (m.is_mdp()) {
        v.verdict = Integrability::kUnambiguousOnly;
        v.witness = "end component through (" + m.state_name(hot->first) + "," +
                    m.action_name(hot->second) + ") collects positive weight forever";
      } else {
        // Observation-based strategies may be unable to stay in the end
        // component; try the uniform strategy before giving up.
        FiniteMemoryStrategy u = uniform_strategy(m);
        ExtReal val = chain_expectation(m, product_chain(m, u, s0), p);
        if (val.is_pos_inf()) {
          v.verdict = Integrability::kUnambiguousOnly;
          v.witness = "the uniform strategy collects positive weight forever";
          v.witness_strategy = u;
        } else {
          v.verdict = Integrability::kUnknown;
          v.witness = "positive end component exists but observation-based control is undecided";
        }
      }
    } else {
      throw UnsupportedKind("no integrability procedure for this kind");
    }
    out.push_back(std::move(v));
  }
  return out;
}

// ---------------------------------------------------------------- unrolling

CostUnrolling unroll_cost(const Pomdp& m, StateId s0, const std::vector<bool>& target,
                          const WeightFunction& w, const Rational& bound) {
  if (s0 >= m.num_states()) throw UnknownState("initial state index out of range");
  if (target.size() != m.num_states()) throw DimensionMismatch("target does not fit the model");
  using Key = std::pair<StateId, std::optional<Rational>>;
  auto key_less = [](const Key& x, const Key& y) {
    if (x.first != y.first) return x.first < y.first;
    if (x.second.has_value() != y.second.has_value()) return x.second.has_value();
    return x.second && *x.second < *y.second;
  };
  std::map<Key, std::size_t, decltype(key_less)> index(key_less);
  CostUnrolling u;
  u.bound = bound;
  std::vector<Key> keys;
  auto intern = [&](Key k) {
    auto [it, fresh] = index.emplace(k, keys.size());
    if (fresh) keys.push_back(k);
    return it->second;
  };
  intern({s0, Rational(0)});
  std::vector<std::vector<std::optional<Distribution>>> delta;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const Key k = keys[i];
    std::vector<std::optional<Distribution>> row(m.num_actions());
    for (ActionId a : m.enabled_actions(k.first)) {
      std::optional<Rational> next = k.second;
      if (next && !target[k.first]) {
        if (sgn(w(k.first, a)) < 0)
          throw SchemaError("cost unrolling needs non-negative weights");
        *next += w(k.first, a);
        if (*next > bound) next.reset();
      }
      Distribution d;
      for (const auto& t : m.transition(k.first, a))
        if (sgn(t.prob) > 0) d.push_back({intern({t.target, next}), t.prob});
      row[a] = std::move(d);
    }
    delta.push_back(std::move(row));
  }
  std::vector<std::string> names;
  std::vector<ObsId> obs;
  for (const auto& k : keys) {
    names.push_back(m.state_name(k.first) + "@" +
                    (k.second ? to_string(*k.second) : ">" + to_string(bound)));
    obs.push_back(m.observation(k.first));
    u.origin.push_back(k.first);
    u.cost.push_back(k.second);
  }
  u.model = Pomdp(std::move(names), m.action_names(), m.observation_names(), std::move(obs),
                  std::move(delta));
  u.initial = 0;
  return u;
}

PayoffSpec CostUnrolling::lift(const Pomdp& original, const PayoffSpec& p) const {
  check_payoff(original, p);
  PayoffSpec q = p;
  if (!p.target.empty()) {
    q.target.assign(model.num_states(), false);
    for (StateId s = 0; s < model.num_states(); ++s) q.target[s] = p.target[origin[s]];
  }
  if (!p.weights.empty()) {
    q.weights = WeightFunction(model.num_states(), model.num_actions());
    for (StateId s = 0; s < model.num_states(); ++s)
      for (ActionId a : model.enabled_actions(s)) q.weights.set(s, a, p.weights(origin[s], a));
  }
  return q;
}

PayoffSpec CostUnrolling::within_bound(const std::vector<bool>& target) const {
  PayoffSpec q;
  q.kind = PayoffKind::kReach;
  q.target.assign(model.num_states(), false);
  for (StateId s = 0; s < model.num_states(); ++s)
    q.target[s] = target.at(origin[s]) && cost[s].has_value();
  q.label = "P(cost <= " + to_string(bound) + ")";
  return q;
}

FiniteMemoryStrategy lift_strategy(const CostUnrolling& u, const FiniteMemoryStrategy& s) {
  check_strategy(u.model, s);
  return s;
}

}  // namespace mopo
