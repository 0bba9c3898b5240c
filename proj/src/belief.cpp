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


#include "mopo/belief.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "mopo/errors.hpp"

namespace mopo {

std::optional<BeliefSupport> belief_update(const Pomdp& m, const BeliefSupport& b, ActionId a,
                                           ObsId z) {
  std::set<StateId> next;
  for (StateId s : b) {
    if (!m.enabled(s, a))
      throw DisabledAction("action '" + m.action_name(a) + "' is disabled in state '" +
                           m.state_name(s) + "'");
    for (StateId t : m.successors(s, a))
      if (m.observation(t) == z) next.insert(t);
  }
  if (next.empty()) return std::nullopt;
  return BeliefSupport(next.begin(), next.end());
}

std::optional<std::size_t> BeliefGraph::find(const BeliefSupport& b) const {
  auto it = std::find(nodes.begin(), nodes.end(), b);
  if (it == nodes.end()) return std::nullopt;
  return static_cast<std::size_t>(it - nodes.begin());
}

BeliefGraph belief_graph(const Pomdp& m, StateId s0) {
  if (s0 >= m.num_states()) throw UnknownState("initial state index out of range");
  BeliefGraph g;
  std::map<BeliefSupport, std::size_t> index;
  g.nodes.push_back({s0});
  index[{s0}] = 0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const BeliefSupport b = g.nodes[i];
    for (ActionId a : m.enabled_actions(b.front())) {
      std::set<ObsId> seen;
      for (StateId s : b)
        for (StateId t : m.successors(s, a)) seen.insert(m.observation(t));
      for (ObsId z : seen) {
        auto next = belief_update(m, b, a, z);
        auto [it, fresh] = index.emplace(*next, g.nodes.size());
        if (fresh) g.nodes.push_back(*next);
        g.edges.push_back({i, it->second, a, z});
      }
    }
  }
  return g;
}

mpz_class belief_bound(const Pomdp& m) {
  mpz_class k = 1;
  k <<= m.num_states();
  return k;
}

UniversalReach universal_as_reach(const Pomdp& m, StateId s0, const std::vector<bool>& target) {
  if (target.size() != m.num_states()) throw DimensionMismatch("target does not fit the model");
  UniversalReach out;
  out.graph = belief_graph(m, s0);
  out.k = belief_bound(m);
  out.eta = m.min_transition_probability();
  const BeliefGraph& g = out.graph;
  const std::size_t n = g.nodes.size(), na = m.num_actions();

  // Greatest fixed point: a node stays safe if it avoids the target and some
  // action keeps every successor safe.
  std::vector<bool> safe(n);
  for (std::size_t i = 0; i < n; ++i)
    safe[i] = std::none_of(g.nodes[i].begin(), g.nodes[i].end(),
                           [&](StateId s) { return target[s]; });
  std::vector<std::vector<std::size_t>> out_edges(n);
  for (std::size_t e = 0; e < g.edges.size(); ++e) out_edges[g.edges[e].from].push_back(e);
  out.safe_action.assign(n, std::nullopt);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (!safe[i]) continue;
      std::optional<ActionId> pick;
      for (ActionId a : m.enabled_actions(g.nodes[i].front())) {
        bool ok = true;
        for (std::size_t e : out_edges[i])
          if (g.edges[e].action == a && !safe[g.edges[e].to]) ok = false;
        if (ok) {
          pick = a;
          break;
        }
      }
      out.safe_action[i] = pick;
      if (!pick) {
        safe[i] = false;
        changed = true;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!safe[i]) out.safe_action[i].reset();
  out.holds = !safe[0];
  if (out.holds) return out;

  // Memory 0 is the start; 1 + i * na + a records (previous belief i, last
  // action a). The current belief follows from the current observation.
  const std::size_t nz = m.num_observations(), size = 1 + n * na;
  std::map<std::tuple<std::size_t, ActionId, ObsId>, std::size_t> step;
  for (const auto& e : g.edges) step[{e.from, e.action, e.observation}] = e.to;
  auto current = [&](std::size_t mem, ObsId z) -> std::optional<std::size_t> {
    if (mem == 0) return z == m.observation(s0) ? std::optional<std::size_t>(0) : std::nullopt;
    auto it = step.find({(mem - 1) / na, (mem - 1) % na, z});
    if (it == step.end()) return std::nullopt;
    return it->second;
  };
  std::vector<std::size_t> table(size * nz * na, 0);
  std::vector<ActionDistribution> act(size * nz);
  for (std::size_t mem = 0; mem < size; ++mem)
    for (ObsId z = 0; z < nz; ++z) {
      auto node = current(mem, z);
      for (ActionId a = 0; a < na; ++a)
        if (node) table[(mem * nz + z) * na + a] = 1 + *node * na + a;
      auto enabled = m.observation_actions(z);
      if (enabled.empty()) continue;
      ActionId a = enabled.front();
      if (node && out.safe_action[*node]) a = *out.safe_action[*node];
      act[mem * nz + z] = {{a, Rational(1)}};
    }
  MemorySkeleton skel(size, 0, nz, na, std::move(table));
  skel.set_label("belief-avoid");
  out.avoiding_strategy = FiniteMemoryStrategy(std::move(skel), std::move(act));
  return out;
}

const char* shortest_path_class_name(ShortestPathClass c) {
  return c == ShortestPathClass::kUniversallySquareIntegrable ? "UniversallySquareIntegrable"
                                                               : "NotUniversallyIntegrable";
}

ShortestPathVerdict classify_shortest_path(const Pomdp& m, StateId s0,
                                           const std::vector<bool>& target) {
  UniversalReach r = universal_as_reach(m, s0, target);
  if (r.holds) return {ShortestPathClass::kUniversallySquareIntegrable, std::nullopt};
  return {ShortestPathClass::kNotUniversallyIntegrable, r.avoiding_strategy};
}

Rational reach_within(const Pomdp& m, const FiniteMemoryStrategy& s, StateId s0,
                      const std::vector<bool>& target, std::size_t steps) {
  if (target.size() != m.num_states()) throw DimensionMismatch("target does not fit the model");
  MarkovChain c = product_chain(m, s, s0);
  if (target[c.states[0].state]) return 1;
  RationalVector dist(c.size());
  dist[0] = 1;
  Rational reached = 0;
  for (std::size_t t = 0; t < steps; ++t) {
    RationalVector next(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (sgn(dist[i]) == 0) continue;
      for (const auto& e : c.edges[i]) {
        Rational mass = dist[i] * e.prob;
        if (target[c.states[e.target].state])
          reached += mass;
        else
          next[e.target] += mass;
      }
    }
    dist = std::move(next);
  }
  return reached;
}

ReachBoundReport reach_bound_check(const Pomdp& m, const FiniteMemoryStrategy& s, StateId s0,
                                   const std::vector<bool>& target, std::size_t ell_max) {
  UniversalReach ur = universal_as_reach(m, s0, target);
  if (!ur.holds)
    throw PreconditionViolated("some strategy avoids the target forever; the bound does not apply");
  if (m.num_states() > 16)
    throw PreconditionViolated("2^" + std::to_string(m.num_states()) +
                               " steps are too many to unroll exactly");
  ReachBoundReport rep;
  rep.k = ur.k;
  rep.eta = ur.eta;
  rep.belief_count = ur.graph.nodes.size();
  const unsigned long k = ur.k.get_ui();
  const Rational miss = 1 - power(ur.eta, k);
  for (std::size_t ell = 0; ell <= ell_max; ++ell) {
    ReachBoundRow row;
    row.ell = ell;
    row.exact = reach_within(m, s, s0, target, ell * k);
    row.bound = 1 - power(miss, ell);
    row.holds = row.exact >= row.bound;
    rep.holds = rep.holds && row.holds;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

std::string to_dot(const Pomdp& m, const BeliefGraph& g) {
  std::ostringstream out;
  out << "digraph beliefs {\n";
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    out << "  n" << i << " [label=\"{";
    for (std::size_t j = 0; j < g.nodes[i].size(); ++j)
      out << (j ? "," : "") << m.state_name(g.nodes[i][j]);
    out << "}\"];\n";
  }
  for (const auto& e : g.edges)
    out << "  n" << e.from << " -> n" << e.to << " [label=\"" << m.action_name(e.action) << "/"
        << m.observation_name(e.observation) << "\"];\n";
  out << "}\n";
  return out.str();
}

}  // namespace mopo
