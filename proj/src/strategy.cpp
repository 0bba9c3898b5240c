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

#include "mopo/strategy.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <set>

#include "mopo/errors.hpp"

namespace mopo {

// ---------------------------------------------------------------- skeleton

MemorySkeleton::MemorySkeleton(std::size_t size, std::size_t initial,
                               std::size_t num_observations, std::size_t num_actions,
                               std::vector<std::size_t> table)
    : size_(size),
      initial_(initial),
      num_obs_(num_observations),
      num_actions_(num_actions),
      table_(std::move(table)) {
  if (size_ == 0) throw SchemaError("a memory skeleton needs at least one memory state");
  if (initial_ >= size_) throw SchemaError("initial memory out of range");
  if (table_.size() != size_ * num_obs_ * num_actions_)
    throw SchemaError("memory update table has the wrong size");
  for (std::size_t v : table_)
    if (v >= size_) throw SchemaError("memory update leaves the memory set");
}

MemorySkeleton MemorySkeleton::memoryless(const Pomdp& m) {
  MemorySkeleton k(1, 0, m.num_observations(), m.num_actions(),
                   std::vector<std::size_t>(m.num_observations() * m.num_actions(), 0));
  k.label_ = "memoryless";
  return k;
}

MemorySkeleton MemorySkeleton::counter(const Pomdp& m, std::size_t horizon) {
  const std::size_t size = horizon + 1, nz = m.num_observations(), na = m.num_actions();
  std::vector<std::size_t> table(size * nz * na);
  // Actions disabled under an observation never fire; keep them as self-loops
  // so the table is canonical and survives a JSON round-trip.
  for (std::size_t mem = 0; mem < size; ++mem)
    for (std::size_t z = 0; z < nz; ++z) {
      for (std::size_t a = 0; a < na; ++a) table[(mem * nz + z) * na + a] = mem;
      for (ActionId a : m.observation_actions(static_cast<ObsId>(z)))
        table[(mem * nz + z) * na + a] = std::min(mem + 1, horizon);
    }
  MemorySkeleton k(size, 0, nz, na, std::move(table));
  k.label_ = "counter:" + std::to_string(horizon);
  return k;
}

MemorySkeleton parse_skeleton(const Pomdp& m, std::string_view spec) {
  if (spec == "memoryless") return MemorySkeleton::memoryless(m);
  if (spec.rfind("counter:", 0) == 0) {
    std::string_view h = spec.substr(8);
    if (h.empty() || h.size() > 6 || h.find_first_not_of("0123456789") != std::string_view::npos)
      throw SchemaError("counter skeleton needs a horizon, e.g. counter:6");
    return MemorySkeleton::counter(m, std::stoul(std::string(h)));
  }
  throw SchemaError("unknown skeleton '" + std::string(spec) + "'");
}

// ---------------------------------------------------------------- strategy

FiniteMemoryStrategy::FiniteMemoryStrategy(MemorySkeleton skeleton,
                                           std::vector<ActionDistribution> act)
    : skeleton_(std::move(skeleton)), act_(std::move(act)) {
  if (act_.size() != skeleton_.size() * skeleton_.num_observations())
    throw SchemaError("act table has the wrong size");
  for (auto& law : act_) {
    std::sort(law.begin(), law.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    ActionDistribution cleaned;
    for (auto& [a, p] : law) {
      if (sgn(p) < 0) throw SchemaError("negative action probability");
      if (sgn(p) == 0) continue;
      if (!cleaned.empty() && cleaned.back().first == a)
        cleaned.back().second += p;
      else
        cleaned.emplace_back(a, p);
    }
    law = std::move(cleaned);
  }
}

Rational FiniteMemoryStrategy::prob(std::size_t mem, ObsId z, ActionId a) const {
  for (const auto& [b, p] : act(mem, z))
    if (b == a) return p;
  return 0;
}

bool FiniteMemoryStrategy::is_pure() const {
  for (const auto& law : act_)
    if (law.size() > 1) return false;
  return true;
}

std::optional<ActionId> FiniteMemoryStrategy::pure_action(std::size_t mem, ObsId z) const {
  const auto& law = act(mem, z);
  if (law.size() != 1) return std::nullopt;
  return law.front().first;
}

bool operator==(const FiniteMemoryStrategy& x, const FiniteMemoryStrategy& y) {
  return x.skeleton_ == y.skeleton_ && x.act_ == y.act_;
}

void check_strategy(const Pomdp& m, const FiniteMemoryStrategy& s) {
  const auto& k = s.skeleton();
  if (k.num_observations() != m.num_observations() || k.num_actions() != m.num_actions())
    throw SchemaError("strategy skeleton does not fit the model");
  for (std::size_t mem = 0; mem < k.size(); ++mem)
    for (ObsId z = 0; z < m.num_observations(); ++z) {
      auto enabled = m.observation_actions(z);
      const auto& law = s.act(mem, z);
      if (enabled.empty()) continue;
      Rational sum = 0;
      for (const auto& [a, p] : law) {
        if (!std::binary_search(enabled.begin(), enabled.end(), a))
          throw SchemaError("strategy plays action '" + m.action_name(a) +
                            "' which is disabled under observation '" + m.observation_name(z) + "'");
        sum += p;
      }
      if (sum != 1)
        throw SchemaError("action law at memory " + std::to_string(mem) + ", observation '" +
                          m.observation_name(z) + "' sums to " + to_string(sum));
    }
}

FiniteMemoryStrategy memoryless_pure(const Pomdp& m, const std::vector<ActionId>& per_observation) {
  if (per_observation.size() != m.num_observations())
    throw DimensionMismatch("one action per observation expected");
  std::vector<ActionDistribution> act(m.num_observations());
  for (ObsId z = 0; z < m.num_observations(); ++z) {
    auto enabled = m.observation_actions(z);
    if (enabled.empty()) continue;
    ActionId a = per_observation[z];
    if (!std::binary_search(enabled.begin(), enabled.end(), a)) a = enabled.front();
    act[z] = {{a, Rational(1)}};
  }
  return FiniteMemoryStrategy(MemorySkeleton::memoryless(m), std::move(act));
}

FiniteMemoryStrategy always(const Pomdp& m, ActionId a) {
  return memoryless_pure(m, std::vector<ActionId>(m.num_observations(), a));
}

// ---------------------------------------------------------------- mixtures

FiniteMixture::FiniteMixture(std::vector<PureStrategy> support, std::vector<Rational> weights) {
  if (support.size() != weights.size())
    throw DimensionMismatch("mixture needs one weight per support member");
  Rational sum = 0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (sgn(weights[i]) < 0) throw SchemaError("negative mixture weight");
    if (!support[i].is_pure()) throw SchemaError("mixture support members must be pure");
    sum += weights[i];
    if (sgn(weights[i]) == 0) continue;
    support_.push_back(std::move(support[i]));
    weights_.push_back(weights[i]);
  }
  if (support_.empty()) throw EmptySupport("mixture has no member with positive weight");
  if (sum != 1) throw SchemaError("mixture weights sum to " + to_string(sum));
}

FiniteMixture FiniteMixture::dirac(PureStrategy s) {
  return FiniteMixture({std::move(s)}, {Rational(1)});
}

// ---------------------------------------------------------------- chains

Rational MarkovChain::prob(std::size_t i, std::size_t j) const {
  Rational p = 0;
  for (const auto& e : edges[i])
    if (e.target == j) p += e.prob;
  return p;
}

MarkovChain product_chain(const Pomdp& m, const FiniteMemoryStrategy& s, StateId s0) {
  if (s0 >= m.num_states()) throw UnknownState("initial state index out of range");
  MarkovChain c;
  std::map<ChainState, std::size_t> index;
  auto intern = [&](ChainState cs) {
    auto [it, fresh] = index.emplace(cs, c.states.size());
    if (fresh) {
      c.states.push_back(cs);
      c.edges.emplace_back();
      c.action_law.emplace_back();
    }
    return it->second;
  };
  intern({s0, s.skeleton().initial()});
  for (std::size_t i = 0; i < c.states.size(); ++i) {
    const ChainState cs = c.states[i];
    const ObsId z = m.observation(cs.state);
    ActionDistribution law = s.act(cs.memory, z);
    for (const auto& [a, pa] : law) {
      const std::size_t mem = s.next_memory(cs.memory, z, a);
      for (const auto& t : m.transition(cs.state, a)) {
        if (sgn(t.prob) == 0) continue;
        std::size_t j = intern({t.target, mem});
        c.edges[i].push_back({j, a, pa * t.prob});
      }
    }
    c.action_law[i] = std::move(law);
  }
  return c;
}

Rational cylinder_prob(const Pomdp& m, const FiniteMemoryStrategy& s, StateId s0, const History& h) {
  check_history(m, h);
  if (h.states.front() != s0) return 0;
  Rational p = 1;
  std::size_t mem = s.skeleton().initial();
  for (std::size_t i = 0; i < h.actions.size(); ++i) {
    const StateId st = h.states[i];
    const ActionId a = h.actions[i];
    const ObsId z = m.observation(st);
    p *= s.prob(mem, z, a) * m.prob(st, a, h.states[i + 1]);
    if (sgn(p) == 0) return 0;
    mem = s.next_memory(mem, z, a);
  }
  return p;
}

// ---------------------------------------------------------------- enumeration

namespace {

struct ChoicePoint {
  std::size_t memory;
  ObsId obs;
  std::vector<ActionId> actions;
};

std::vector<ChoicePoint> choice_points(const Pomdp& m, const MemorySkeleton& k,
                                       std::optional<StateId> s0) {
  if (k.num_observations() != m.num_observations() || k.num_actions() != m.num_actions())
    throw SchemaError("skeleton does not fit the model");
  std::set<std::pair<StateId, std::size_t>> seen;
  std::deque<std::pair<StateId, std::size_t>> queue;
  auto push = [&](StateId s, std::size_t mem) {
    if (seen.emplace(s, mem).second) queue.emplace_back(s, mem);
  };
  if (s0) {
    if (*s0 >= m.num_states()) throw UnknownState("initial state index out of range");
    push(*s0, k.initial());
  } else {
    for (StateId s = 0; s < m.num_states(); ++s) push(s, k.initial());
  }
  std::set<std::pair<std::size_t, ObsId>> points;
  while (!queue.empty()) {
    auto [s, mem] = queue.front();
    queue.pop_front();
    const ObsId z = m.observation(s);
    if (m.enabled_actions(s).size() > 1) points.emplace(mem, z);
    for (ActionId a : m.enabled_actions(s))
      for (StateId t : m.successors(s, a)) push(t, k.next(mem, z, a));
  }
  std::vector<ChoicePoint> out;
  for (auto [mem, z] : points) out.push_back({mem, z, m.observation_actions(z)});
  return out;
}

}  // namespace

std::size_t count_pure(const Pomdp& m, const MemorySkeleton& skeleton, std::optional<StateId> s0) {
  std::size_t total = 1;
  for (const auto& cp : choice_points(m, skeleton, s0)) {
    if (total > std::numeric_limits<std::size_t>::max() / cp.actions.size())
      return std::numeric_limits<std::size_t>::max();
    total *= cp.actions.size();
  }
  return total;
}

std::vector<PureStrategy> enumerate_pure(const Pomdp& m, const MemorySkeleton& skeleton,
                                         std::optional<StateId> s0, std::size_t cap) {
  auto points = choice_points(m, skeleton, s0);
  const std::size_t total = count_pure(m, skeleton, s0);
  if (total > cap)
    throw PoolTooLarge("pure pool of " + (total == std::numeric_limits<std::size_t>::max()
                                              ? std::string("astronomically many")
                                              : std::to_string(total)) +
                       " strategies exceeds the cap of " + std::to_string(cap));
  const std::size_t nz = m.num_observations();
  std::vector<ActionDistribution> base(skeleton.size() * nz);
  for (std::size_t mem = 0; mem < skeleton.size(); ++mem)
    for (ObsId z = 0; z < nz; ++z) {
      auto enabled = m.observation_actions(z);
      if (!enabled.empty()) base[mem * nz + z] = {{enabled.front(), Rational(1)}};
    }
  std::vector<PureStrategy> out;
  out.reserve(total);
  std::vector<std::size_t> digit(points.size(), 0);
  while (true) {
    auto act = base;
    for (std::size_t i = 0; i < points.size(); ++i)
      act[points[i].memory * nz + points[i].obs] = {{points[i].actions[digit[i]], Rational(1)}};
    out.emplace_back(skeleton, std::move(act));
    // Odometer with the last choice point moving fastest.
    std::size_t i = points.size();
    while (i > 0) {
      --i;
      if (++digit[i] < points[i].actions.size()) break;
      digit[i] = 0;
      if (i == 0) return out;
    }
    if (points.empty()) return out;
  }
}

// ---------------------------------------------------------------- Kuhn

FiniteMemoryStrategy mixed_to_behavioural(const Pomdp& m, const FiniteMixture& mix) {
  if (mix.size() == 0) throw EmptySupport("mixture is empty");
  const std::size_t n = mix.size(), nz = m.num_observations(), na = m.num_actions();
  constexpr std::size_t kGone = std::numeric_limits<std::size_t>::max();
  // Memory node: member memories, kGone for members no longer consistent.
  using Node = std::vector<std::size_t>;
  std::map<Node, std::size_t> index;
  std::vector<Node> nodes;
  auto intern = [&](Node node) {
    auto [it, fresh] = index.emplace(node, nodes.size());
    if (fresh) nodes.push_back(std::move(node));
    return it->second;
  };
  Node init(n);
  for (std::size_t i = 0; i < n; ++i) init[i] = mix.support()[i].skeleton().initial();
  intern(init);

  std::vector<std::vector<ActionId>> obs_actions(nz);
  for (ObsId z = 0; z < nz; ++z) obs_actions[z] = m.observation_actions(z);

  std::vector<std::vector<std::size_t>> update;  // per node: z * na + a -> node
  std::vector<std::vector<ActionDistribution>> act;
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    std::vector<std::size_t> upd(nz * na, v);
    std::vector<ActionDistribution> laws(nz);
    for (ObsId z = 0; z < nz; ++z) {
      if (obs_actions[z].empty()) continue;
      const Node node = nodes[v];
      std::vector<std::optional<ActionId>> choice(n);
      Rational total = 0;
      std::map<ActionId, Rational> mass;
      for (std::size_t i = 0; i < n; ++i) {
        if (node[i] == kGone) continue;
        choice[i] = mix.support()[i].pure_action(node[i], z);
        if (!choice[i]) continue;
        total += mix.weights()[i];
        mass[*choice[i]] += mix.weights()[i];
      }
      ActionDistribution law;
      if (sgn(total) == 0) {
        Rational u(1, obs_actions[z].size());
        u.canonicalize();
        for (ActionId a : obs_actions[z]) law.emplace_back(a, u);
      } else {
        for (const auto& [a, w] : mass) law.emplace_back(a, Rational(w / total));
      }
      laws[z] = std::move(law);
      for (ActionId a : obs_actions[z]) {
        Node next(n, kGone);
        for (std::size_t i = 0; i < n; ++i)
          if (choice[i] && *choice[i] == a)
            next[i] = mix.support()[i].next_memory(node[i], z, a);
        upd[z * na + a] = intern(std::move(next));
      }
    }
    update.push_back(std::move(upd));
    act.push_back(std::move(laws));
  }
  std::vector<std::size_t> table;
  table.reserve(nodes.size() * nz * na);
  std::vector<ActionDistribution> flat;
  flat.reserve(nodes.size() * nz);
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    table.insert(table.end(), update[v].begin(), update[v].end());
    for (auto& law : act[v]) flat.push_back(std::move(law));
  }
  MemorySkeleton k(nodes.size(), 0, nz, na, std::move(table));
  k.set_label("kuhn");
  return FiniteMemoryStrategy(std::move(k), std::move(flat));
}

// ---------------------------------------------------------------- premetric

Rational strategy_premetric(const Pomdp& m, const FiniteMemoryStrategy& x,
                            const FiniteMemoryStrategy& y, std::size_t k,
                            std::optional<StateId> s0) {
  Rational best = 0;
  if (k == 0) return best;
  struct Node {
    StateId s;
    std::size_t mx, my;
    auto operator<=>(const Node&) const = default;
  };
  std::set<Node> seen;
  std::vector<Node> frontier;
  auto start = [&](StateId s) {
    Node n{s, x.skeleton().initial(), y.skeleton().initial()};
    if (seen.insert(n).second) frontier.push_back(n);
  };
  if (s0) {
    start(*s0);
  } else {
    for (StateId s = 0; s < m.num_states(); ++s) start(s);
  }
  // A node first reached at depth d stands for histories with d+1 states;
  // later visits only reach deeper histories with the same laws.
  for (std::size_t depth = 0; depth < k && !frontier.empty(); ++depth) {
    std::vector<Node> next;
    for (const Node& n : frontier) {
      const ObsId z = m.observation(n.s);
      std::map<ActionId, Rational> diff;
      for (const auto& [a, p] : x.act(n.mx, z)) diff[a] += p;
      for (const auto& [a, p] : y.act(n.my, z)) diff[a] -= p;
      Rational d2 = 0;
      for (const auto& [a, v] : diff) d2 += v * v;
      if (d2 > best) best = d2;
      if (depth + 1 == k) continue;
      for (ActionId a : m.enabled_actions(n.s))
        for (StateId t : m.successors(n.s, a)) {
          Node c{t, x.next_memory(n.mx, z, a), y.next_memory(n.my, z, a)};
          if (seen.insert(c).second) next.push_back(c);
        }
    }
    frontier = std::move(next);
  }
  return best;
}

}  // namespace mopo
