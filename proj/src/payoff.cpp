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

#include "mopo/payoff.hpp"

#include <algorithm>
#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/strong_components.hpp>

#include "mopo/errors.hpp"

namespace mopo {
namespace {

std::vector<bool> target_mask(const Pomdp& m, const std::vector<StateId>& target) {
  std::vector<bool> mask(m.num_states(), false);
  for (StateId s : target) {
    if (s >= m.num_states()) throw UnknownState("target state index out of range");
    mask[s] = true;
  }
  return mask;
}

void check_lambda(const Rational& lambda) {
  if (sgn(lambda) < 0 || lambda >= 1)
    throw SchemaError("discount factor " + to_string(lambda) + " is not in [0,1)");
}

bool is_prefix(const History& h, const History& of) {
  if (h.states.size() > of.states.size()) return false;
  return std::equal(h.states.begin(), h.states.end(), of.states.begin()) &&
         std::equal(h.actions.begin(), h.actions.end(), of.actions.begin());
}

}  // namespace

const char* kind_name(PayoffKind k) {
  switch (k) {
    case PayoffKind::kReach:
      return "reach";
    case PayoffKind::kBuchi:
      return "buchi";
    case PayoffKind::kDiscounted:
      return "discounted";
    case PayoffKind::kReachDiscounted:
      return "reach_discounted";
    case PayoffKind::kTotalReward:
      return "total_reward";
    case PayoffKind::kShortestPath:
      return "shortest_path";
  }
  return "?";
}

PayoffKind parse_kind(std::string_view name) {
  for (auto k : {PayoffKind::kReach, PayoffKind::kBuchi, PayoffKind::kDiscounted,
                 PayoffKind::kReachDiscounted, PayoffKind::kTotalReward,
                 PayoffKind::kShortestPath})
    if (name == kind_name(k)) return k;
  throw UnsupportedKind("unsupported payoff kind '" + std::string(name) + "'");
}

std::vector<StateId> PayoffSpec::target_states() const {
  std::vector<StateId> out;
  for (StateId s = 0; s < target.size(); ++s)
    if (target[s]) out.push_back(s);
  return out;
}

bool PayoffSpec::bounded() const {
  return kind == PayoffKind::kReach || kind == PayoffKind::kBuchi ||
         kind == PayoffKind::kDiscounted || kind == PayoffKind::kReachDiscounted;
}

PayoffSpec PayoffSpec::reach(const Pomdp& m, const std::vector<StateId>& target) {
  PayoffSpec p;
  p.kind = PayoffKind::kReach;
  p.target = target_mask(m, target);
  return p;
}

PayoffSpec PayoffSpec::buchi(const Pomdp& m, const std::vector<StateId>& target) {
  PayoffSpec p;
  p.kind = PayoffKind::kBuchi;
  p.target = target_mask(m, target);
  return p;
}

PayoffSpec PayoffSpec::discounted(const Pomdp& m, const Rational& lambda, WeightFunction w) {
  check_lambda(lambda);
  PayoffSpec p;
  p.kind = PayoffKind::kDiscounted;
  p.lambda = lambda;
  p.weights = std::move(w);
  check_payoff(m, p);
  return p;
}

PayoffSpec PayoffSpec::reach_discounted(const Pomdp& m, const std::vector<StateId>& target,
                                        const Rational& lambda, WeightFunction w) {
  check_lambda(lambda);
  PayoffSpec p;
  p.kind = PayoffKind::kReachDiscounted;
  p.target = target_mask(m, target);
  p.lambda = lambda;
  p.weights = std::move(w);
  check_payoff(m, p);
  return p;
}

PayoffSpec PayoffSpec::total_reward(const Pomdp& m, WeightFunction w) {
  PayoffSpec p;
  p.kind = PayoffKind::kTotalReward;
  p.weights = std::move(w);
  check_payoff(m, p);
  return p;
}

PayoffSpec PayoffSpec::shortest_path(const Pomdp& m, const std::vector<StateId>& target,
                                     WeightFunction w) {
  PayoffSpec p;
  p.kind = PayoffKind::kShortestPath;
  p.target = target_mask(m, target);
  p.weights = std::move(w);
  check_payoff(m, p);
  return p;
}

void check_payoff(const Pomdp& m, const PayoffSpec& p) {
  const bool needs_target = p.kind != PayoffKind::kDiscounted && p.kind != PayoffKind::kTotalReward;
  const bool needs_weights = p.kind != PayoffKind::kReach && p.kind != PayoffKind::kBuchi;
  if (needs_target && p.target.size() != m.num_states())
    throw DimensionMismatch(std::string(kind_name(p.kind)) + " payoff target does not fit the model");
  if (needs_weights && (p.weights.num_states() != m.num_states() ||
                        p.weights.num_actions() != m.num_actions()))
    throw DimensionMismatch(std::string(kind_name(p.kind)) + " payoff weights do not fit the model");
  if (p.kind == PayoffKind::kDiscounted || p.kind == PayoffKind::kReachDiscounted)
    check_lambda(p.lambda);
  if (p.kind == PayoffKind::kTotalReward && !p.weights.nonnegative(m))
    throw SchemaError("total reward needs non-negative weights; mixed signs have no defined expectation");
}

void check_payoffs(const Pomdp& m, const MultiPayoff& f) {
  if (f.empty()) throw SchemaError("a multi-payoff needs at least one dimension");
  for (const auto& p : f) check_payoff(m, p);
}

// ---------------------------------------------------------------- lassos

void check_lasso(const Pomdp& m, const LassoPlay& play) {
  if (play.cycle.empty()) throw MalformedLasso("lasso cycle is empty");
  std::vector<Step> steps = play.prefix;
  steps.insert(steps.end(), play.cycle.begin(), play.cycle.end());
  for (const auto& st : steps)
    if (st.state >= m.num_states() || st.action >= m.num_actions() || !m.enabled(st.state, st.action))
      throw MalformedLasso("lasso uses a disabled or unknown action");
  auto link = [&](const Step& from, StateId to) {
    if (sgn(m.prob(from.state, from.action, to)) <= 0)
      throw MalformedLasso("lasso takes a zero-probability transition from '" +
                           m.state_name(from.state) + "'");
  };
  for (std::size_t i = 0; i + 1 < steps.size(); ++i) link(steps[i], steps[i + 1].state);
  link(steps.back(), play.cycle.front().state);
}

ExtReal eval_play(const Pomdp& m, const PayoffSpec& p, const LassoPlay& play) {
  check_lasso(m, play);
  check_payoff(m, p);
  const auto& pre = play.prefix;
  const auto& cyc = play.cycle;
  auto w = [&](const Step& st) -> const Rational& { return p.weights(st.state, st.action); };
  auto discounted = [&]() {
    Rational head = 0, factor = 1;
    for (const auto& st : pre) {
      head += factor * w(st);
      factor *= p.lambda;
    }
    Rational loop = 0, lf = 1;
    for (const auto& st : cyc) {
      loop += lf * w(st);
      lf *= p.lambda;
    }
    return Rational(head + factor * loop / (1 - lf));
  };
  auto reached = [&]() {
    for (const auto& st : pre)
      if (p.in_target(st.state)) return true;
    for (const auto& st : cyc)
      if (p.in_target(st.state)) return true;
    return false;
  };
  switch (p.kind) {
    case PayoffKind::kReach:
      return ExtReal(reached() ? 1 : 0);
    case PayoffKind::kBuchi:
      for (const auto& st : cyc)
        if (p.in_target(st.state)) return ExtReal(1);
      return ExtReal(0);
    case PayoffKind::kDiscounted:
      return ExtReal(discounted());
    case PayoffKind::kReachDiscounted:
      return reached() ? ExtReal(discounted()) : ExtReal(0);
    case PayoffKind::kTotalReward: {
      for (const auto& st : cyc)
        if (sgn(w(st)) > 0) return ExtReal::pos_inf();
      Rational sum = 0;
      for (const auto& st : pre) sum += w(st);
      return ExtReal(sum);
    }
    case PayoffKind::kShortestPath: {
      Rational sum = 0;
      for (const auto* part : {&pre, &cyc})
        for (const auto& st : *part) {
          if (p.in_target(st.state)) return ExtReal(sum);
          sum += w(st);
        }
      return ExtReal::pos_inf();
    }
  }
  throw UnsupportedKind("unknown payoff kind");
}

// ---------------------------------------------------------------- generalized

void GeneralizedDiscounted::check() const {
  if (depth == 0) throw SchemaError("generalized discounted sum needs depth >= 1");
  if (sgn(lambda_star) < 0 || lambda_star >= 1)
    throw SchemaError("lambda* must lie in [0,1)");
  if (sgn(weight_bound) < 0) throw SchemaError("weight bound must be non-negative");
  auto check_lambda_value = [&](const Rational& l) {
    if (sgn(l) < 0 || l > lambda_star) throw SchemaError("discount factor exceeds lambda*");
  };
  auto check_weight = [&](const Rational& v) {
    if (abs(v) > weight_bound) throw SchemaError("weight exceeds the declared bound");
  };
  check_lambda_value(default_lambda);
  check_weight(default_weight);
  for (const auto& [k, v] : lambda) check_lambda_value(v);
  for (const auto& [k, v] : weight) check_weight(v);
}

namespace {

std::vector<Step> window(const std::vector<Step>& steps, std::size_t i, std::size_t depth) {
  std::size_t start = i + 1 >= depth ? i + 1 - depth : 0;
  return {steps.begin() + static_cast<std::ptrdiff_t>(start),
          steps.begin() + static_cast<std::ptrdiff_t>(i + 1)};
}

}  // namespace

Rational GeneralizedDiscounted::lambda_at(const std::vector<Step>& steps, std::size_t i) const {
  auto it = lambda.find(window(steps, i, depth));
  return it == lambda.end() ? default_lambda : it->second;
}

Rational GeneralizedDiscounted::weight_at(const std::vector<Step>& steps, std::size_t i) const {
  auto it = weight.find(window(steps, i, depth));
  return it == weight.end() ? default_weight : it->second;
}

Interval eval_play_truncated(const GeneralizedDiscounted& g, const std::vector<Step>& steps) {
  g.check();
  if (steps.empty()) throw SchemaError("truncated evaluation needs at least one step");
  Rational sum = 0, factor = 1;
  for (std::size_t r = 0; r < steps.size(); ++r) {
    sum += factor * g.weight_at(steps, r);
    factor *= g.lambda_at(steps, r);
  }
  Rational radius = 2 * g.weight_bound * power(g.lambda_star, steps.size()) / (1 - g.lambda_star);
  return {sum - radius, sum + radius};
}

// ---------------------------------------------------------------- cylinders

ClopenReport is_clopen_objective(const Pomdp& m, const CylinderUnion& obj) {
  for (const auto& h : obj.histories) check_history(m, h);
  ClopenReport report;
  const auto& hs = obj.histories;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    bool covered = false;
    for (std::size_t j = 0; j < hs.size() && !covered; ++j) {
      if (i == j || !is_prefix(hs[j], hs[i])) continue;
      // Equal histories: keep the first copy only.
      covered = hs[j].length() < hs[i].length() || j < i;
    }
    if (!covered) {
      report.normalized.histories.push_back(hs[i]);
      report.horizon = std::max(report.horizon, hs[i].length());
    }
  }
  return report;
}

std::optional<bool> cylinder_membership(const CylinderUnion& obj, const History& prefix) {
  bool undecided = false;
  for (const auto& h : obj.histories) {
    if (is_prefix(h, prefix)) return true;
    if (is_prefix(prefix, h)) undecided = true;
  }
  if (undecided) return std::nullopt;
  return false;
}

// ---------------------------------------------------------------- SCCs

SccDecomposition scc_decompose(const Pomdp& m) {
  using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::directedS>;
  const std::size_t n = m.num_states();
  Graph g(n);
  std::vector<bool> self_loop(n, false);
  for (StateId s = 0; s < n; ++s)
    for (StateId t : m.successors(s)) {
      boost::add_edge(s, t, g);
      if (t == s) self_loop[s] = true;
    }
  std::vector<int> raw(n);
  int count = n ? boost::strong_components(g, raw.data()) : 0;

  // Renumber components by smallest member for a stable order.
  std::vector<int> first(count, -1);
  for (StateId s = 0; s < n; ++s)
    if (first[raw[s]] < 0) first[raw[s]] = static_cast<int>(s);
  std::vector<int> order(count);
  for (int c = 0; c < count; ++c) order[c] = c;
  std::sort(order.begin(), order.end(), [&](int x, int y) { return first[x] < first[y]; });
  std::vector<std::size_t> renum(count);
  for (int i = 0; i < count; ++i) renum[order[i]] = i;

  SccDecomposition d;
  d.components.assign(count, {});
  d.component_of.assign(n, 0);
  for (StateId s = 0; s < n; ++s) {
    d.component_of[s] = renum[raw[s]];
    d.components[renum[raw[s]]].push_back(s);
  }
  d.cyclic.assign(count, false);
  d.successors.assign(count, {});
  for (std::size_t c = 0; c < d.components.size(); ++c)
    d.cyclic[c] = d.components[c].size() > 1 || self_loop[d.components[c][0]];
  for (StateId s = 0; s < n; ++s)
    for (StateId t : m.successors(s)) {
      std::size_t cs = d.component_of[s], ct = d.component_of[t];
      if (cs != ct) d.successors[cs].push_back(ct);
    }
  for (auto& succ : d.successors) {
    std::sort(succ.begin(), succ.end());
    succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
  }
  d.reaches.assign(count, std::vector<bool>(count, false));
  for (std::size_t c = 0; c < static_cast<std::size_t>(count); ++c) {
    std::vector<std::size_t> stack{c};
    d.reaches[c][c] = true;
    while (!stack.empty()) {
      std::size_t x = stack.back();
      stack.pop_back();
      for (std::size_t y : d.successors[x])
        if (!d.reaches[c][y]) {
          d.reaches[c][y] = true;
          stack.push_back(y);
        }
    }
  }
  return d;
}

bool check_prefix_independent_continuity(const Pomdp& m,
                                         const std::map<std::size_t, ExtReal>& coeffs) {
  SccDecomposition d = scc_decompose(m);
  const std::size_t k = d.components.size();
  for (const auto& [id, v] : coeffs)
    if (id >= k) throw UnknownScc("no SCC with id " + std::to_string(id));
  for (std::size_t c = 0; c < k; ++c)
    if (!coeffs.count(c)) throw UnknownScc("no coefficient for SCC " + std::to_string(c));
  for (std::size_t c = 0; c < k; ++c) {
    if (!d.cyclic[c]) continue;
    for (std::size_t c2 = 0; c2 < k; ++c2)
      if (d.cyclic[c2] && d.reaches[c][c2] && !(coeffs.at(c) == coeffs.at(c2))) return false;
  }
  return true;
}

}  // namespace mopo
