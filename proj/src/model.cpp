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

#include "mopo/model.hpp"

#include <algorithm>
#include <deque>

#include <nlohmann/json.hpp>
#include "mopo/errors.hpp"
#include "json_util.hpp"

namespace mopo {

using nlohmann::json;

namespace {

template <typename Map>
void index_names(const std::vector<std::string>& names, Map& index, const char* what) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!index.emplace(names[i], i).second)
      throw SchemaError(std::string("duplicate ") + what + " '" + names[i] + "'");
  }
}

}  // namespace

Pomdp::Pomdp(std::vector<std::string> states, std::vector<std::string> actions,
             std::vector<std::string> observations, std::vector<ObsId> obs,
             std::vector<std::vector<std::optional<Distribution>>> delta)
    : states_(std::move(states)),
      actions_(std::move(actions)),
      observations_(std::move(observations)),
      obs_(std::move(obs)),
      delta_(std::move(delta)) {
  const std::size_t n = states_.size(), na = actions_.size();
  index_names(states_, state_index_, "state");
  index_names(actions_, action_index_, "action");
  index_names(observations_, obs_index_, "observation");
  if (obs_.size() != n) throw SchemaError("obs must map every state");
  if (delta_.size() != n) throw SchemaError("transition table has the wrong number of rows");
  by_obs_.assign(observations_.size(), {});
  enabled_.assign(n, {});
  for (StateId s = 0; s < n; ++s) {
    if (obs_[s] >= observations_.size()) throw SchemaError("observation index out of range");
    by_obs_[obs_[s]].push_back(s);
    if (delta_[s].size() != na) throw SchemaError("transition table has the wrong number of columns");
    for (ActionId a = 0; a < na; ++a) {
      auto& d = delta_[s][a];
      if (!d) continue;
      enabled_[s].push_back(a);
      std::sort(d->begin(), d->end(),
                [](const Transition& x, const Transition& y) { return x.target < y.target; });
      Distribution merged;
      for (auto& t : *d) {
        if (t.target >= n) throw SchemaError("transition target out of range");
        if (!merged.empty() && merged.back().target == t.target)
          merged.back().prob += t.prob;
        else
          merged.push_back(t);
      }
      *d = std::move(merged);
    }
  }
}

StateId Pomdp::state_id(std::string_view name) const {
  auto it = state_index_.find(name);
  if (it == state_index_.end()) throw UnknownState("unknown state '" + std::string(name) + "'");
  return it->second;
}

std::optional<StateId> Pomdp::find_state(std::string_view name) const {
  auto it = state_index_.find(name);
  if (it == state_index_.end()) return std::nullopt;
  return it->second;
}

ActionId Pomdp::action_id(std::string_view name) const {
  auto it = action_index_.find(name);
  if (it == action_index_.end()) throw SchemaError("unknown action '" + std::string(name) + "'");
  return it->second;
}

ObsId Pomdp::observation_id(std::string_view name) const {
  auto it = obs_index_.find(name);
  if (it == obs_index_.end())
    throw SchemaError("unknown observation '" + std::string(name) + "'");
  return it->second;
}

const Distribution& Pomdp::transition(StateId s, ActionId a) const {
  const auto& d = delta_.at(s).at(a);
  if (!d) throw DisabledAction("action '" + actions_[a] + "' is disabled in state '" + states_[s] + "'");
  return *d;
}

Rational Pomdp::prob(StateId s, ActionId a, StateId next) const {
  const auto& d = delta_.at(s).at(a);
  if (!d) return 0;
  for (const auto& t : *d)
    if (t.target == next) return t.prob;
  return 0;
}

std::vector<ActionId> Pomdp::observation_actions(ObsId z) const {
  const auto& members = by_obs_.at(z);
  if (members.empty()) return {};
  return enabled_[members.front()];
}

bool Pomdp::is_mdp() const {
  for (const auto& members : by_obs_)
    if (members.size() > 1) return false;
  return true;
}

Rational Pomdp::min_transition_probability() const {
  std::optional<Rational> best;
  for (const auto& row : delta_)
    for (const auto& d : row) {
      if (!d) continue;
      for (const auto& t : *d)
        if (sgn(t.prob) > 0 && (!best || t.prob < *best)) best = t.prob;
    }
  return best.value_or(Rational(1));
}

std::vector<StateId> Pomdp::successors(StateId s, ActionId a) const {
  std::vector<StateId> out;
  for (const auto& t : transition(s, a))
    if (sgn(t.prob) > 0) out.push_back(t.target);
  return out;
}

std::vector<StateId> Pomdp::successors(StateId s) const {
  std::vector<StateId> out;
  for (ActionId a : enabled_.at(s))
    for (StateId t : successors(s, a)) out.push_back(t);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool operator==(const Pomdp& x, const Pomdp& y) {
  if (x.states_ != y.states_ || x.actions_ != y.actions_ ||
      x.observations_ != y.observations_ || x.obs_ != y.obs_)
    return false;
  for (StateId s = 0; s < x.num_states(); ++s)
    for (ActionId a = 0; a < x.num_actions(); ++a) {
      const auto &dx = x.delta_[s][a], &dy = y.delta_[s][a];
      if (dx.has_value() != dy.has_value()) return false;
      if (!dx) continue;
      if (dx->size() != dy->size()) return false;
      for (std::size_t i = 0; i < dx->size(); ++i)
        if ((*dx)[i].target != (*dy)[i].target || (*dx)[i].prob != (*dy)[i].prob) return false;
    }
  return true;
}

// ---------------------------------------------------------------- builder

PomdpBuilder& PomdpBuilder::state(std::string name, std::optional<std::string> observation) {
  states_.push_back(std::move(name));
  obs_.push_back(std::move(observation));
  return *this;
}

PomdpBuilder& PomdpBuilder::action(std::string name) {
  if (std::find(actions_.begin(), actions_.end(), name) == actions_.end())
    actions_.push_back(std::move(name));
  return *this;
}

PomdpBuilder& PomdpBuilder::transition(
    const std::string& s, const std::string& a,
    const std::vector<std::pair<std::string, std::string>>& dist) {
  action(a);
  std::vector<std::pair<std::string, Rational>> parsed;
  for (const auto& [t, p] : dist) parsed.emplace_back(t, parse_rational(p));
  transitions_.emplace_back(s, a, std::move(parsed));
  return *this;
}

Pomdp PomdpBuilder::build() const {
  std::map<std::string, std::size_t, std::less<>> sidx, aidx;
  for (std::size_t i = 0; i < states_.size(); ++i) sidx.emplace(states_[i], i);
  for (std::size_t i = 0; i < actions_.size(); ++i) aidx.emplace(actions_[i], i);
  std::vector<std::string> observations;
  std::vector<ObsId> obs;
  std::map<std::string, ObsId> oidx;
  for (std::size_t i = 0; i < states_.size(); ++i) {
    const std::string& z = obs_[i] ? *obs_[i] : states_[i];
    auto [it, fresh] = oidx.emplace(z, observations.size());
    if (fresh) observations.push_back(z);
    obs.push_back(it->second);
  }
  std::vector<std::vector<std::optional<Distribution>>> delta(
      states_.size(), std::vector<std::optional<Distribution>>(actions_.size()));
  auto lookup = [](const auto& idx, const std::string& name) {
    auto it = idx.find(name);
    if (it == idx.end()) throw SchemaError("unknown identifier '" + name + "'");
    return it->second;
  };
  for (const auto& [s, a, dist] : transitions_) {
    Distribution d;
    for (const auto& [t, p] : dist) d.push_back({lookup(sidx, t), p});
    delta[lookup(sidx, s)][lookup(aidx, a)] = std::move(d);
  }
  return Pomdp(states_, actions_, std::move(observations), std::move(obs), std::move(delta));
}

// ---------------------------------------------------------------- weights

WeightFunction WeightFunction::constant(const Pomdp& m, const Rational& v) {
  WeightFunction w(m.num_states(), m.num_actions());
  for (StateId s = 0; s < m.num_states(); ++s)
    for (ActionId a : m.enabled_actions(s)) w.set(s, a, v);
  return w;
}

std::pair<Rational, Rational> WeightFunction::range(const Pomdp& m) const {
  std::optional<Rational> lo, hi;
  for (StateId s = 0; s < m.num_states(); ++s)
    for (ActionId a : m.enabled_actions(s)) {
      const Rational& v = (*this)(s, a);
      if (!lo || v < *lo) lo = v;
      if (!hi || v > *hi) hi = v;
    }
  return {lo.value_or(Rational(0)), hi.value_or(Rational(0))};
}

Rational WeightFunction::max_abs(const Pomdp& m) const {
  auto [lo, hi] = range(m);
  Rational a = abs(lo), b = abs(hi);
  return a > b ? a : b;
}

bool WeightFunction::nonnegative(const Pomdp& m) const { return sgn(range(m).first) >= 0; }

// ---------------------------------------------------------------- validate

ValidationReport validate(const Pomdp& m) {
  ValidationReport r;
  auto add = [&r](std::string rule, std::string loc, std::string msg) {
    r.violations.push_back({std::move(rule), std::move(loc), std::move(msg)});
  };
  if (m.num_states() == 0) add("empty-model", "states", "model has no states");
  if (m.num_actions() == 0) add("empty-model", "actions", "model has no actions");
  for (StateId s = 0; s < m.num_states(); ++s) {
    const auto& en = m.enabled_actions(s);
    if (en.empty()) add("deadlock", m.state_name(s), "state has no enabled action");
    for (ActionId a : en) {
      std::string loc = m.state_name(s) + "," + m.action_name(a);
      Rational sum = 0;
      for (const auto& t : m.transition(s, a)) {
        if (sgn(t.prob) < 0 || t.prob > 1)
          add("distribution-range", loc + "->" + m.state_name(t.target),
              "probability " + to_string(t.prob) + " outside [0,1]");
        sum += t.prob;
      }
      if (sum != 1) add("distribution-sum", loc, "probabilities sum to " + to_string(sum));
    }
  }
  for (ObsId z = 0; z < m.num_observations(); ++z) {
    const auto& members = m.states_with_observation(z);
    for (std::size_t i = 1; i < members.size(); ++i)
      if (m.enabled_actions(members[i]) != m.enabled_actions(members[0]))
        add("obs-action-consistency", m.observation_name(z),
            "states '" + m.state_name(members[0]) + "' and '" + m.state_name(members[i]) +
                "' share an observation but enable different actions");
  }
  r.ok = r.violations.empty();
  return r;
}

// ---------------------------------------------------------------- JSON

Pomdp model_from_json(const json& doc) {
  if (!doc.is_object()) throw SchemaError("model document must be a JSON object");
  auto states = json_util::string_list(doc, "states", true);
  if (states.empty()) throw SchemaError("model must declare at least one state");
  auto actions = json_util::string_list(doc, "actions", true);
  std::map<std::string, std::size_t, std::less<>> sidx, aidx;
  index_names(states, sidx, "state");
  index_names(actions, aidx, "action");

  std::vector<std::string> observations;
  std::vector<ObsId> obs(states.size());
  const bool has_obs_list = doc.contains("observations");
  if (has_obs_list) observations = json_util::string_list(doc, "observations", true);
  if (doc.contains("obs")) {
    const json& o = doc.at("obs");
    if (!o.is_object()) throw SchemaError("'obs' must map states to observations");
    std::map<std::string, std::size_t, std::less<>> oidx;
    if (has_obs_list) index_names(observations, oidx, "observation");
    std::vector<bool> seen(states.size(), false);
    for (const auto& [sname, zval] : o.items()) {
      if (!zval.is_string()) throw SchemaError("observation of '" + sname + "' must be a string");
      auto sit = sidx.find(sname);
      if (sit == sidx.end()) throw SchemaError("'obs' names unknown state '" + sname + "'");
      const std::string z = zval.get<std::string>();
      auto zit = oidx.find(z);
      if (zit == oidx.end()) {
        if (has_obs_list) throw SchemaError("unknown observation '" + z + "'");
        zit = oidx.emplace(z, observations.size()).first;
        observations.push_back(z);
      }
      obs[sit->second] = zit->second;
      seen[sit->second] = true;
    }
    for (std::size_t s = 0; s < states.size(); ++s)
      if (!seen[s]) throw SchemaError("'obs' misses state '" + states[s] + "'");
  } else {
    if (has_obs_list && observations != states)
      throw SchemaError("'observations' given without 'obs'");
    observations = states;
    for (std::size_t s = 0; s < states.size(); ++s) obs[s] = s;
  }

  std::vector<std::vector<std::optional<Distribution>>> delta(
      states.size(), std::vector<std::optional<Distribution>>(actions.size()));
  if (!doc.contains("transitions") || !doc.at("transitions").is_object())
    throw SchemaError("missing object field 'transitions'");
  for (const auto& [sname, row] : doc.at("transitions").items()) {
    auto sit = sidx.find(sname);
    if (sit == sidx.end()) throw SchemaError("transitions name unknown state '" + sname + "'");
    if (!row.is_object()) throw SchemaError("transitions of '" + sname + "' must be an object");
    for (const auto& [aname, dist] : row.items()) {
      auto ait = aidx.find(aname);
      if (ait == aidx.end()) throw SchemaError("transitions name unknown action '" + aname + "'");
      if (!dist.is_object()) throw SchemaError("distribution of '" + sname + "," + aname + "' must be an object");
      Distribution d;
      for (const auto& [tname, p] : dist.items()) {
        auto tit = sidx.find(tname);
        if (tit == sidx.end()) throw SchemaError("distribution names unknown state '" + tname + "'");
        d.push_back({tit->second, json_util::rational(p)});
      }
      delta[sit->second][ait->second] = std::move(d);
    }
  }
  return Pomdp(std::move(states), std::move(actions), std::move(observations), std::move(obs),
               std::move(delta));
}

json model_to_json(const Pomdp& m) {
  json doc = json::object();
  doc["states"] = m.state_names();
  doc["actions"] = m.action_names();
  doc["observations"] = m.observation_names();
  json o = json::object();
  for (StateId s = 0; s < m.num_states(); ++s)
    o[m.state_name(s)] = m.observation_name(m.observation(s));
  doc["obs"] = std::move(o);
  json tr = json::object();
  for (StateId s = 0; s < m.num_states(); ++s) {
    json row = json::object();
    for (ActionId a : m.enabled_actions(s)) {
      json dist = json::object();
      for (const auto& t : m.transition(s, a)) dist[m.state_name(t.target)] = to_string(t.prob);
      row[m.action_name(a)] = std::move(dist);
    }
    tr[m.state_name(s)] = std::move(row);
  }
  doc["transitions"] = std::move(tr);
  return doc;
}

Pomdp load_model(std::string_view text) { return model_from_json(json_util::parse(text)); }

std::string serialize(const Pomdp& m) { return model_to_json(m).dump(2); }

std::vector<StateId> reachable_states(const Pomdp& m, StateId s0) {
  if (s0 >= m.num_states()) throw UnknownState("initial state index out of range");
  std::vector<bool> seen(m.num_states(), false);
  std::deque<StateId> queue{s0};
  seen[s0] = true;
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    for (StateId t : m.successors(s))
      if (!seen[t]) {
        seen[t] = true;
        queue.push_back(t);
      }
  }
  std::vector<StateId> out;
  for (StateId s = 0; s < m.num_states(); ++s)
    if (seen[s]) out.push_back(s);
  return out;
}

void check_history(const Pomdp& m, const History& h) {
  if (h.states.empty() || h.states.size() != h.actions.size() + 1)
    throw MalformedHistory("a history alternates states and actions and ends in a state");
  for (StateId s : h.states)
    if (s >= m.num_states()) throw MalformedHistory("history state index out of range");
  for (std::size_t i = 0; i < h.actions.size(); ++i) {
    StateId s = h.states[i];
    ActionId a = h.actions[i];
    if (a >= m.num_actions() || !m.enabled(s, a))
      throw MalformedHistory("history uses a disabled action at position " + std::to_string(i));
    if (sgn(m.prob(s, a, h.states[i + 1])) <= 0)
      throw MalformedHistory("history takes a zero-probability transition at position " +
                             std::to_string(i));
  }
}

}  // namespace mopo
