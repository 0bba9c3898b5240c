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

#ifndef MOPO_MODEL_HPP_
#define MOPO_MODEL_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mopo/rational.hpp"

namespace mopo {

using StateId = std::size_t;
using ActionId = std::size_t;
using ObsId = std::size_t;

struct Transition {
  StateId target;
  Rational prob;
};

/// Successor distribution of an enabled (state, action) pair, sorted by
/// target. Entries may carry probability zero when the input listed them.
using Distribution = std::vector<Transition>;

/// One (state, action) pair of a play or history.
struct Step {
  StateId state;
  ActionId action;
  friend auto operator<=>(const Step&, const Step&) = default;
};

/// s0 a0 s1 ... a_{n-1} s_n. Invariant: states.size() == actions.size() + 1.
struct History {
  std::vector<StateId> states;
  std::vector<ActionId> actions;

  std::size_t length() const { return actions.size(); }
  StateId last() const { return states.back(); }
  friend bool operator==(const History&, const History&) = default;
};

/// Finite partially observable MDP with exact rational transitions.
///
/// Identifiers are strings; dense indices follow declaration order.
/// Immutable once constructed.
class Pomdp {
 public:
  /// `delta[s][a]` is empty when `a` is disabled at `s`. Structural
  /// problems (sizes, out of range indices) throw SchemaError; semantic
  /// invariants are left to validate().
  Pomdp() = default;
  Pomdp(std::vector<std::string> states, std::vector<std::string> actions,
        std::vector<std::string> observations, std::vector<ObsId> obs,
        std::vector<std::vector<std::optional<Distribution>>> delta);

  std::size_t num_states() const { return states_.size(); }
  std::size_t num_actions() const { return actions_.size(); }
  std::size_t num_observations() const { return observations_.size(); }

  const std::string& state_name(StateId s) const { return states_.at(s); }
  const std::string& action_name(ActionId a) const { return actions_.at(a); }
  const std::string& observation_name(ObsId z) const { return observations_.at(z); }
  const std::vector<std::string>& state_names() const { return states_; }
  const std::vector<std::string>& action_names() const { return actions_; }
  const std::vector<std::string>& observation_names() const { return observations_; }

  /// Throws UnknownState.
  StateId state_id(std::string_view name) const;
  /// Throws SchemaError.
  ActionId action_id(std::string_view name) const;
  ObsId observation_id(std::string_view name) const;
  std::optional<StateId> find_state(std::string_view name) const;

  ObsId observation(StateId s) const { return obs_.at(s); }
  bool enabled(StateId s, ActionId a) const { return delta_.at(s).at(a).has_value(); }
  const std::vector<ActionId>& enabled_actions(StateId s) const { return enabled_.at(s); }

  /// Throws DisabledAction.
  const Distribution& transition(StateId s, ActionId a) const;
  /// Probability of s' after (s, a); zero if disabled or not listed.
  Rational prob(StateId s, ActionId a, StateId next) const;

  /// States carrying observation z, in index order.
  const std::vector<StateId>& states_with_observation(ObsId z) const {
    return by_obs_.at(z);
  }
  /// Enabled actions shared by the states of z (those of its first state).
  /// Empty if no state has observation z.
  std::vector<ActionId> observation_actions(ObsId z) const;

  bool is_mdp() const;

  /// Smallest positive transition probability.
  Rational min_transition_probability() const;

  /// Successor states with positive probability.
  std::vector<StateId> successors(StateId s, ActionId a) const;
  std::vector<StateId> successors(StateId s) const;

  friend bool operator==(const Pomdp& x, const Pomdp& y);

 private:
  std::vector<std::string> states_, actions_, observations_;
  std::vector<ObsId> obs_;
  std::vector<std::vector<std::optional<Distribution>>> delta_;
  std::vector<std::vector<ActionId>> enabled_;
  std::vector<std::vector<StateId>> by_obs_;
  std::map<std::string, std::size_t, std::less<>> state_index_, action_index_, obs_index_;
};

/// Convenience construction for tests and tools.
class PomdpBuilder {
 public:
  /// Declares a state; observation defaults to the state name.
  PomdpBuilder& state(std::string name, std::optional<std::string> observation = {});
  PomdpBuilder& action(std::string name);
  /// Actions are declared implicitly in order of first use.
  PomdpBuilder& transition(const std::string& s, const std::string& a,
                           const std::vector<std::pair<std::string, std::string>>& dist);
  Pomdp build() const;

 private:
  std::vector<std::string> states_, actions_;
  std::vector<std::optional<std::string>> obs_;
  std::vector<std::tuple<std::string, std::string, std::vector<std::pair<std::string, Rational>>>>
      transitions_;
};

/// Rational weight per (state, action) pair; zero unless set.
class WeightFunction {
 public:
  WeightFunction() = default;
  WeightFunction(std::size_t num_states, std::size_t num_actions)
      : num_actions_(num_actions), values_(num_states * num_actions) {}
  static WeightFunction constant(const Pomdp& m, const Rational& v);

  const Rational& operator()(StateId s, ActionId a) const {
    return values_.at(s * num_actions_ + a);
  }
  void set(StateId s, ActionId a, Rational v) { values_.at(s * num_actions_ + a) = std::move(v); }
  bool empty() const { return values_.empty(); }
  std::size_t num_states() const { return num_actions_ ? values_.size() / num_actions_ : 0; }
  std::size_t num_actions() const { return num_actions_; }

  /// Smallest and largest value over enabled pairs.
  std::pair<Rational, Rational> range(const Pomdp& m) const;
  /// max |w| over enabled pairs.
  Rational max_abs(const Pomdp& m) const;
  bool nonnegative(const Pomdp& m) const;

  friend bool operator==(const WeightFunction&, const WeightFunction&) = default;

 private:
  std::size_t num_actions_ = 0;
  std::vector<Rational> values_;
};

struct Violation {
  std::string rule;
  std::string location;
  std::string message;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;
};

/// Checks every model invariant and lists each violation:
/// "distribution-range", "distribution-sum", "deadlock",
/// "obs-action-consistency", "empty-model".
ValidationReport validate(const Pomdp& m);

/// Parses the JSON model format. Throws ParseError or SchemaError.
Pomdp load_model(std::string_view text);

/// JSON text that load_model maps back to an equal Pomdp.
std::string serialize(const Pomdp& m);

/// States reachable from s0 (including s0), sorted. Throws UnknownState.
std::vector<StateId> reachable_states(const Pomdp& m, StateId s0);

/// Throws MalformedHistory unless h is shaped correctly and every step is an
/// enabled action followed by a positive-probability successor.
void check_history(const Pomdp& m, const History& h);

}  // namespace mopo

#endif  // MOPO_MODEL_HPP_
