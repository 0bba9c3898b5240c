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

#ifndef MOPO_STRATEGY_HPP_
#define MOPO_STRATEGY_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mopo/model.hpp"
#include "mopo/rational.hpp"

namespace mopo {

/// Memory states 0..size-1 with a total update on (memory, observation,
/// action). The table is dense over all actions of the model.
class MemorySkeleton {
 public:
  MemorySkeleton() = default;
  MemorySkeleton(std::size_t size, std::size_t initial, std::size_t num_observations,
                 std::size_t num_actions, std::vector<std::size_t> table);

  /// One memory state.
  static MemorySkeleton memoryless(const Pomdp& m);
  /// Counts actions taken, saturating at `horizon`: memory 0..horizon.
  static MemorySkeleton counter(const Pomdp& m, std::size_t horizon);

  std::size_t size() const { return size_; }
  std::size_t initial() const { return initial_; }
  std::size_t next(std::size_t mem, ObsId z, ActionId a) const {
    return table_[(mem * num_obs_ + z) * num_actions_ + a];
  }
  std::size_t num_observations() const { return num_obs_; }
  std::size_t num_actions() const { return num_actions_; }
  /// Short description, e.g. "memoryless" or "counter:6".
  const std::string& label() const { return label_; }
  void set_label(std::string l) { label_ = std::move(l); }

  friend bool operator==(const MemorySkeleton& x, const MemorySkeleton& y) {
    return x.size_ == y.size_ && x.initial_ == y.initial_ && x.num_obs_ == y.num_obs_ &&
           x.num_actions_ == y.num_actions_ && x.table_ == y.table_;
  }

 private:
  std::size_t size_ = 0, initial_ = 0, num_obs_ = 0, num_actions_ = 0;
  std::vector<std::size_t> table_;
  std::string label_;
};

/// Sorted by action, positive probabilities, summing to 1.
using ActionDistribution = std::vector<std::pair<ActionId, Rational>>;

/// Mealy-style strategy: act(memory, observation) is an action law and
/// memory moves with the observed action.
class FiniteMemoryStrategy {
 public:
  FiniteMemoryStrategy() = default;
  /// `act` is indexed by memory * num_observations + observation.
  FiniteMemoryStrategy(MemorySkeleton skeleton, std::vector<ActionDistribution> act);

  const MemorySkeleton& skeleton() const { return skeleton_; }
  const ActionDistribution& act(std::size_t mem, ObsId z) const {
    return act_[mem * skeleton_.num_observations() + z];
  }
  Rational prob(std::size_t mem, ObsId z, ActionId a) const;
  std::size_t next_memory(std::size_t mem, ObsId z, ActionId a) const {
    return skeleton_.next(mem, z, a);
  }
  bool is_pure() const;
  /// The chosen action of a Dirac entry, nullopt otherwise.
  std::optional<ActionId> pure_action(std::size_t mem, ObsId z) const;
  const std::vector<ActionDistribution>& table() const { return act_; }

  friend bool operator==(const FiniteMemoryStrategy& x, const FiniteMemoryStrategy& y);

 private:
  MemorySkeleton skeleton_;
  std::vector<ActionDistribution> act_;
};

/// A FiniteMemoryStrategy whose every entry is a Dirac.
using PureStrategy = FiniteMemoryStrategy;

/// Throws SchemaError unless the strategy fits m: table sizes match, laws
/// sum to 1 and only use actions enabled under their observation.
void check_strategy(const Pomdp& m, const FiniteMemoryStrategy& s);

/// Strategy playing `a` whenever it is enabled, else the first enabled
/// action of the observation.
FiniteMemoryStrategy memoryless_pure(const Pomdp& m, const std::vector<ActionId>& per_observation);
FiniteMemoryStrategy always(const Pomdp& m, ActionId a);

/// Finitely many pure strategies with rational weights summing to 1.
/// Zero-weight entries are dropped on construction.
class FiniteMixture {
 public:
  FiniteMixture() = default;
  /// Throws EmptySupport if nothing with positive weight remains, and
  /// SchemaError if weights are negative or do not sum to 1.
  FiniteMixture(std::vector<PureStrategy> support, std::vector<Rational> weights);
  static FiniteMixture dirac(PureStrategy s);

  const std::vector<PureStrategy>& support() const { return support_; }
  const std::vector<Rational>& weights() const { return weights_; }
  std::size_t size() const { return support_.size(); }

 private:
  std::vector<PureStrategy> support_;
  std::vector<Rational> weights_;
};

struct ChainState {
  StateId state;
  std::size_t memory;
  friend auto operator<=>(const ChainState&, const ChainState&) = default;
};

struct ChainEdge {
  std::size_t target;
  ActionId action;
  Rational prob;  // act(a) * delta(s, a)(s')
};

/// Reachable part of the product of a model with a finite-memory strategy.
/// State 0 is the initial pair.
struct MarkovChain {
  std::vector<ChainState> states;
  std::vector<std::vector<ChainEdge>> edges;
  std::vector<ActionDistribution> action_law;

  std::size_t size() const { return states.size(); }
  /// Total probability of i -> j.
  Rational prob(std::size_t i, std::size_t j) const;
};

/// Throws UnknownState.
MarkovChain product_chain(const Pomdp& m, const FiniteMemoryStrategy& s, StateId s0);

/// Probability of the cylinder of h. Zero unless h starts in s0. Throws
/// MalformedHistory.
Rational cylinder_prob(const Pomdp& m, const FiniteMemoryStrategy& s, StateId s0, const History& h);

/// Every pure act table over the skeleton, in lexicographic table order.
///
/// Choice points are (memory, observation) pairs reachable from
/// (s0, initial) in the skeleton-times-model graph (from every state when
/// s0 is absent) that offer more than one action. Entries off the choice
/// points play the first enabled action. Throws PoolTooLarge if the count
/// exceeds `cap`.
std::vector<PureStrategy> enumerate_pure(const Pomdp& m, const MemorySkeleton& skeleton,
                                         std::optional<StateId> s0 = std::nullopt,
                                         std::size_t cap = 100000);

/// Number of tables enumerate_pure would produce (saturates at SIZE_MAX).
std::size_t count_pure(const Pomdp& m, const MemorySkeleton& skeleton,
                       std::optional<StateId> s0 = std::nullopt);

/// Outcome-equivalent behavioural strategy of a finite mixture. Memory
/// tracks each member's memory and the set of members consistent with the
/// observed actions. Histories no member explains get the uniform law.
/// Throws EmptySupport.
FiniteMemoryStrategy mixed_to_behavioural(const Pomdp& m, const FiniteMixture& mix);

/// Max over histories with at most k states of the squared Euclidean
/// distance between the two action laws. Histories start anywhere unless
/// s0 is given.
Rational strategy_premetric(const Pomdp& m, const FiniteMemoryStrategy& x,
                            const FiniteMemoryStrategy& y, std::size_t k,
                            std::optional<StateId> s0 = std::nullopt);

/// "memoryless", "counter:H". File skeletons go through io.hpp.
MemorySkeleton parse_skeleton(const Pomdp& m, std::string_view spec);

}  // namespace mopo

#endif  // MOPO_STRATEGY_HPP_
