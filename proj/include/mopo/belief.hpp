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


// Belief supports: sets of states consistent with an observation history.

#ifndef MOPO_BELIEF_HPP_
#define MOPO_BELIEF_HPP_

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mopo/model.hpp"
#include "mopo/rational.hpp"
#include "mopo/strategy.hpp"

namespace mopo {

/// Sorted, non-empty, one observation.
using BeliefSupport = std::vector<StateId>;

/// States with observation z reachable in one a-step from b. Throws
/// DisabledAction when a is not enabled in b.
std::optional<BeliefSupport> belief_update(const Pomdp& m, const BeliefSupport& b, ActionId a,
                                           ObsId z);

struct BeliefEdge {
  std::size_t from;
  std::size_t to;
  ActionId action;
  ObsId observation;
};

struct BeliefGraph {
  std::vector<BeliefSupport> nodes;  // nodes[0] = {s0}
  std::vector<BeliefEdge> edges;

  std::optional<std::size_t> find(const BeliefSupport& b) const;
};

BeliefGraph belief_graph(const Pomdp& m, StateId s0);

/// k = 2^|S| as an exact integer.
mpz_class belief_bound(const Pomdp& m);

struct UniversalReach {
  bool holds = false;
  BeliefGraph graph;
  /// Per node: an action keeping the play safe forever, if one exists.
  std::vector<std::optional<ActionId>> safe_action;
  /// Belief strategy avoiding the target forever (when !holds).
  std::optional<FiniteMemoryStrategy> avoiding_strategy;
  mpz_class k;
  Rational eta;  // minimum transition probability
};

/// Whether every strategy reaches `target` almost surely from s0.
UniversalReach universal_as_reach(const Pomdp& m, StateId s0, const std::vector<bool>& target);

enum class ShortestPathClass { kUniversallySquareIntegrable, kNotUniversallyIntegrable };

const char* shortest_path_class_name(ShortestPathClass c);

struct ShortestPathVerdict {
  ShortestPathClass verdict;
  std::optional<FiniteMemoryStrategy> witness;
};

/// Applies to shortest path towards `target` under every weight function.
ShortestPathVerdict classify_shortest_path(const Pomdp& m, StateId s0,
                                           const std::vector<bool>& target);

struct ReachBoundRow {
  std::size_t ell;
  Rational exact;  // P(reach within ell * k steps)
  Rational bound;  // 1 - (1 - eta^k)^ell
  bool holds;
};

struct ReachBoundReport {
  mpz_class k;
  Rational eta;
  std::size_t belief_count = 0;
  std::vector<ReachBoundRow> rows;  // ell = 0..ell_max
  bool holds = true;
};

/// Exact reach probabilities against the lower bound. Throws
/// PreconditionViolated when the target is not reached almost surely under
/// every strategy, or when k is too large to unroll.
ReachBoundReport reach_bound_check(const Pomdp& m, const FiniteMemoryStrategy& s, StateId s0,
                                   const std::vector<bool>& target, std::size_t ell_max);

/// Probability of visiting the target within `steps` steps.
Rational reach_within(const Pomdp& m, const FiniteMemoryStrategy& s, StateId s0,
                      const std::vector<bool>& target, std::size_t steps);

std::string to_dot(const Pomdp& m, const BeliefGraph& g);

}  // namespace mopo

#endif  // MOPO_BELIEF_HPP_
