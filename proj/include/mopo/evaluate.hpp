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

#ifndef MOPO_EVALUATE_HPP_
#define MOPO_EVALUATE_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mopo/model.hpp"
#include "mopo/payoff.hpp"
#include "mopo/rational.hpp"
#include "mopo/strategy.hpp"

namespace mopo {

/// Exact expectation of every dimension under a finite-memory strategy,
/// computed on the product chain. Throws UnsupportedKind, UnknownState.
ExtRealVector expected_payoff(const Pomdp& m, const FiniteMemoryStrategy& s, StateId s0,
                              const MultiPayoff& f);

/// Same, on an already built product chain.
ExtReal chain_expectation(const Pomdp& m, const MarkovChain& c, const PayoffSpec& p);

/// Reach probability of the lifted target from every chain state.
RationalVector chain_reach_probabilities(const MarkovChain& c, const std::vector<bool>& target);

struct PoolEntry {
  PureStrategy strategy;
  ExtRealVector value;
};

/// Records what a pool stands for, so results can say which strategies
/// were actually searched.
struct PoolInfo {
  std::string skeleton;
  std::size_t cap = 0;
  std::size_t size = 0;
};

struct Pool {
  PoolInfo info;
  std::vector<PoolEntry> entries;

  std::vector<ExtRealVector> vectors() const;
};

/// expected_payoff of every enumerated pure strategy, in enumeration order.
/// `jobs` > 1 spreads evaluation over threads; the order is preserved.
Pool pure_payoff_set(const Pomdp& m, StateId s0, const MultiPayoff& f,
                     const MemorySkeleton& skeleton, std::size_t cap = 100000,
                     std::size_t jobs = 1);

/// sum_i w_i v_i with 0 * inf = 0. Throws UndefinedExpectation when a
/// dimension would add +inf and -inf.
ExtRealVector mix_vectors(const std::vector<Rational>& weights,
                          const std::vector<ExtRealVector>& vectors);

/// Weighted sum of the members' expected payoffs.
ExtRealVector mixed_expected_payoff(const Pomdp& m, const FiniteMixture& mix, StateId s0,
                                    const MultiPayoff& f);

enum class Integrability {
  kUniversallyIntegrable,
  kUnambiguousOnly,  // every expectation defined, some infinite
  kNotUnambiguous,
  kUnknown,
};

const char* integrability_name(Integrability v);

struct IntegrabilityVerdict {
  Integrability verdict = Integrability::kUnknown;
  std::string witness;  // human-readable evidence
  std::optional<FiniteMemoryStrategy> witness_strategy;
};

/// Per dimension. Bounded kinds are universally integrable; shortest path
/// goes through the belief-support analysis; total reward through end
/// components. Throws UnsupportedKind.
std::vector<IntegrabilityVerdict> classify_integrability(const Pomdp& m, const MultiPayoff& f,
                                                         StateId s0);

/// Model tracking the weight accumulated before the first target visit.
///
/// States are (s, c) for accumulated cost c <= bound, plus (s, overflow).
/// After a target visit c stays frozen. Observations are those of the
/// original model, so strategies carry over unchanged.
struct CostUnrolling {
  Pomdp model;
  StateId initial = 0;
  std::vector<StateId> origin;            // unrolled state -> original state
  std::vector<std::optional<Rational>> cost;  // nullopt for overflow
  Rational bound;

  /// Same payoff on the unrolled model.
  PayoffSpec lift(const Pomdp& original, const PayoffSpec& p) const;
  /// Reach indicator for "target visited with accumulated cost <= bound".
  PayoffSpec within_bound(const std::vector<bool>& target) const;
};

/// Requires non-negative weights. Throws SchemaError otherwise.
CostUnrolling unroll_cost(const Pomdp& m, StateId s0, const std::vector<bool>& target,
                          const WeightFunction& w, const Rational& bound);

/// The same strategy re-targeted to an unrolled model (identical tables).
FiniteMemoryStrategy lift_strategy(const CostUnrolling& u, const FiniteMemoryStrategy& s);

}  // namespace mopo

#endif  // MOPO_EVALUATE_HPP_
