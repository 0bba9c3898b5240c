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

#ifndef MOPO_PAYOFF_HPP_
#define MOPO_PAYOFF_HPP_

#include <map>
#include <string>
#include <vector>

#include "mopo/model.hpp"
#include "mopo/rational.hpp"

namespace mopo {

enum class PayoffKind {
  kReach,            // 1[target visited]
  kBuchi,            // 1[target visited infinitely often]
  kDiscounted,       // sum_i lambda^i w(s_i, a_i)
  kReachDiscounted,  // 1[target visited] * discounted sum
  kTotalReward,      // sum_i w(s_i, a_i), w >= 0
  kShortestPath,     // weight accumulated before the first target visit, +inf if none
};

const char* kind_name(PayoffKind k);
/// Inverse of kind_name: "reach", "buchi", "discounted", "reach_discounted",
/// "total_reward", "shortest_path". Throws UnsupportedKind.
PayoffKind parse_kind(std::string_view name);

/// One payoff dimension. Build through the factories, which enforce the
/// invariants (lambda in [0,1), total-reward weights >= 0).
struct PayoffSpec {
  PayoffKind kind = PayoffKind::kReach;
  std::vector<bool> target;  // indexed by state; empty for target-free kinds
  Rational lambda;
  WeightFunction weights;
  std::string label;

  bool in_target(StateId s) const { return s < target.size() && target[s]; }
  std::vector<StateId> target_states() const;
  bool bounded() const;

  static PayoffSpec reach(const Pomdp& m, const std::vector<StateId>& target);
  static PayoffSpec buchi(const Pomdp& m, const std::vector<StateId>& target);
  static PayoffSpec discounted(const Pomdp& m, const Rational& lambda, WeightFunction w);
  static PayoffSpec reach_discounted(const Pomdp& m, const std::vector<StateId>& target,
                                     const Rational& lambda, WeightFunction w);
  static PayoffSpec total_reward(const Pomdp& m, WeightFunction w);
  static PayoffSpec shortest_path(const Pomdp& m, const std::vector<StateId>& target,
                                  WeightFunction w);
};

using MultiPayoff = std::vector<PayoffSpec>;

/// Throws SchemaError/DimensionMismatch if some dimension does not fit m.
void check_payoff(const Pomdp& m, const PayoffSpec& p);
void check_payoffs(const Pomdp& m, const MultiPayoff& f);

/// Ultimately periodic play: prefix steps, then the cycle repeated forever.
/// The last cycle step must lead back to the first cycle state, and the last
/// prefix step must lead to the first cycle state.
struct LassoPlay {
  std::vector<Step> prefix;
  std::vector<Step> cycle;
};

/// Throws MalformedLasso.
void check_lasso(const Pomdp& m, const LassoPlay& play);

/// Closed-form value of a payoff on a lasso. Throws MalformedLasso.
ExtReal eval_play(const Pomdp& m, const PayoffSpec& p, const LassoPlay& play);

/// Discounted sum whose factor and weight read a bounded window of the
/// history. Keys are the last `depth` steps (fewer near the start), ending
/// with the current (state, action). Missing keys use the defaults.
struct GeneralizedDiscounted {
  std::size_t depth = 1;
  std::map<std::vector<Step>, Rational> lambda;
  std::map<std::vector<Step>, Rational> weight;
  Rational default_lambda;
  Rational default_weight;
  Rational lambda_star;   // every factor is at most this, < 1
  Rational weight_bound;  // every |weight| is at most this

  /// Throws SchemaError if a bound is violated.
  void check() const;
  Rational lambda_at(const std::vector<Step>& steps, std::size_t i) const;
  Rational weight_at(const std::vector<Step>& steps, std::size_t i) const;
};

struct Interval {
  Rational lo;
  Rational hi;
};

/// Partial sum over the given N >= 1 steps widened by the tail bound
/// 2 W lambda*^N / (1 - lambda*). Every continuation's payoff lies inside.
Interval eval_play_truncated(const GeneralizedDiscounted& g, const std::vector<Step>& steps);

/// Objective given as a finite union of cylinders.
struct CylinderUnion {
  std::vector<History> histories;
};

struct ClopenReport {
  bool clopen = true;
  std::size_t horizon = 0;       // membership depends on this many transitions
  CylinderUnion normalized;      // nested cylinders removed, input order kept
};

/// Throws MalformedHistory.
ClopenReport is_clopen_objective(const Pomdp& m, const CylinderUnion& obj);

/// Whether the play with this finite prefix lies in the union, if already
/// decided by the prefix; nullopt otherwise.
std::optional<bool> cylinder_membership(const CylinderUnion& obj, const History& prefix);

struct SccDecomposition {
  /// Components sorted by their smallest state.
  std::vector<std::vector<StateId>> components;
  std::vector<std::size_t> component_of;
  /// True when the component carries a cycle (a play can stay in it).
  std::vector<bool> cyclic;
  /// Direct edges between distinct components.
  std::vector<std::vector<std::size_t>> successors;
  /// reaches[i][j]: component j reachable from component i (reflexive).
  std::vector<std::vector<bool>> reaches;
};

SccDecomposition scc_decompose(const Pomdp& m);

/// Continuity test for f = sum_i coeffs[i] * 1[Buchi(C_i)]: coefficients
/// must agree along reachability between cyclic components. Components
/// without a cycle never host the tail of a play and are not constrained.
/// Throws UnknownScc for ids out of range or missing coefficients.
bool check_prefix_independent_continuity(const Pomdp& m,
                                         const std::map<std::size_t, ExtReal>& coeffs);

}  // namespace mopo

#endif  // MOPO_PAYOFF_HPP_
