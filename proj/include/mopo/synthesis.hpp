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


#ifndef MOPO_SYNTHESIS_HPP_
#define MOPO_SYNTHESIS_HPP_

#include <cstddef>
#include <optional>
#include <vector>

#include "mopo/evaluate.hpp"
#include "mopo/rational.hpp"
#include "mopo/strategy.hpp"

namespace mopo {

enum class Relation { kEquals, kDominates, kApproximates };

const char* relation_name(Relation r);

/// A mixture over pool members together with what it realizes.
struct MixtureCertificate {
  FiniteMixture mixture;
  std::vector<std::size_t> members;  // pool indices, aligned with mixture.support()
  ExtRealVector realized;
  ExtRealVector target;
  Relation relation = Relation::kEquals;
  Rational eps;    // kApproximates only
  Rational big_m;  // kApproximates only
  PoolInfo pool;
};

enum class AchieveMode { kEquals, kDominates };

/// Mixture of pool members whose vector equals (at most d+1 members) or
/// dominates (at most d members) the finite target. Throws NotAchievable.
MixtureCertificate achieve(const Pool& pool, const ExtRealVector& target,
                           AchieveMode mode = AchieveMode::kEquals);

/// Mixture whose finite components are within eps of the target and whose
/// components facing +inf (-inf) are >= M (<= -M). Throws
/// InfeasibleApproximation.
MixtureCertificate approximate(const Pool& pool, const ExtRealVector& target, const Rational& eps,
                               const Rational& big_m);

/// True iff `realized` meets the three approximation conditions.
bool approximates(const ExtRealVector& realized, const ExtRealVector& target, const Rational& eps,
                  const Rational& big_m);

struct LexResult {
  std::size_t winner = 0;  // pool index
  ExtRealVector vector;
};

/// Exact lexicographic maximum; ties go to the smallest index.
LexResult lex_optimize(const std::vector<ExtRealVector>& vectors);

/// Index of a vector >=_lex v (the lexicographic maximum), if any.
std::optional<std::size_t> check_pure_dominates_lex(const ExtRealVector& v,
                                                    const std::vector<ExtRealVector>& vectors);

/// New weights (same length, zeros dropped from the support) with at most
/// d+1 positive entries and the same mixed vector. Throws
/// UndefinedExpectation.
std::vector<Rational> reduce_weights(const std::vector<Rational>& weights,
                                     const std::vector<ExtRealVector>& vectors);

/// `vectors[i]` is the payoff of mix.support()[i].
FiniteMixture reduce_support(const FiniteMixture& mix, const std::vector<ExtRealVector>& vectors);

}  // namespace mopo

#endif  // MOPO_SYNTHESIS_HPP_
