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


// Seeded sampling estimates. The only floating point code in the library.

#ifndef MOPO_MONTECARLO_HPP_
#define MOPO_MONTECARLO_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "mopo/model.hpp"
#include "mopo/payoff.hpp"
#include "mopo/rational.hpp"
#include "mopo/strategy.hpp"

namespace mopo {

/// SplitMix64. One stream per sample index keeps runs reproducible under
/// any thread count.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  static SplitMix64 stream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();

 private:
  std::uint64_t state_;
};

struct SampleConfig {
  std::size_t samples = 10000;
  std::size_t horizon = 64;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
};

struct Estimate {
  std::vector<double> mean;
  std::vector<double> std_error;
  /// Samples behind each mean (shortest path excludes censored plays).
  std::vector<std::size_t> used;
  /// Bound on |E[truncated] - E[payoff]| where one is known.
  std::vector<std::optional<Rational>> bias;
  /// Fraction of plays that did not reach the target within the horizon.
  std::vector<double> censored;
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

struct Play {
  std::vector<StateId> states;  // horizon + 1 entries
  std::vector<ActionId> actions;
};

Play sample_play(const Pomdp& m, const FiniteMemoryStrategy& s, StateId s0, std::size_t horizon,
                 SplitMix64& rng);
/// Draws one support member, then follows it.
Play sample_play(const Pomdp& m, const FiniteMixture& mix, StateId s0, std::size_t horizon,
                 SplitMix64& rng);

/// Throws UnsupportedKind for Buchi and total reward.
Estimate estimate_expectation(const Pomdp& m, const FiniteMemoryStrategy& s, StateId s0,
                              const MultiPayoff& f, const SampleConfig& cfg);
Estimate estimate_expectation(const Pomdp& m, const FiniteMixture& mix, StateId s0,
                              const MultiPayoff& f, const SampleConfig& cfg);

/// Plays `first` for n rounds, then `then` forever (falling back to the
/// first enabled action where either is disabled).
FiniteMemoryStrategy switching_strategy(const Pomdp& m, ActionId first, std::size_t n,
                                        ActionId then);

struct ProbeRow {
  std::size_t index;
  ExtRealVector value;
  Rational premetric;  // squared distance to the limit strategy
};

struct ProbeTable {
  ExtRealVector limit;
  std::vector<ProbeRow> rows;
};

ProbeTable convergence_probe(const Pomdp& m,
                             const std::function<FiniteMemoryStrategy(std::size_t)>& family,
                             const FiniteMemoryStrategy& limit, StateId s0, const MultiPayoff& f,
                             const std::vector<std::size_t>& indices, std::size_t horizon);

}  // namespace mopo

#endif  // MOPO_MONTECARLO_HPP_
