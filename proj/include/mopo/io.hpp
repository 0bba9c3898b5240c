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


// Problem, strategy and result files.

#ifndef MOPO_IO_HPP_
#define MOPO_IO_HPP_

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "mopo/evaluate.hpp"
#include "mopo/geometry.hpp"
#include "mopo/model.hpp"
#include "mopo/montecarlo.hpp"
#include "mopo/payoff.hpp"
#include "mopo/strategy.hpp"
#include "mopo/synthesis.hpp"

namespace mopo {

/// A model file with optional "weights", "payoffs" and "initial" fields.
///
/// A "spath_within" payoff (target, weights, bound) turns into a reach
/// payoff on the cost-unrolled model; `model` is then the unrolled model and
/// every other payoff is lifted to it.
struct Problem {
  Pomdp original;
  Pomdp model;
  std::optional<StateId> initial;  // in `model`
  MultiPayoff payoffs;
  std::optional<CostUnrolling> unrolling;
  std::map<std::string, WeightFunction> weights;  // over `original`

  /// `name` is a state of the original model. Throws UnknownState, and
  /// SchemaError when the model was unrolled from another state.
  StateId initial_state(std::optional<std::string> name) const;
};

Problem load_problem(std::string_view text);

/// Throws ParseError when the file cannot be read.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

FiniteMemoryStrategy parse_strategy(const Pomdp& m, std::string_view text);
std::string strategy_to_json(const Pomdp& m, const FiniteMemoryStrategy& s);
FiniteMixture parse_mixture(const Pomdp& m, std::string_view text);
std::string mixture_to_json(const Pomdp& m, const FiniteMixture& mix);

/// "memoryless", "counter:H" or "file:<path>" (memory, init, update).
MemorySkeleton load_skeleton(const Pomdp& m, std::string_view spec);

/// Compact form of a pure strategy, e.g. "0:s0=a 1:s0=b".
std::string describe_strategy(const Pomdp& m, const FiniteMemoryStrategy& s);

/// Rationals and decimals side by side, one row per pool member.
std::string pool_csv(const Pomdp& m, const Pool& pool, const std::vector<std::string>& labels);
std::string hull_json(const Hull& h);
std::string certificate_json(const Pomdp& m, const MixtureCertificate& c);
std::string estimate_csv(const Estimate& e, const std::vector<std::string>& labels,
                         const std::string& strategy);

/// Decimal rendering with `digits` significant digits; "+inf"/"-inf" kept.
std::string decimal(const ExtReal& x, int digits = 6);

}  // namespace mopo

#endif  // MOPO_IO_HPP_
