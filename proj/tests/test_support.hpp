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


#ifndef MOPO_TESTS_TEST_SUPPORT_HPP_
#define MOPO_TESTS_TEST_SUPPORT_HPP_

#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "mopo/io.hpp"
#include "mopo/model.hpp"
#include "mopo/payoff.hpp"
#include "mopo/rational.hpp"
#include "mopo/strategy.hpp"

namespace mopo::testing {

inline std::string data_path(const std::string& name) {
  return std::string(MOPO_DATA_DIR) + "/" + name;
}

inline Problem load(const std::string& name) { return load_problem(read_text_file(data_path(name))); }

inline Rational q(const char* s) { return parse_rational(s); }

inline ExtRealVector ev(std::initializer_list<const char*> xs) {
  ExtRealVector out;
  for (const char* x : xs) out.push_back(ExtReal::parse(x));
  return out;
}

inline std::vector<bool> target_of(const Pomdp& m, std::initializer_list<const char*> names) {
  std::vector<bool> t(m.num_states(), false);
  for (const char* n : names) t[m.state_id(n)] = true;
  return t;
}

// Random rational distribution over `support` with denominators from a
// small grid, never empty.
inline ActionDistribution grid_distribution(const std::vector<ActionId>& support,
                                            std::mt19937_64& rng, int grid = 4) {
  std::uniform_int_distribution<int> pick(0, grid);
  std::vector<int> w(support.size());
  int total = 0;
  for (auto& x : w) total += (x = pick(rng));
  if (total == 0) w[0] = total = 1;
  ActionDistribution d;
  for (std::size_t i = 0; i < support.size(); ++i)
    if (w[i] > 0) d.emplace_back(support[i], Rational(w[i], total));
  for (auto& [a, p] : d) p.canonicalize();
  return d;
}

// Random behavioural strategy over `skeleton`: grid-randomised at every
// (memory, observation) entry.
inline FiniteMemoryStrategy random_behavioural(const Pomdp& m, const MemorySkeleton& skeleton,
                                               std::mt19937_64& rng, int grid = 4) {
  std::vector<ActionDistribution> act;
  for (std::size_t mem = 0; mem < skeleton.size(); ++mem)
    for (ObsId z = 0; z < m.num_observations(); ++z) {
      auto en = m.observation_actions(z);
      act.push_back(en.empty() ? ActionDistribution{} : grid_distribution(en, rng, grid));
    }
  return FiniteMemoryStrategy(skeleton, std::move(act));
}

// All histories from s0 with at most `max_states` states and positive
// model probability.
inline std::vector<History> histories(const Pomdp& m, StateId s0, std::size_t max_states) {
  std::vector<History> out{History{{s0}, {}}};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].states.size() >= max_states) continue;
    History h = out[i];
    for (ActionId a : m.enabled_actions(h.last()))
      for (const auto& t : m.transition(h.last(), a)) {
        if (sgn(t.prob) == 0) continue;
        History g = h;
        g.actions.push_back(a);
        g.states.push_back(t.target);
        out.push_back(std::move(g));
      }
  }
  return out;
}

// Unique outcome of a pure strategy on a model whose transitions are all
// Dirac, as a lasso over (state, action) steps.
inline LassoPlay outcome_lasso(const Pomdp& m, const FiniteMemoryStrategy& s, StateId s0) {
  std::map<std::pair<StateId, std::size_t>, std::size_t> seen;
  std::vector<Step> steps;
  StateId st = s0;
  std::size_t mem = s.skeleton().initial();
  while (true) {
    auto [it, fresh] = seen.emplace(std::make_pair(st, mem), steps.size());
    if (!fresh) {
      LassoPlay l;
      l.prefix.assign(steps.begin(), steps.begin() + it->second);
      l.cycle.assign(steps.begin() + it->second, steps.end());
      return l;
    }
    ObsId z = m.observation(st);
    ActionId a = *s.pure_action(mem, z);
    steps.push_back({st, a});
    auto succ = m.successors(st, a);
    if (succ.size() != 1) throw std::logic_error("outcome_lasso needs Dirac transitions");
    st = succ[0];
    mem = s.next_memory(mem, z, a);
  }
}

// Smallest 1/2^j-grid rational above sqrt(x).
inline Rational sqrt_upper(const Rational& x) {
  Rational r = 1;
  while (r * r < x) r *= 2;
  for (int i = 0; i < 40; ++i) {
    Rational h = r / 2;
    if (h * h < x) break;
    r = h;
  }
  while (r * r < x) r *= 2;
  return r;
}

// (1 - t) x + t z entry by entry; both on the same skeleton.
inline FiniteMemoryStrategy blend(const FiniteMemoryStrategy& x, const FiniteMemoryStrategy& z,
                           const Rational& t) {
  std::vector<ActionDistribution> act;
  for (std::size_t i = 0; i < x.table().size(); ++i) {
    ActionDistribution law;
    for (const auto& [a, p] : x.table()[i]) law.emplace_back(a, (1 - t) * p);
    for (const auto& [a, p] : z.table()[i]) law.emplace_back(a, t * p);
    act.push_back(std::move(law));
  }
  return FiniteMemoryStrategy(x.skeleton(), std::move(act));
}

}  // namespace mopo::testing

#endif  // MOPO_TESTS_TEST_SUPPORT_HPP_
