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


#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "mopo/errors.hpp"
#include "mopo/evaluate.hpp"
#include "mopo/montecarlo.hpp"
#include "mopo/payoff.hpp"
#include "test_support.hpp"

using namespace mopo;
using namespace mopo::testing;

namespace {

bool contains(const std::vector<ExtRealVector>& vs, const ExtRealVector& v) {
  return std::find(vs.begin(), vs.end(), v) != vs.end();
}

}  // namespace

TEST_CASE("shortest path on the randomised loop") {
  auto p = load("random_loop.json");
  auto v = expected_payoff(p.model, always(p.model, 0), 0, {p.payoffs[0]});
  CHECK(v[0] == ExtReal(2));
  v = expected_payoff(p.model, always(p.model, 1), 0, {p.payoffs[0]});
  CHECK(v[0].is_pos_inf());
}

TEST_CASE("commute strategies") {
  auto p = load("commute.json");
  auto train = parse_strategy(p.original, read_text_file(data_path("commute_train.json")));
  auto mixed = parse_strategy(p.original, read_text_file(data_path("commute_2t_b.json")));
  StateId s0 = p.initial_state({});

  // Time is 5k + 5 with k ~ Geometric(1/4) home steps.
  Rational within = 1 - power(q("3/4"), 7);
  auto v = expected_payoff(p.model, lift_strategy(*p.unrolling, train), s0, p.payoffs);
  CHECK(v == ExtRealVector{ExtReal(within), ExtReal(-25)});
  CHECK(within == q("14197/16384"));

  // Outcomes 10, 15, 40 with probabilities 1/4, 3/16, 9/16.
  Rational e = 10 * q("1/4") + 15 * q("3/16") + 40 * q("9/16");
  v = expected_payoff(p.model, lift_strategy(*p.unrolling, mixed), s0, p.payoffs);
  CHECK(v == ExtRealVector{ExtReal(1), ExtReal(-e)});
  CHECK(e == q("445/16"));

  // Same numbers without the unrolling.
  auto plain = load_model(serialize(p.original));
  auto t = p.weights.at("time");
  auto sp = PayoffSpec::shortest_path(plain, {2}, t);
  CHECK(expected_payoff(plain, train, 0, {sp})[0] == ExtReal(25));
  CHECK(expected_payoff(plain, mixed, 0, {sp})[0] == ExtReal(e));
}

TEST_CASE("reach pair on the triangle model") {
  auto p = load("reach_pair.json");
  auto c = memoryless_pure(p.model, {2, 0, 0, 0, 0});
  CHECK(expected_payoff(p.model, c, 0, p.payoffs) == ev({"3/4", "3/4"}));
  auto pool = pure_payoff_set(p.model, 0, p.payoffs, MemorySkeleton::memoryless(p.model));
  CHECK(pool.vectors() == std::vector<ExtRealVector>{ev({"1", "0"}), ev({"0", "1"}), ev({"3/4", "3/4"})});
}

TEST_CASE("pure payoff set of the running example") {
  auto p = load("running.json");
  auto pool = pure_payoff_set(p.model, 0, p.payoffs, MemorySkeleton::counter(p.model, 3));
  CHECK(pool.entries.size() == 24);
  auto vs = pool.vectors();
  for (auto want : {ev({"5", "0"}), ev({"4", "1"}), ev({"13/4", "3/2"}), ev({"43/16", "7/4"}),
                    ev({"1", "2"}), ev({"0", "2"})})
    CHECK(contains(vs, want));

  // Every pool vector equals the lasso value of the strategy's outcome.
  for (const auto& e : pool.entries) {
    auto l = outcome_lasso(p.model, e.strategy, 0);
    for (std::size_t d = 0; d < 2; ++d) CHECK(e.value[d] == eval_play(p.model, p.payoffs[d], l));
  }
  auto par = pure_payoff_set(p.model, 0, p.payoffs, MemorySkeleton::counter(p.model, 3), 100000, 4);
  CHECK(par.vectors() == vs);

  auto single = load_model(R"({"states": ["x"], "actions": ["a"],
    "transitions": {"x": {"a": {"x": "1"}}}})");
  auto one = pure_payoff_set(single, 0, {PayoffSpec::reach(single, {0})},
                             MemorySkeleton::memoryless(single));
  CHECK(one.entries.size() == 1);
  CHECK_THROWS_AS(pure_payoff_set(p.model, 0, p.payoffs, MemorySkeleton::counter(p.model, 12), 100),
                  PoolTooLarge);
}

TEST_CASE("lasso oracle on gated discounted payoffs") {
  auto p = load("gated.json");
  auto pool = pure_payoff_set(p.model, 0, p.payoffs, MemorySkeleton::counter(p.model, 4));
  for (const auto& e : pool.entries) {
    auto l = outcome_lasso(p.model, e.strategy, 0);
    for (std::size_t d = 0; d < 2; ++d) CHECK(e.value[d] == eval_play(p.model, p.payoffs[d], l));
  }
  auto vs = pool.vectors();
  for (auto want : {ev({"0", "4"}), ev({"1", "3"}), ev({"7/4", "9/4"}), ev({"37/16", "27/16"}),
                    ev({"0", "0"})})
    CHECK(contains(vs, want));
}

TEST_CASE("mixtures") {
  auto p = load("lex_gap.json");
  std::vector<PureStrategy> sup;
  std::vector<Rational> w;
  for (unsigned r = 0; r <= 3; ++r) {
    sup.push_back(switching_strategy(p.model, 0, 1u << r, 1));
    w.push_back(power(q("1/2"), r + 1) * q("16/15"));
  }
  FiniteMixture mu(sup, w);
  CHECK(mixed_expected_payoff(p.model, mu, 0, p.payoffs) == ExtRealVector{ExtReal(1), ExtReal(q("32/15"))});

  auto s = switching_strategy(p.model, 0, 3, 1);
  CHECK(mixed_expected_payoff(p.model, FiniteMixture::dirac(s), 0, p.payoffs) ==
        expected_payoff(p.model, s, 0, p.payoffs));

  CHECK_THROWS_AS(mix_vectors({q("1/2"), q("1/2")}, {ev({"inf"}), ev({"-inf"})}),
                  UndefinedExpectation);
  CHECK(mix_vectors({0, 1}, {ev({"inf"}), ev({"-3"})}) == ev({"-3"}));
  CHECK(mix_vectors({q("1/2"), q("1/2")}, {ev({"inf"}), ev({"-3"})}) == ev({"inf"}));
}

TEST_CASE("mixed payoff equals payoff of the behavioural conversion") {
  std::mt19937_64 rng(41);
  for (const char* f : {"reach_pair.json", "commute.json", "running.json"}) {
    auto p = load(f);
    const Pomdp& m = p.original;
    MultiPayoff pay = p.unrolling ? MultiPayoff{PayoffSpec::shortest_path(m, {2}, p.weights.at("time"))}
                                  : p.payoffs;
    StateId s0 = 0;
    auto all = enumerate_pure(m, MemorySkeleton::counter(m, 2), s0);
    for (int i = 0; i < 5; ++i) {
      std::vector<PureStrategy> sup;
      std::vector<Rational> w;
      for (int j = 0; j < 3; ++j) {
        sup.push_back(all[rng() % all.size()]);
        w.push_back(Rational(1, 3));
      }
      FiniteMixture mix(sup, w);
      auto direct = mixed_expected_payoff(m, mix, s0, pay);
      auto beh = expected_payoff(m, mixed_to_behavioural(m, mix), s0, pay);
      CHECK(direct == beh);
    }
  }
}

TEST_CASE("convexity of two-point mixtures") {
  auto p = load("running.json");
  auto pool = pure_payoff_set(p.model, 0, p.payoffs, MemorySkeleton::counter(p.model, 2));
  std::mt19937_64 rng(43);
  for (int i = 0; i < 20; ++i) {
    const auto& x = pool.entries[rng() % pool.entries.size()];
    const auto& y = pool.entries[rng() % pool.entries.size()];
    Rational alpha(static_cast<long>(rng() % 9), 8);
    alpha.canonicalize();
    std::vector<PureStrategy> sup{x.strategy, y.strategy};
    if (alpha == 0 || alpha == 1) continue;
    FiniteMixture mix(sup, {alpha, 1 - alpha});
    ExtRealVector want;
    for (std::size_t d = 0; d < 2; ++d)
      want.push_back(ExtReal(alpha * x.value[d].value() + (1 - alpha) * y.value[d].value()));
    CHECK(mixed_expected_payoff(p.model, mix, 0, p.payoffs) == want);
  }
}

TEST_CASE("discounted value bounds and total reward monotonicity") {
  std::mt19937_64 rng(47);
  auto m = load("commute.json").original;
  auto k = MemorySkeleton::counter(m, 2);
  for (int i = 0; i < 20; ++i) {
    WeightFunction w(m.num_states(), m.num_actions());
    for (StateId s = 0; s < m.num_states(); ++s)
      for (ActionId a : m.enabled_actions(s)) w.set(s, a, Rational(static_cast<long>(rng() % 7) - 3));
    Rational lambda(static_cast<long>(1 + rng() % 7), 8);
    lambda.canonicalize();
    auto s = random_behavioural(m, k, rng);
    auto v = expected_payoff(m, s, 0, {PayoffSpec::discounted(m, lambda, w)})[0].value();
    auto [lo, hi] = w.range(m);
    CHECK(lo / (1 - lambda) <= v);
    CHECK(v <= hi / (1 - lambda));
  }

  auto f6 = load("lex_gap.json");
  auto w = f6.weights.at("w");
  for (int i = 0; i < 10; ++i) {
    auto s = switching_strategy(f6.model, 0, 1 + rng() % 5, 1);
    auto base = expected_payoff(f6.model, s, 0, {PayoffSpec::total_reward(f6.model, w)})[0];
    auto more = w;
    more.set(0, 1, Rational(static_cast<long>(rng() % 3)));
    auto bigger = expected_payoff(f6.model, s, 0, {PayoffSpec::total_reward(f6.model, more)})[0];
    CHECK(base <= bigger);
  }
  auto inf = expected_payoff(f6.model, always(f6.model, 0), 0, {PayoffSpec::total_reward(f6.model, w)});
  CHECK(inf[0].is_pos_inf());
}

TEST_CASE("Buchi probabilities") {
  auto f7 = load("random_loop.json").model;
  auto b = PayoffSpec::buchi(f7, {1});
  CHECK(expected_payoff(f7, always(f7, 0), 0, {b})[0] == ExtReal(1));
  CHECK(expected_payoff(f7, always(f7, 1), 0, {b})[0] == ExtReal(0));
  auto reach_pair = load("reach_pair.json").model;
  auto c = memoryless_pure(reach_pair, {2, 0, 0, 0, 0});
  CHECK(expected_payoff(reach_pair, c, 0, {PayoffSpec::buchi(reach_pair, {3})})[0] == ExtReal(q("1/4")));
}

TEST_CASE("integrability classification") {
  auto f7 = load("random_loop.json");
  auto v = classify_integrability(f7.model, f7.payoffs, 0);
  CHECK(v[0].verdict == Integrability::kUnambiguousOnly);
  REQUIRE(v[0].witness_strategy);
  CHECK(expected_payoff(f7.model, *v[0].witness_strategy, 0, {f7.payoffs[0]})[0].is_pos_inf());
  CHECK(v[1].verdict == Integrability::kUniversallyIntegrable);

  auto c = load("commute.json");
  auto plain = c.original;
  auto cv = classify_integrability(plain, {PayoffSpec::shortest_path(plain, {2}, c.weights.at("time"))}, 0);
  CHECK(cv[0].verdict == Integrability::kUniversallyIntegrable);

  auto f6 = load("lex_gap.json");
  auto v6 = classify_integrability(f6.model, f6.payoffs, 0);
  CHECK(v6[0].verdict == Integrability::kUniversallyIntegrable);
  CHECK(v6[1].verdict == Integrability::kUnambiguousOnly);
  auto zero = PayoffSpec::total_reward(f6.model, WeightFunction::constant(f6.model, 0));
  CHECK(classify_integrability(f6.model, {zero}, 0)[0].verdict == Integrability::kUniversallyIntegrable);
  CHECK(std::string(integrability_name(Integrability::kUnknown)) == "Unknown");
}

TEST_CASE("cost unrolling") {
  auto c = load("commute.json");
  const auto& u = *c.unrolling;
  for (StateId s = 0; s < u.model.num_states(); ++s) {
    CHECK(u.model.observation_name(u.model.observation(s)) ==
          c.original.observation_name(c.original.observation(u.origin[s])));
    if (u.cost[s]) CHECK(*u.cost[s] <= 40);
  }
  CHECK(validate(u.model).ok);
  auto neg = c.weights.at("minus_time");
  CHECK_THROWS_AS(unroll_cost(c.original, 0, target_of(c.original, {"work"}), neg, 10), SchemaError);
}
