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

#include <cmath>
#include <random>
#include <set>

#include "mopo/errors.hpp"
#include "mopo/payoff.hpp"
#include "test_support.hpp"

using namespace mopo;
using namespace mopo::testing;

namespace {

std::vector<Step> unroll(const LassoPlay& l, std::size_t n) {
  std::vector<Step> out = l.prefix;
  while (out.size() < n) out.insert(out.end(), l.cycle.begin(), l.cycle.end());
  out.resize(n);
  return out;
}

// Discounted partial sum over an explicit unrolling.
Rational partial_ds(const PayoffSpec& p, const std::vector<Step>& steps) {
  Rational sum = 0, f = 1;
  for (const auto& st : steps) {
    sum += f * p.weights(st.state, st.action);
    f *= p.lambda;
  }
  return sum;
}

// Random lasso of deterministic moves on the running model.
LassoPlay random_running_lasso(std::mt19937_64& rng) {
  // s0 a s2, s0 b s3, s0 c s1; s2 loops on a, leaves to s3 on b.
  std::uniform_int_distribution<int> first(0, 2), loops(0, 4), leave(0, 1);
  LassoPlay l;
  int f = first(rng);
  if (f == 2) {
    l.prefix = {{0, 2}};
    l.cycle = {{1, 0}};
    return l;
  }
  if (f == 1) {
    l.prefix = {{0, 1}};
    l.cycle = {{3, 0}};
    return l;
  }
  l.prefix = {{0, 0}};
  int r = loops(rng);
  for (int i = 0; i < r; ++i) l.prefix.push_back({2, 0});
  if (leave(rng)) {
    l.prefix.push_back({2, 1});
    l.cycle = {{3, 0}};
  } else {
    l.cycle = {{2, 0}};
  }
  return l;
}

}  // namespace

TEST_CASE("running example lasso values") {
  auto p = load("running.json");
  const auto& m = p.model;
  LassoPlay stay{{{0, 0}}, {{2, 0}}};
  CHECK(eval_play(m, p.payoffs[0], stay) == ExtReal(1));
  CHECK(eval_play(m, p.payoffs[1], stay) == ExtReal(2));

  LassoPlay twice{{{0, 0}, {2, 0}, {2, 1}}, {{3, 0}}};
  CHECK(eval_play(m, p.payoffs[1], twice) == ExtReal(q("3/2")));
  CHECK(eval_play(m, p.payoffs[0], twice) == ExtReal(q("13/4")));
}

TEST_CASE("discounted lasso value is the limit of partial sums") {
  auto p = load("running.json");
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    auto l = random_running_lasso(rng);
    for (const auto& f : p.payoffs) {
      Rational exact = eval_play(p.model, f, l).value();
      // |tail| <= max|w| * lambda^N / (1 - lambda); here max|w| = 2.
      for (std::size_t n : {5u, 20u, 60u}) {
        Rational diff = abs(exact - partial_ds(f, unroll(l, n)));
        CHECK(diff <= 2 * power(f.lambda, n) / (1 - f.lambda));
      }
    }
  }
}

TEST_CASE("lasso value ignores rotation and unfolding") {
  auto p = load("running.json");
  auto spec = p.payoffs[0];
  // s2 a s2 a ... written three ways.
  LassoPlay a{{{0, 0}}, {{2, 0}}};
  LassoPlay b{{{0, 0}, {2, 0}, {2, 0}}, {{2, 0}, {2, 0}}};
  CHECK(eval_play(p.model, spec, a) == eval_play(p.model, spec, b));
  auto reach = PayoffSpec::reach(p.model, {3});
  LassoPlay c{{{0, 0}, {2, 1}}, {{3, 0}}};
  LassoPlay d{{{0, 0}, {2, 1}, {3, 0}}, {{3, 0}, {3, 0}}};
  CHECK(eval_play(p.model, reach, c) == eval_play(p.model, reach, d));
  CHECK(eval_play(p.model, reach, c) == ExtReal(1));
}

TEST_CASE("shortest path and total reward on lassos") {
  auto p = load("random_loop.json");
  const auto& m = p.model;
  const auto& sp = p.payoffs[0];
  LassoPlay never{{}, {{0, 1}}};
  CHECK(eval_play(m, sp, never).is_pos_inf());
  LassoPlay late{{{0, 1}, {0, 1}, {0, 0}}, {{1, 0}}};
  CHECK(eval_play(m, sp, late) == ExtReal(3));

  // Weights all 1: a non-reaching prefix of k steps already costs k.
  std::mt19937_64 rng(3);
  for (int i = 0; i < 30; ++i) {
    std::size_t k = rng() % 6;
    LassoPlay x{std::vector<Step>(k, Step{0, 1}), {{0, 1}}};
    LassoPlay y{std::vector<Step>(k, Step{0, 1}), {{1, 0}}};
    y.prefix.push_back({0, 0});
    CHECK(eval_play(m, sp, x) >= ExtReal(static_cast<long>(k)));
    CHECK(eval_play(m, sp, y) >= ExtReal(static_cast<long>(k)));
  }

  auto f6 = load("lex_gap.json");
  LassoPlay loop{{}, {{0, 0}}};
  CHECK(eval_play(f6.model, f6.payoffs[1], loop).is_pos_inf());
  LassoPlay out{{{0, 0}, {0, 0}, {0, 1}}, {{1, 1}}};
  CHECK(eval_play(f6.model, f6.payoffs[1], out) == ExtReal(2));
  CHECK(eval_play(f6.model, f6.payoffs[0], out) == ExtReal(1));
  CHECK(eval_play(f6.model, PayoffSpec::buchi(f6.model, {0}), out) == ExtReal(0));
  CHECK(eval_play(f6.model, PayoffSpec::buchi(f6.model, {1}), out) == ExtReal(1));
}

TEST_CASE("reach-gated discounted lasso") {
  auto p = load("gated.json");
  LassoPlay wait2{{{0, 1}, {0, 1}, {0, 0}}, {{1, 0}}};
  // g1 = 1 + 3/4, g2 = (3/4)^2 * 1 + (3/4)^3 * 4
  CHECK(eval_play(p.model, p.payoffs[0], wait2) == ExtReal(q("7/4")));
  CHECK(eval_play(p.model, p.payoffs[1], wait2) == ExtReal(q("9/4")));
  LassoPlay never{{}, {{0, 1}}};
  CHECK(eval_play(p.model, p.payoffs[0], never) == ExtReal(0));
}

TEST_CASE("malformed lassos") {
  auto m = load("running.json").model;
  auto f = PayoffSpec::reach(m, {3});
  CHECK_THROWS_AS(eval_play(m, f, LassoPlay{{{0, 0}}, {}}), MalformedLasso);
  CHECK_THROWS_AS(eval_play(m, f, LassoPlay{{{0, 0}}, {{3, 0}}}), MalformedLasso);
  CHECK_THROWS_AS(eval_play(m, f, LassoPlay{{{0, 0}}, {{2, 0}, {2, 1}}}), MalformedLasso);
}

TEST_CASE("truncated generalized discounted sum") {
  GeneralizedDiscounted g;
  g.default_lambda = g.lambda_star = q("1/2");
  g.default_weight = g.weight_bound = 1;
  std::vector<Step> steps(4, Step{0, 0});
  auto iv = eval_play_truncated(g, steps);
  CHECK(iv.lo == q("13/8"));
  CHECK(iv.hi == q("17/8"));
  // The infinite constant play is worth 2.
  CHECK(iv.lo <= 2);
  CHECK(2 <= iv.hi);

  GeneralizedDiscounted zero;
  zero.default_lambda = zero.lambda_star = q("1/2");
  auto z = eval_play_truncated(zero, steps);
  CHECK(z.lo == 0);
  CHECK(z.hi == 0);

  GeneralizedDiscounted flat;
  flat.default_weight = flat.weight_bound = 3;
  auto f = eval_play_truncated(flat, {Step{0, 0}});
  CHECK(f.lo == 3);
  CHECK(f.hi == 3);

  GeneralizedDiscounted bad = g;
  bad.lambda[{Step{0, 0}}] = q("3/4");
  CHECK_THROWS_AS(bad.check(), SchemaError);
}

TEST_CASE("truncation interval contains every continuation") {
  // History-dependent factors: depth 2 window, values in [0, 2/3].
  GeneralizedDiscounted g;
  g.depth = 2;
  g.lambda_star = q("2/3");
  g.weight_bound = 2;
  g.default_lambda = q("1/3");
  g.default_weight = -1;
  g.lambda[{Step{0, 0}, Step{0, 1}}] = q("2/3");
  g.weight[{Step{0, 1}, Step{0, 0}}] = 2;
  g.weight[{Step{0, 1}}] = q("1/2");
  std::mt19937_64 rng(11);
  for (int i = 0; i < 40; ++i) {
    std::vector<Step> play;
    for (int j = 0; j < 40; ++j) play.push_back(Step{0, static_cast<ActionId>(rng() % 2)});
    for (std::size_t n : {1u, 3u, 8u}) {
      std::vector<Step> pre(play.begin(), play.begin() + n);
      auto iv = eval_play_truncated(g, pre);
      auto far = eval_play_truncated(g, play);
      CHECK(iv.lo <= far.lo);
      CHECK(far.hi <= iv.hi);
    }
  }
}

TEST_CASE("clopen objectives") {
  auto m = load("running.json").model;
  CylinderUnion one{{History{{0, 1}, {2}}}};
  auto r = is_clopen_objective(m, one);
  CHECK(r.clopen);
  CHECK(r.horizon == 1);

  auto f7 = load("random_loop.json").model;
  CylinderUnion all;
  for (const auto& h : histories(f7, 0, 3))
    if (h.length() == 2) all.histories.push_back(h);
  r = is_clopen_objective(f7, all);
  CHECK(r.clopen);
  CHECK(r.horizon == 2);
  for (const auto& h : histories(f7, 0, 4))
    if (h.length() == 3) CHECK(cylinder_membership(all, h) == std::optional<bool>(true));

  CylinderUnion nested{{History{{0, 2, 2}, {0, 0}}, History{{0, 2}, {0}}}};
  r = is_clopen_objective(m, nested);
  CHECK(r.horizon == 1);
  REQUIRE(r.normalized.histories.size() == 1);
  CHECK(r.normalized.histories[0].length() == 1);

  CHECK_THROWS_AS(is_clopen_objective(m, CylinderUnion{{History{{0, 3}, {0}}}}), MalformedHistory);
}

TEST_CASE("SCC decomposition matches mutual reachability") {
  for (const char* f : {"running.json", "reach_pair.json", "lex_gap.json", "random_loop.json", "commute.json"}) {
    auto m = load(f).original;
    auto d = scc_decompose(m);
    auto reach = [&](StateId a, StateId b) {
      auto r = reachable_states(m, a);
      return std::find(r.begin(), r.end(), b) != r.end();
    };
    for (StateId s = 0; s < m.num_states(); ++s)
      for (StateId t = 0; t < m.num_states(); ++t) {
        bool same = d.component_of[s] == d.component_of[t];
        CHECK(same == (reach(s, t) && reach(t, s)));
        CHECK(d.reaches[d.component_of[s]][d.component_of[t]] == reach(s, t));
      }
  }
  auto running = load("running.json").model;
  auto d = scc_decompose(running);
  CHECK(d.components.size() == 4);
  for (std::size_t c = 1; c < 4; ++c) CHECK(d.reaches[0][c]);

  auto two = load_model(R"({"states": ["x", "y"], "actions": ["a"],
    "transitions": {"x": {"a": {"y": "1"}}, "y": {"a": {"x": "1"}}}})");
  CHECK(scc_decompose(two).components.size() == 1);

  auto f7 = load("random_loop.json").model;
  auto d7 = scc_decompose(f7);
  CHECK(d7.components == std::vector<std::vector<StateId>>{{0}, {1}});
  CHECK(d7.successors[0] == std::vector<std::size_t>{1});
}

TEST_CASE("prefix-independent continuity") {
  auto f6 = load("lex_gap.json").model;
  CHECK_FALSE(check_prefix_independent_continuity(f6, {{0, ExtReal(0)}, {1, ExtReal(1)}}));
  CHECK(check_prefix_independent_continuity(f6, {{0, ExtReal(1)}, {1, ExtReal(1)}}));
  CHECK_THROWS_AS(check_prefix_independent_continuity(f6, {{0, ExtReal(1)}}), UnknownScc);
  CHECK_THROWS_AS(
      check_prefix_independent_continuity(f6, {{0, ExtReal(1)}, {1, ExtReal(1)}, {5, ExtReal(0)}}),
      UnknownScc);
  auto single = load_model(R"({"states": ["x"], "actions": ["a"],
    "transitions": {"x": {"a": {"x": "1"}}}})");
  CHECK(check_prefix_independent_continuity(single, {{0, ExtReal::pos_inf()}}));
}

TEST_CASE("payoff spec checks") {
  auto m = load("running.json").model;
  auto w = WeightFunction::constant(m, -1);
  CHECK_THROWS_AS(check_payoff(m, PayoffSpec::total_reward(m, w)), SchemaError);
  CHECK_THROWS_AS(check_payoff(m, PayoffSpec::discounted(m, 1, WeightFunction::constant(m, 1))),
                  SchemaError);
  CHECK(parse_kind("shortest_path") == PayoffKind::kShortestPath);
  CHECK(std::string(kind_name(PayoffKind::kBuchi)) == "buchi");
}

TEST_CASE("extended reals") {
  auto inf = ExtReal::pos_inf();
  CHECK(Rational(0) * inf == ExtReal(0));
  CHECK(Rational(2) * inf == inf);
  CHECK(Rational(-1) * inf == ExtReal::neg_inf());
  CHECK_THROWS_AS(inf + ExtReal::neg_inf(), UndefinedExpectation);
  CHECK(inf + ExtReal(5) == inf);
  CHECK(ExtReal::neg_inf() < ExtReal(-1000));
  CHECK(ExtReal::parse("-inf").is_neg_inf());
  CHECK(ExtReal::parse("3/6") == ExtReal(q("1/2")));
  CHECK(lex_compare(ev({"1", "0"}), ev({"0", "inf"})) > 0);
  CHECK(dominates(ev({"1", "inf"}), ev({"1", "7"})));
}
