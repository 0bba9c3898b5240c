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


// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mopo/belief.hpp"
#include "mopo/evaluate.hpp"
#include "mopo/geometry.hpp"
#include "mopo/montecarlo.hpp"
#include "mopo/synthesis.hpp"
#include "test_support.hpp"

using namespace mopo;
using namespace mopo::testing;

namespace {

struct Report {
  bool ok = true;
  std::string failure;
  std::string summary;

  void check(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      failure = what;
    }
  }
};

bool contains(const std::vector<ExtRealVector>& vs, const ExtRealVector& v) {
  return std::find(vs.begin(), vs.end(), v) != vs.end();
}

std::vector<ExtRealVector> distinct(const std::vector<ExtRealVector>& vs) {
  std::vector<ExtRealVector> out;
  for (const auto& v : vs)
    if (!contains(out, v)) out.push_back(v);
  return out;
}

PointList finite_points(const std::vector<ExtRealVector>& vs) {
  PointList out;
  for (const auto& v : vs) out.push_back(finite_part(v));
  return out;
}

std::string show(const ExtRealVector& v) { return "(" + to_string(v) + ")"; }

// Weighted sum of the pool values named by a certificate.
ExtRealVector recombine(const Pool& pool, const MixtureCertificate& c) {
  std::vector<ExtRealVector> vs;
  for (std::size_t k : c.members) vs.push_back(pool.entries[k].value);
  return mix_vectors(c.mixture.weights(), vs);
}

// Random positive weights on a small grid, normalised.
std::vector<Rational> random_weights(std::mt19937_64& rng, std::size_t n) {
  std::vector<Rational> w(n);
  Rational total = 0;
  for (auto& x : w) total += (x = Rational(static_cast<long>(1 + rng() % 6)));
  for (auto& x : w) x /= total;
  return w;
}

// Up to `max_size` distinct members drawn from `count` candidates.
std::vector<std::size_t> random_members(std::mt19937_64& rng, std::size_t count,
                                        std::size_t max_size) {
  std::size_t k = 1 + rng() % std::min(max_size, count);
  std::vector<std::size_t> idx;
  while (idx.size() < k) {
    std::size_t i = rng() % count;
    if (std::find(idx.begin(), idx.end(), i) == idx.end()) idx.push_back(i);
  }
  return idx;
}

// ------------------------------------------------------------------ 1
Report running_example() {
  Report r;
  auto p = load("running.json");
  auto pool = pure_payoff_set(p.model, 0, p.payoffs, MemorySkeleton::counter(p.model, 6));
  for (const auto& e : pool.entries) {
    auto l = outcome_lasso(p.model, e.strategy, 0);
    for (std::size_t d = 0; d < 2; ++d)
      r.check(e.value[d] == eval_play(p.model, p.payoffs[d], l), "pool value differs from its lasso");
  }
  std::vector<ExtRealVector> want = {{ExtReal(0), ExtReal(2)}, {ExtReal(1), ExtReal(2)}};
  for (unsigned k = 0; k <= 6; ++k)
    want.push_back({ExtReal(1 + power(Rational(3), k) * 4 / power(Rational(4), k)),
                    ExtReal(2 - 2 / power(Rational(2), k))});
  r.check(contains(want, ev({"13/4", "3/2"})) && contains(want, ev({"43/16", "7/4"})),
          "closed form misses (13/4, 3/2) or (43/16, 7/4)");
  auto vs = distinct(pool.vectors());
  r.check(vs.size() == want.size(), "expected 9 distinct vectors, got " + std::to_string(vs.size()));
  for (const auto& w : want) r.check(contains(vs, w), "missing " + show(w));

  auto ext = extreme_points(finite_points(vs));
  r.check(ext.size() == vs.size(), "not every vector is a hull vertex");
  auto par = pareto_frontier(vs);
  r.check(par.size() == vs.size() - 1, "Pareto frontier should drop exactly one vector");
  for (std::size_t i = 0; i < vs.size(); ++i) {
    bool on = std::find(par.begin(), par.end(), i) != par.end();
    r.check(on == !(vs[i] == ev({"0", "2"})), "Pareto status wrong for " + show(vs[i]));
  }
  r.summary = std::to_string(pool.entries.size()) + " strategies, " + std::to_string(vs.size()) +
              " vectors, " + std::to_string(ext.size()) + " extreme, " +
              std::to_string(par.size()) + " Pareto";
  return r;
}

// ------------------------------------------------------------------ 2
Report supporting_map_reach_pair() {
  Report r;
  auto p = load("reach_pair.json");
  auto pool = pure_payoff_set(p.model, 0, p.payoffs, MemorySkeleton::memoryless(p.model));
  auto vs = distinct(pool.vectors());
  r.check(vs.size() == 3, "memoryless set should have 3 vectors");
  for (auto w : {ev({"1", "0"}), ev({"0", "1"}), ev({"3/4", "3/4"})})
    r.check(contains(vs, w), "missing " + show(w));

  const RationalVector qv = {Rational(3, 4), Rational(3, 4)};
  auto pts = finite_points(vs);
  auto l = supporting_map(qv, pts);
  r.check(l.rows.size() == 2, "supporting map should have 2 rows");
  if (!l.rows.empty())
    r.check(primitive_direction(l.rows[0]) == RationalVector{1, 3}, "row 1 is not along (1,3)");
  auto lq = to_ext(l.apply(qv));
  std::vector<ExtRealVector> images;
  for (const auto& pt : pts) images.push_back(to_ext(l.apply(pt)));
  r.check(lex_optimize(images).vector == lq, "L(q) is not the lex maximum of the pool images");
  std::ostringstream s;
  s << "rows " << l.rows.size() << ", row 1 ~ " << show(to_ext(primitive_direction(l.rows[0])))
    << ", L(q) = " << show(lq);
  r.summary = s.str();
  return r;
}

// ------------------------------------------------------------------ 3
Report achieve_gated() {
  Report r;
  auto p = load("gated.json");
  auto pool = pure_payoff_set(p.model, 0, p.payoffs, MemorySkeleton::counter(p.model, 4));
  auto c = achieve(pool, ev({"2", "2"}));
  r.check(c.relation == Relation::kEquals, "relation is not equality");
  r.check(c.mixture.size() == 2, "support is not 2");
  Rational sum = 0;
  for (const auto& w : c.mixture.weights()) sum += w;
  r.check(sum == 1, "weights do not sum to 1");
  r.check(c.realized == ev({"2", "2"}), "realized " + show(c.realized));
  r.check(recombine(pool, c) == ev({"2", "2"}), "pool recombination is not (2,2)");
  r.check(mixed_expected_payoff(p.model, c.mixture, 0, p.payoffs) == ev({"2", "2"}),
          "mixture payoff is not (2,2)");
  std::ostringstream s;
  for (std::size_t k = 0; k < c.members.size(); ++k) {
    const auto& v = pool.entries[c.members[k]].value;
    r.check(v[0].value() + v[1].value() == 4, "member off the face x+y=4");
    s << (k ? " + " : "") << to_string(c.mixture.weights()[k]) << "*" << show(v);
  }
  r.summary = s.str();
  return r;
}

// ------------------------------------------------------------------ 4
Report commute_values() {
  Report r;
  auto p = load("commute.json");
  auto train = parse_strategy(p.original, read_text_file(data_path("commute_train.json")));
  auto mixed = parse_strategy(p.original, read_text_file(data_path("commute_2t_b.json")));
  const StateId s0 = p.initial_state({});
  const Pomdp& plain = p.original;
  auto sp = PayoffSpec::shortest_path(plain, {plain.state_id("work")}, p.weights.at("time"));
  r.check(expected_payoff(plain, train, 0, {sp})[0] == ExtReal(25), "E(time) under train is not 25");

  auto vt = expected_payoff(p.model, lift_strategy(*p.unrolling, train), s0, p.payoffs);
  auto vm = expected_payoff(p.model, lift_strategy(*p.unrolling, mixed), s0, p.payoffs);
  r.check(vt == ev({"14197/16384", "-25"}), "train gives " + show(vt));
  // Reached after k+1 rides with k ~ Geometric(1/4); within 40 means k <= 6.
  r.check(vt[0] == ExtReal(1 - power(Rational(3, 4), 7)), "P(time <= 40) differs from 1-(3/4)^7");
  r.check(vm == ev({"1", "-445/16"}), "two trains then bike gives " + show(vm));

  const RationalVector target = {Rational(9, 10), Rational(-27)};
  auto a = achievability_lp(target, {finite_part(vt), finite_part(vm)});
  r.check(a.has_value(), "(9/10, -27) not achievable");
  if (a) {
    r.check(a->indices.size() <= 2, "support above 2");
    Rational sum = 0;
    for (const auto& x : a->coefficients) sum += x;
    r.check(sum == 1, "coefficients do not sum to 1");
    for (std::size_t i = 0; i < 2; ++i) r.check(a->recombined[i] >= target[i], "not dominating");
    r.summary = "train " + show(vt) + ", 2t+b " + show(vm) + ", mix " + show(to_ext(a->recombined));
  }
  return r;
}

// ------------------------------------------------------------------ 5
Report lexicographic() {
  Report r;
  std::mt19937_64 rng(5);
  std::size_t checked = 0;
  for (const char* file : {"reach_pair.json", "commute.json"}) {
    auto p = load(file);
    const StateId s0 = p.initial_state({});
    auto k = MemorySkeleton::counter(p.model, 2);
    auto vs = pure_payoff_set(p.model, s0, p.payoffs, k).vectors();
    for (int i = 0; i < 100; ++i) {
      auto s = random_behavioural(p.model, k, rng);
      auto v = expected_payoff(p.model, s, s0, p.payoffs);
      r.check(all_finite(v), std::string(file) + ": unbounded payoff pair");
      auto w = check_pure_dominates_lex(v, vs);
      r.check(w.has_value() && lex_compare(vs[*w], v) >= 0,
              std::string(file) + ": no pure strategy lex-dominates " + show(v));
      ++checked;
    }
  }

  auto p6 = load("lex_gap.json");
  for (std::size_t n = 1; n <= 10; ++n) {
    auto pool = pure_payoff_set(p6.model, 0, p6.payoffs, MemorySkeleton::counter(p6.model, n));
    auto best = lex_optimize(pool.vectors());
    r.check(best.vector == ExtRealVector{ExtReal(1), ExtReal(static_cast<long>(n))},
            "lex optimum over counter:" + std::to_string(n) + " is " + show(best.vector));
    r.check(!contains(pool.vectors(), ev({"1", "inf"})), "(1, +inf) appears in a pool");
  }
  auto pool = pure_payoff_set(p6.model, 0, p6.payoffs, MemorySkeleton::counter(p6.model, 12));
  auto c = approximate(pool, ev({"1", "inf"}), Rational(1, 10), 10);
  r.check(c.realized[0] == ExtReal(1), "approximation dimension 1 is " + c.realized[0].str());
  r.check(c.realized[1] >= ExtReal(10), "approximation dimension 2 is " + c.realized[1].str());
  r.check(mixed_expected_payoff(p6.model, c.mixture, 0, p6.payoffs) == c.realized,
          "approximation mixture payoff differs from its certificate");
  r.summary = std::to_string(checked) + " random strategies dominated; approx realizes " +
              show(c.realized);
  return r;
}

// ------------------------------------------------------------------ 6
Report support_bounds() {
  Report r;
  std::mt19937_64 rng(6);
  auto p = load("running.json");
  const Pomdp& m = p.model;
  WeightFunction w3(m.num_states(), m.num_actions());
  for (StateId s = 0; s < m.num_states(); ++s)
    for (ActionId a : m.enabled_actions(s)) w3.set(s, a, Rational(static_cast<long>((3 * s + a) % 4)));
  MultiPayoff three = p.payoffs;
  three.push_back(PayoffSpec::discounted(m, Rational(1, 3), w3));

  std::size_t max_reduced = 0, max_face = 0;
  for (std::size_t d : {2u, 3u}) {
    MultiPayoff f(three.begin(), three.begin() + static_cast<long>(d));
    auto pool = pure_payoff_set(m, 0, f, MemorySkeleton::counter(m, d == 2 ? 6 : 4));
    auto pts = finite_points(distinct(pool.vectors()));
    for (int t = 0; t < 50; ++t) {
      auto idx = random_members(rng, pool.entries.size(), 8);
      std::vector<PureStrategy> sup;
      std::vector<ExtRealVector> vecs;
      for (auto i : idx) {
        sup.push_back(pool.entries[i].strategy);
        vecs.push_back(pool.entries[i].value);
      }
      FiniteMixture mix(sup, random_weights(rng, idx.size()));
      auto value = mixed_expected_payoff(m, mix, 0, f);
      auto red = reduce_support(mix, vecs);
      max_reduced = std::max(max_reduced, red.size());
      r.check(red.size() <= d + 1, "reduced support above d+1");
      r.check(mixed_expected_payoff(m, red, 0, f) == value, "reduced mixture changes the payoff");

      auto dec = dominating_face_decomposition(finite_part(value), pts);
      max_face = std::max(max_face, dec.indices.size());
      r.check(dec.indices.size() <= d, "dominating decomposition above d");
      Rational sum = 0;
      RationalVector back(d);
      for (std::size_t j = 0; j < dec.indices.size(); ++j) {
        sum += dec.coefficients[j];
        for (std::size_t i = 0; i < d; ++i) back[i] += dec.coefficients[j] * pts[dec.indices[j]][i];
      }
      r.check(sum == 1 && back == dec.recombined, "decomposition does not recombine");
      for (std::size_t i = 0; i < d; ++i)
        r.check(back[i] >= value[i].value(), "decomposition does not dominate");
    }
  }
  r.summary = "100 mixtures; largest reduced support " + std::to_string(max_reduced) +
              ", largest face support " + std::to_string(max_face);
  return r;
}

// ------------------------------------------------------------------ 7
Report kuhn_mixing() {
  Report r;
  std::mt19937_64 rng(7);
  std::size_t cylinders = 0;
  auto c = load("commute.json");
  const Pomdp& commute = c.original;
  auto work = commute.state_id("work");
  MultiPayoff commute_f = {PayoffSpec::reach(commute, {work}),
                           PayoffSpec::shortest_path(commute, {work}, c.weights.at("time"))};
  auto f5 = load("reach_pair.json");
  struct Case {
    const Pomdp* m;
    const MultiPayoff* f;
    std::size_t horizon;
  };
  for (const Case& k : {Case{&commute, &commute_f, 3}, Case{&f5.model, &f5.payoffs, 2}}) {
    const Pomdp& m = *k.m;
    auto all = enumerate_pure(m, MemorySkeleton::counter(m, k.horizon), 0);
    auto hs = histories(m, 0, 7);
    for (int t = 0; t < 25; ++t) {
      auto idx = random_members(rng, all.size(), 5);
      std::vector<PureStrategy> sup;
      for (auto i : idx) sup.push_back(all[i]);
      FiniteMixture mix(sup, random_weights(rng, idx.size()));
      auto beh = mixed_to_behavioural(m, mix);
      for (const auto& h : hs) {
        Rational want = 0;
        for (std::size_t j = 0; j < mix.size(); ++j)
          want += mix.weights()[j] * cylinder_prob(m, mix.support()[j], 0, h);
        r.check(cylinder_prob(m, beh, 0, h) == want, "cylinder probability differs");
        ++cylinders;
      }
      std::vector<ExtRealVector> pure;
      for (const auto& s : mix.support()) pure.push_back(expected_payoff(m, s, 0, *k.f));
      auto want = mix_vectors(mix.weights(), pure);
      r.check(mixed_expected_payoff(m, mix, 0, *k.f) == want, "mixed payoff is not the weighted sum");
      r.check(expected_payoff(m, beh, 0, *k.f) == want, "behavioural payoff is not the weighted sum");
    }
  }
  r.summary = "50 mixtures, " + std::to_string(cylinders) + " cylinders";
  return r;
}

// ------------------------------------------------------------------ 8
Report topology() {
  Report r;
  std::mt19937_64 rng(8);
  for (int i = 0; i < 1000; ++i) {
    std::size_t n = 1 + rng() % 8;
    Rational pa = 1, pb = 1, sum = 0;
    for (std::size_t j = 0; j < n; ++j) {
      Rational x(static_cast<long>(rng() % 17), 16), y(static_cast<long>(rng() % 17), 16);
      x.canonicalize();
      y.canonicalize();
      pa *= x;
      pb *= y;
      sum += abs(x - y);
    }
    r.check(abs(pa - pb) <= sum, "product difference bound fails");
  }

  auto m = load("commute.json").original;
  auto k = MemorySkeleton::counter(m, 2);
  std::vector<std::vector<History>> hs;
  for (std::size_t depth = 0; depth <= 4; ++depth) hs.push_back(histories(m, 0, depth + 1));
  for (int i = 0; i < 1000; ++i) {
    auto x = random_behavioural(m, k, rng, 8);
    auto y = blend(x, random_behavioural(m, k, rng, 8), Rational(1, 1 + static_cast<long>(rng() % 64)));
    std::size_t depth = 1 + i % 3;
    Rational eta = depth * sqrt_upper(strategy_premetric(m, x, y, depth, 0));
    for (const auto& h : hs[depth])
      r.check(abs(cylinder_prob(m, x, 0, h) - cylinder_prob(m, y, 0, h)) <= eta,
              "closeness bound fails");
  }

  auto p = load("random_loop.json");
  auto a = always(p.model, 0);
  auto family = [&](std::size_t n) { return switching_strategy(p.model, 0, n, 1); };
  auto ds_one = PayoffSpec::discounted(p.model, Rational(1, 2), p.weights.at("one"));
  auto ds_t = PayoffSpec::discounted(p.model, Rational(1, 2), p.weights.at("at_t"));
  std::vector<std::size_t> idx;
  for (std::size_t n = 1; n <= 12; ++n) idx.push_back(n);
  auto t = convergence_probe(p.model, family, a, 0, {p.payoffs[0], ds_one, ds_t}, idx, 13);
  r.check(t.limit[0] == ExtReal(2), "E(always a) is not 2");
  Rational prev_one = -1, prev_t = -1;
  for (const auto& row : t.rows) {
    r.check(row.value[0].is_pos_inf(), "spath value of a switching strategy is finite");
    // Weight 1 everywhere: every member already has the limit value.
    Rational gap_one = abs(row.value[1].value() - t.limit[1].value());
    r.check(gap_one == 0, "unit-weight discounted value differs from the limit");
    // Weight only in t: sum over k > n of 2^-k (2^-n - 2^-k) = (2/3) 4^-n.
    Rational gap_t = abs(row.value[2].value() - t.limit[2].value());
    r.check(gap_t == Rational(2, 3) / power(Rational(4), static_cast<unsigned>(row.index)),
            "discounted gap at n=" + std::to_string(row.index) + " is " + to_string(gap_t));
    if (prev_t >= 0) {
      r.check(gap_one * 2 == prev_one, "unit-weight gap does not halve");
      r.check(gap_t * 2 <= prev_t, "discounted gap shrinks by less than half");
    }
    prev_one = gap_one;
    prev_t = gap_t;
  }
  r.summary = "1000+1000 instances; probe limit " + show(t.limit) + ", gap at n=12 " + to_string(prev_t);
  return r;
}

// ------------------------------------------------------------------ 9
Report belief_checks() {
  Report r;
  auto f7 = load("random_loop.json").model;
  auto v = classify_shortest_path(f7, 0, target_of(f7, {"t"}));
  r.check(v.verdict == ShortestPathClass::kNotUniversallyIntegrable, "random loop verdict wrong");
  r.check(v.witness.has_value() &&
              v.witness->pure_action(v.witness->skeleton().initial(), f7.observation(0)) ==
                  std::optional<ActionId>(f7.action_id("b")),
          "witness is not always-b");

  auto c = load("commute.json");
  const Pomdp& m = c.original;
  auto work = target_of(m, {"work"});
  auto cv = classify_shortest_path(m, 0, work);
  r.check(cv.verdict == ShortestPathClass::kUniversallySquareIntegrable, "commute verdict wrong");

  auto train = parse_strategy(m, read_text_file(data_path("commute_train.json")));
  auto report = reach_bound_check(m, train, 0, work, 4);
  r.check(report.k == 8, "k is not 8");
  r.check(report.holds, "bound does not hold");
  for (std::size_t ell = 1; ell <= 4 && ell < report.rows.size(); ++ell) {
    const auto& row = report.rows[ell];
    r.check(row.bound == 1 - power(1 - power(Rational(1, 4), 8), ell), "bound formula differs");
    r.check(row.exact == 1 - power(Rational(3, 4), 8 * ell - 1), "exact reach probability differs");
    r.check(row.exact >= row.bound, "exact below bound");
  }
  r.summary = std::string(shortest_path_class_name(v.verdict)) + " / " +
              shortest_path_class_name(cv.verdict) + ", k = " + report.k.get_str();
  return r;
}

// ------------------------------------------------------------------ 10
bool within(const Estimate& e, const ExtRealVector& exact) {
  for (std::size_t j = 0; j < exact.size(); ++j) {
    double slack = 3 * e.std_error[j] + (e.bias[j] ? to_double(*e.bias[j]) : 0.0);
    if (!(std::abs(e.mean[j] - exact[j].to_double()) <= slack)) return false;
  }
  return true;
}

Report monte_carlo() {
  Report r;
  const std::size_t n = 100000;
  std::size_t seed = 1000;

  auto run = load("running.json");
  auto pool = pure_payoff_set(run.model, 0, run.payoffs, MemorySkeleton::counter(run.model, 6));
  std::size_t quantities = 0;
  std::vector<ExtRealVector> done;
  for (const auto& e : pool.entries) {
    if (contains(done, e.value)) continue;
    done.push_back(e.value);
    auto est = estimate_expectation(run.model, e.strategy, 0, run.payoffs, SampleConfig{n, 64, ++seed, 4});
    r.check(within(est, e.value), "running example estimate off for " + show(e.value));
    ++quantities;
  }

  auto f5 = load("reach_pair.json");
  auto mid = memoryless_pure(f5.model, {2, 0, 0, 0, 0});
  auto mid_est = estimate_expectation(f5.model, mid, 0, f5.payoffs, SampleConfig{n, 16, ++seed, 4});
  r.check(within(mid_est, ev({"3/4", "3/4"})), "reach_pair estimate off");
  ++quantities;

  auto c = load("commute.json");
  const StateId s0 = c.initial_state({});
  for (const char* file : {"commute_train.json", "commute_2t_b.json"}) {
    auto s = lift_strategy(*c.unrolling, parse_strategy(c.original, read_text_file(data_path(file))));
    auto exact = expected_payoff(c.model, s, s0, c.payoffs);
    auto est = estimate_expectation(c.model, s, s0, c.payoffs, SampleConfig{n, 200, ++seed, 4});
    r.check(within(est, exact), std::string("commute estimate off for ") + file);
    ++quantities;
  }

  // Pass rate over independent seeds on a stochastic quantity.
  std::size_t passed = 0;
  for (std::uint64_t k = 0; k < 100; ++k)
    passed += within(estimate_expectation(f5.model, mid, 0, f5.payoffs, SampleConfig{n, 16, 5000 + k, 4}),
                     ev({"3/4", "3/4"}));
  r.check(passed >= 99, "pass rate " + std::to_string(passed) + "/100");
  r.summary = std::to_string(quantities) + " quantities at n=1e5; repeated runs " +
              std::to_string(passed) + "/100";
  return r;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Report()>>> criteria = {
      {"running example pure set", running_example},
      {"reach pair supporting map", supporting_map_reach_pair},
      {"gated discount achieve (2,2)", achieve_gated},
      {"commute values and achievability", commute_values},
      {"lexicographic domination", lexicographic},
      {"support bounds", support_bounds},
      {"Kuhn mixing", kuhn_mixing},
      {"strategy topology", topology},
      {"belief verdicts and reach bound", belief_checks},
      {"Monte-Carlo cross-check", monte_carlo},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto start = std::chrono::steady_clock::now();
    Report r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r.ok = false;
      r.failure = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2zu %-34s %s (%.1fs)\n", r.ok ? "PASS" : "FAIL", i + 1, criteria[i].first,
                r.ok ? r.summary.c_str() : r.failure.c_str(), secs);
    std::fflush(stdout);
    failed += !r.ok;
  }
  return failed == 0 ? 0 : 1;
}
