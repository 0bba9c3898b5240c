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


#include "mopo/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "mopo/errors.hpp"
#include "mopo/evaluate.hpp"

namespace mopo {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

template <typename T>
std::size_t draw(const std::vector<std::pair<T, double>>& cdf, double u) {
  for (std::size_t i = 0; i + 1 < cdf.size(); ++i)
    if (u < cdf[i].second) return i;
  return cdf.size() - 1;
}

// Cumulative double tables for one strategy.
class Walker {
 public:
  Walker(const Pomdp& m, const FiniteMemoryStrategy& s) : m_(m), s_(s) {
    check_strategy(m, s);
    const std::size_t nz = m.num_observations();
    act_.resize(s.skeleton().size() * nz);
    for (std::size_t mem = 0; mem < s.skeleton().size(); ++mem)
      for (ObsId z = 0; z < nz; ++z) {
        Rational acc = 0;
        for (const auto& [a, p] : s.act(mem, z)) {
          acc += p;
          act_[mem * nz + z].emplace_back(a, to_double(acc));
        }
      }
    delta_.resize(m.num_states() * m.num_actions());
    for (StateId st = 0; st < m.num_states(); ++st)
      for (ActionId a : m.enabled_actions(st)) {
        Rational acc = 0;
        for (const auto& t : m.transition(st, a)) {
          if (sgn(t.prob) == 0) continue;
          acc += t.prob;
          delta_[st * m.num_actions() + a].emplace_back(t.target, to_double(acc));
        }
      }
  }

  Play walk(StateId s0, std::size_t horizon, SplitMix64& rng) const {
    Play p;
    p.states.reserve(horizon + 1);
    p.actions.reserve(horizon);
    StateId s = s0;
    std::size_t mem = s_.skeleton().initial();
    p.states.push_back(s);
    for (std::size_t t = 0; t < horizon; ++t) {
      const ObsId z = m_.observation(s);
      const auto& law = act_[mem * m_.num_observations() + z];
      const ActionId a = law[draw(law, rng.uniform())].first;
      const auto& succ = delta_[s * m_.num_actions() + a];
      mem = s_.next_memory(mem, z, a);
      s = succ[draw(succ, rng.uniform())].first;
      p.actions.push_back(a);
      p.states.push_back(s);
    }
    return p;
  }

 private:
  const Pomdp& m_;
  const FiniteMemoryStrategy& s_;
  std::vector<std::vector<std::pair<ActionId, double>>> act_;
  std::vector<std::vector<std::pair<StateId, double>>> delta_;
};

// Truncated payoff of one play; nullopt marks a censored shortest path.
std::optional<double> truncated(const PayoffSpec& p, const std::vector<double>& w, std::size_t na,
                                const Play& play) {
  const std::size_t h = play.actions.size();
  auto weight = [&](std::size_t i) { return w[play.states[i] * na + play.actions[i]]; };
  switch (p.kind) {
    case PayoffKind::kReach:
      for (StateId s : play.states)
        if (p.in_target(s)) return 1.0;
      return 0.0;
    case PayoffKind::kDiscounted:
    case PayoffKind::kReachDiscounted: {
      if (p.kind == PayoffKind::kReachDiscounted) {
        bool hit = false;
        for (StateId s : play.states) hit = hit || p.in_target(s);
        if (!hit) return 0.0;
      }
      const double lambda = to_double(p.lambda);
      double sum = 0, scale = 1;
      for (std::size_t i = 0; i < h; ++i, scale *= lambda) sum += scale * weight(i);
      return sum;
    }
    case PayoffKind::kShortestPath: {
      double sum = 0;
      for (std::size_t i = 0; i <= h; ++i) {
        if (p.in_target(play.states[i])) return sum;
        if (i < h) sum += weight(i);
      }
      return std::nullopt;
    }
    default:
      throw UnsupportedKind(std::string("no sampling estimator for ") + kind_name(p.kind));
  }
}

// Pairwise sum in a fixed order.
double tree_sum(const std::vector<double>& xs, std::size_t lo, std::size_t hi) {
  if (hi - lo == 0) return 0;
  if (hi - lo == 1) return xs[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return tree_sum(xs, lo, mid) + tree_sum(xs, mid, hi);
}

template <typename SampleFn>
Estimate run(const Pomdp& m, const MultiPayoff& f, const SampleConfig& cfg,
             const SampleFn& sample) {
  if (cfg.samples == 0 || cfg.horizon == 0)
    throw SchemaError("sample count and horizon must be positive");
  check_payoffs(m, f);
  const std::size_t d = f.size(), n = cfg.samples, na = m.num_actions();
  std::vector<std::vector<double>> weights(d);
  for (std::size_t j = 0; j < d; ++j) {
    if (f[j].kind == PayoffKind::kBuchi || f[j].kind == PayoffKind::kTotalReward)
      throw UnsupportedKind(std::string("no sampling estimator for ") + kind_name(f[j].kind));
    weights[j].assign(m.num_states() * na, 0.0);
    if (!f[j].weights.empty())
      for (StateId s = 0; s < m.num_states(); ++s)
        for (ActionId a : m.enabled_actions(s)) weights[j][s * na + a] = to_double(f[j].weights(s, a));
  }
  // values[j][i], NaN for censored samples.
  std::vector<std::vector<double>> values(d, std::vector<double>(n));
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      SplitMix64 rng = SplitMix64::stream(cfg.seed, i);
      Play play = sample(rng);
      for (std::size_t j = 0; j < d; ++j) {
        auto v = truncated(f[j], weights[j], na, play);
        values[j][i] = v ? *v : std::nan("");
      }
    }
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min(cfg.jobs, n));
  if (jobs == 1) {
    work(0, n);
  } else {
    std::vector<std::future<void>> futures;
    for (std::size_t k = 0; k < jobs; ++k)
      futures.push_back(std::async(std::launch::async, work, n * k / jobs, n * (k + 1) / jobs));
    for (auto& fut : futures) fut.get();
  }

  Estimate e;
  e.n = n;
  e.seed = cfg.seed;
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<double> kept;
    kept.reserve(n);
    for (double v : values[j])
      if (!std::isnan(v)) kept.push_back(v);
    const std::size_t k = kept.size();
    const double mean = k ? tree_sum(kept, 0, k) / static_cast<double>(k) : std::nan("");
    std::vector<double> sq(k);
    for (std::size_t i = 0; i < k; ++i) sq[i] = (kept[i] - mean) * (kept[i] - mean);
    const double var = k > 1 ? tree_sum(sq, 0, k) / static_cast<double>(k - 1) : 0.0;
    e.mean.push_back(mean);
    e.std_error.push_back(k ? std::sqrt(var / static_cast<double>(k)) : std::nan(""));
    e.used.push_back(k);
    e.censored.push_back(static_cast<double>(n - k) / static_cast<double>(n));
    std::optional<Rational> bias;
    if (f[j].kind == PayoffKind::kDiscounted) {
      const Rational w = f[j].weights.max_abs(m);
      bias = w * power(f[j].lambda, cfg.horizon) / (1 - f[j].lambda);
    }
    e.bias.push_back(std::move(bias));
  }
  return e;
}

}  // namespace

SplitMix64 SplitMix64::stream(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64(mix64(seed + kGolden) ^ mix64(index * kGolden + 1));
}

std::uint64_t SplitMix64::next() { return mix64(state_ += kGolden); }

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

Play sample_play(const Pomdp& m, const FiniteMemoryStrategy& s, StateId s0, std::size_t horizon,
                 SplitMix64& rng) {
  if (s0 >= m.num_states()) throw UnknownState("initial state index out of range");
  return Walker(m, s).walk(s0, horizon, rng);
}

namespace {

std::vector<std::pair<std::size_t, double>> member_cdf(const FiniteMixture& mix) {
  std::vector<std::pair<std::size_t, double>> cdf;
  Rational acc = 0;
  for (std::size_t i = 0; i < mix.size(); ++i) {
    acc += mix.weights()[i];
    cdf.emplace_back(i, to_double(acc));
  }
  return cdf;
}

}  // namespace

Play sample_play(const Pomdp& m, const FiniteMixture& mix, StateId s0, std::size_t horizon,
                 SplitMix64& rng) {
  const std::size_t i = draw(member_cdf(mix), rng.uniform());
  return sample_play(m, mix.support()[i], s0, horizon, rng);
}

Estimate estimate_expectation(const Pomdp& m, const FiniteMemoryStrategy& s, StateId s0,
                              const MultiPayoff& f, const SampleConfig& cfg) {
  if (s0 >= m.num_states()) throw UnknownState("initial state index out of range");
  const Walker w(m, s);
  return run(m, f, cfg, [&](SplitMix64& rng) { return w.walk(s0, cfg.horizon, rng); });
}

Estimate estimate_expectation(const Pomdp& m, const FiniteMixture& mix, StateId s0,
                              const MultiPayoff& f, const SampleConfig& cfg) {
  if (s0 >= m.num_states()) throw UnknownState("initial state index out of range");
  std::vector<Walker> walkers;
  walkers.reserve(mix.size());
  for (const auto& s : mix.support()) walkers.emplace_back(m, s);
  const auto cdf = member_cdf(mix);
  return run(m, f, cfg, [&](SplitMix64& rng) {
    const std::size_t i = draw(cdf, rng.uniform());
    return walkers[i].walk(s0, cfg.horizon, rng);
  });
}

FiniteMemoryStrategy switching_strategy(const Pomdp& m, ActionId first, std::size_t n,
                                        ActionId then) {
  MemorySkeleton skel = MemorySkeleton::counter(m, n);
  const std::size_t nz = m.num_observations();
  std::vector<ActionDistribution> act(skel.size() * nz);
  for (std::size_t mem = 0; mem < skel.size(); ++mem)
    for (ObsId z = 0; z < nz; ++z) {
      auto enabled = m.observation_actions(z);
      if (enabled.empty()) continue;
      const ActionId want = mem < n ? first : then;
      const bool ok = std::binary_search(enabled.begin(), enabled.end(), want);
      act[mem * nz + z] = {{ok ? want : enabled.front(), Rational(1)}};
    }
  return FiniteMemoryStrategy(std::move(skel), std::move(act));
}

ProbeTable convergence_probe(const Pomdp& m,
                             const std::function<FiniteMemoryStrategy(std::size_t)>& family,
                             const FiniteMemoryStrategy& limit, StateId s0, const MultiPayoff& f,
                             const std::vector<std::size_t>& indices, std::size_t horizon) {
  ProbeTable t;
  t.limit = expected_payoff(m, limit, s0, f);
  for (std::size_t n : indices) {
    FiniteMemoryStrategy s = family(n);
    t.rows.push_back({n, expected_payoff(m, s, s0, f), strategy_premetric(m, s, limit, horizon, s0)});
  }
  return t;
}

}  // namespace mopo
