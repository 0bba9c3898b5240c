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


// Command-line front end. Exit codes: 0 success, 1 negative answer,
// 2 usage error, 3 input error.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mopo/belief.hpp"
#include "mopo/errors.hpp"
#include "mopo/evaluate.hpp"
#include "mopo/geometry.hpp"
#include "mopo/io.hpp"
#include "mopo/montecarlo.hpp"
#include "mopo/synthesis.hpp"

namespace {

using nlohmann::json;
using namespace mopo;

struct Options {
  std::string file;
  std::optional<std::string> state;
  std::string skeleton = "memoryless";
  std::size_t cap = 100000;
  std::size_t jobs = 1;
  std::string target;
  std::string eps = "1/10";
  std::string big_m = "10";
  std::string mode = "equals";
  std::size_t horizon = 64;
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  bool json_out = false;
  std::string out;
  std::string strategy;
  std::string prefix_action;
  std::string then_action;
  std::vector<std::size_t> indices;
  std::vector<std::string> target_states;
  std::size_t ell = 4;
};

json vec_json(const ExtRealVector& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(x.str());
  return a;
}

std::vector<std::string> labels(const Problem& p) {
  std::vector<std::string> out;
  for (const auto& f : p.payoffs) out.push_back(f.label);
  return out;
}

void print_vector(const std::vector<std::string>& names, const ExtRealVector& v) {
  std::size_t w = 9;
  for (const auto& n : names) w = std::max(w, n.size());
  std::printf("%-*s  %-24s %s\n", static_cast<int>(w), "dimension", "exact", "decimal");
  for (std::size_t j = 0; j < v.size(); ++j)
    std::printf("%-*s  %-24s %s\n", static_cast<int>(w), names[j].c_str(), v[j].str().c_str(),
                decimal(v[j]).c_str());
}

void emit(const Options& o, const json& doc) {
  if (o.json_out) std::cout << doc.dump(2) << '\n';
}

Pool pool_of(const Options& o, const Problem& p, StateId s0) {
  MemorySkeleton skel = load_skeleton(p.model, o.skeleton);
  return pure_payoff_set(p.model, s0, p.payoffs, skel, o.cap, o.jobs);
}

std::vector<bool> target_mask(const Pomdp& m, const std::vector<std::string>& names) {
  std::vector<bool> t(m.num_states(), false);
  for (const auto& n : names) t[m.state_id(n)] = true;
  return t;
}

int cmd_validate(const Options& o) {
  Problem p = load_problem(read_text_file(o.file));
  ValidationReport r = validate(p.original);
  json doc = {{"ok", r.ok}, {"violations", json::array()}};
  for (const auto& v : r.violations)
    doc["violations"].push_back({{"rule", v.rule}, {"location", v.location}, {"message", v.message}});
  if (o.json_out) {
    emit(o, doc);
  } else {
    std::printf("%zu states, %zu actions, %zu observations, %zu payoff dimensions\n",
                p.original.num_states(), p.original.num_actions(), p.original.num_observations(),
                p.payoffs.size());
    for (const auto& v : r.violations)
      std::printf("%s at %s: %s\n", v.rule.c_str(), v.location.c_str(), v.message.c_str());
    std::printf("%s\n", r.ok ? "valid" : "invalid");
  }
  return r.ok ? 0 : 3;
}

int cmd_evaluate(const Options& o) {
  Problem p = load_problem(read_text_file(o.file));
  const StateId s0 = p.initial_state(o.state);
  const std::string text = read_text_file(o.strategy);
  ExtRealVector v;
  if (json::parse(text, nullptr, false).contains("support"))
    v = mixed_expected_payoff(p.model, parse_mixture(p.model, text), s0, p.payoffs);
  else
    v = expected_payoff(p.model, parse_strategy(p.model, text), s0, p.payoffs);
  if (o.json_out)
    emit(o, {{"value", vec_json(v)}, {"labels", labels(p)}});
  else
    print_vector(labels(p), v);
  return 0;
}

int cmd_frontier(const Options& o) {
  Problem p = load_problem(read_text_file(o.file));
  const StateId s0 = p.initial_state(o.state);
  Pool pool = pool_of(o, p, s0);
  if (!o.out.empty()) write_text_file(o.out, pool_csv(p.model, pool, labels(p)));
  // Distinct vectors with their first strategy.
  std::vector<ExtRealVector> values;
  std::vector<std::size_t> first, count;
  for (std::size_t i = 0; i < pool.entries.size(); ++i) {
    auto it = std::find(values.begin(), values.end(), pool.entries[i].value);
    if (it == values.end()) {
      values.push_back(pool.entries[i].value);
      first.push_back(i);
      count.push_back(1);
    } else {
      ++count[static_cast<std::size_t>(it - values.begin())];
    }
  }
  std::set<std::size_t> pareto, extreme;
  for (std::size_t i : pareto_frontier(values)) pareto.insert(i);
  PointList finite;
  std::vector<std::size_t> finite_idx;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (all_finite(values[i])) {
      finite.push_back(finite_part(values[i]));
      finite_idx.push_back(i);
    }
  std::optional<Hull> hull;
  if (!finite.empty()) {
    hull = convex_hull(finite);
    for (std::size_t k : hull->vertices) extreme.insert(finite_idx[k]);
  }
  if (o.json_out) {
    json rows = json::array();
    for (std::size_t i = 0; i < values.size(); ++i)
      rows.push_back({{"value", vec_json(values[i])},
                      {"strategy", describe_strategy(p.model, pool.entries[first[i]].strategy)},
                      {"strategies", count[i]},
                      {"pareto", pareto.count(i) > 0},
                      {"extreme", extreme.count(i) > 0}});
    json doc = {{"pool", {{"skeleton", pool.info.skeleton}, {"cap", pool.info.cap}, {"size", pool.info.size}}},
                {"labels", labels(p)},
                {"points", rows}};
    if (hull) doc["hull"] = json::parse(hull_json(*hull));
    emit(o, doc);
    return 0;
  }
  std::printf("pool: %zu pure strategies (skeleton %s), %zu distinct vectors\n", pool.info.size,
              pool.info.skeleton.c_str(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::string dec;
    for (const auto& x : values[i]) dec += (dec.empty() ? "" : ",") + decimal(x);
    std::printf("%-32s (%s)  %s%s  x%zu\n", to_string(values[i]).c_str(), dec.c_str(),
                pareto.count(i) ? "pareto " : "       ", extreme.count(i) ? "extreme" : "       ",
                count[i]);
  }
  return 0;
}

int print_certificate(const Options& o, const Problem& p, const MixtureCertificate& c) {
  if (!o.out.empty()) write_text_file(o.out, certificate_json(p.model, c));
  if (o.json_out) {
    emit(o, json::parse(certificate_json(p.model, c)));
    return 0;
  }
  std::printf("%s: target %s, realized %s (pool %s, %zu strategies)\n", relation_name(c.relation),
              to_string(c.target).c_str(), to_string(c.realized).c_str(), c.pool.skeleton.c_str(),
              c.pool.size);
  for (std::size_t k = 0; k < c.mixture.size(); ++k)
    std::printf("  %-10s (%s)  #%zu %s\n", to_string(c.mixture.weights()[k]).c_str(),
                decimal(ExtReal(c.mixture.weights()[k])).c_str(), c.members[k],
                describe_strategy(p.model, c.mixture.support()[k]).c_str());
  return 0;
}

int cmd_achieve(const Options& o) {
  Problem p = load_problem(read_text_file(o.file));
  const StateId s0 = p.initial_state(o.state);
  if (o.mode != "equals" && o.mode != "dominates") throw SchemaError("--mode is equals or dominates");
  ExtRealVector target = parse_ext_vector(o.target);
  Pool pool = pool_of(o, p, s0);
  return print_certificate(
      o, p, achieve(pool, target, o.mode == "equals" ? AchieveMode::kEquals : AchieveMode::kDominates));
}

int cmd_approx(const Options& o) {
  Problem p = load_problem(read_text_file(o.file));
  const StateId s0 = p.initial_state(o.state);
  ExtRealVector target = parse_ext_vector(o.target);
  Pool pool = pool_of(o, p, s0);
  return print_certificate(o, p,
                           approximate(pool, target, parse_rational(o.eps), parse_rational(o.big_m)));
}

int cmd_lexopt(const Options& o) {
  Problem p = load_problem(read_text_file(o.file));
  const StateId s0 = p.initial_state(o.state);
  Pool pool = pool_of(o, p, s0);
  LexResult r = lex_optimize(pool.vectors());
  const auto& s = pool.entries[r.winner].strategy;
  if (!o.out.empty()) write_text_file(o.out, strategy_to_json(p.model, s));
  if (o.json_out) {
    emit(o, {{"winner", r.winner},
             {"value", vec_json(r.vector)},
             {"strategy", describe_strategy(p.model, s)},
             {"pool", {{"skeleton", pool.info.skeleton}, {"size", pool.info.size}}}});
    return 0;
  }
  std::printf("lexicographic maximum over %zu strategies (%s): #%zu %s\n", pool.info.size,
              pool.info.skeleton.c_str(), r.winner, describe_strategy(p.model, s).c_str());
  print_vector(labels(p), r.vector);
  return 0;
}

int cmd_classify(const Options& o) {
  Problem p = load_problem(read_text_file(o.file));
  const StateId s0 = p.initial_state(o.state);
  auto verdicts = classify_integrability(p.model, p.payoffs, s0);
  json rows = json::array();
  for (std::size_t j = 0; j < verdicts.size(); ++j) {
    json row = {{"label", p.payoffs[j].label},
                {"verdict", integrability_name(verdicts[j].verdict)},
                {"witness", verdicts[j].witness}};
    if (verdicts[j].witness_strategy)
      row["witness_strategy"] = describe_strategy(p.model, *verdicts[j].witness_strategy);
    rows.push_back(std::move(row));
    if (!o.json_out)
      std::printf("%-20s %-40s %s\n", p.payoffs[j].label.c_str(),
                  integrability_name(verdicts[j].verdict), verdicts[j].witness.c_str());
  }
  emit(o, rows);
  return 0;
}

int cmd_belief(const Options& o) {
  Problem p = load_problem(read_text_file(o.file));
  const Pomdp& m = p.original;
  StateId s0;
  if (o.state)
    s0 = m.state_id(*o.state);
  else if (p.unrolling)
    s0 = p.unrolling->origin[p.unrolling->initial];
  else
    s0 = p.initial_state(std::nullopt);
  BeliefGraph g = belief_graph(m, s0);
  const std::string dot = to_dot(m, g);
  if (!o.out.empty()) write_text_file(o.out, dot);
  json doc = {{"nodes", g.nodes.size()}, {"edges", g.edges.size()}, {"k", belief_bound(m).get_str()}};
  if (!o.target_states.empty()) {
    ShortestPathVerdict v = classify_shortest_path(m, s0, target_mask(m, o.target_states));
    doc["shortest_path"] = shortest_path_class_name(v.verdict);
    if (v.witness) doc["witness"] = describe_strategy(m, *v.witness);
    if (!o.json_out) {
      std::printf("shortest path: %s\n", shortest_path_class_name(v.verdict));
      if (v.witness) std::printf("avoiding strategy: %s\n", describe_strategy(m, *v.witness).c_str());
    }
  }
  if (o.json_out)
    emit(o, doc);
  else if (o.out.empty())
    std::cout << dot;
  return 0;
}

int cmd_simulate(const Options& o) {
  Problem p = load_problem(read_text_file(o.file));
  const StateId s0 = p.initial_state(o.state);
  SampleConfig cfg{o.samples, o.horizon, o.seed, o.jobs};
  const std::string text = read_text_file(o.strategy);
  Estimate e;
  std::string name;
  if (json::parse(text, nullptr, false).contains("support")) {
    e = estimate_expectation(p.model, parse_mixture(p.model, text), s0, p.payoffs, cfg);
    name = "mixture";
  } else {
    FiniteMemoryStrategy s = parse_strategy(p.model, text);
    e = estimate_expectation(p.model, s, s0, p.payoffs, cfg);
    name = describe_strategy(p.model, s);
  }
  const std::string csv = estimate_csv(e, labels(p), name);
  if (!o.out.empty()) write_text_file(o.out, csv);
  if (o.json_out) {
    json rows = json::array();
    for (std::size_t j = 0; j < e.mean.size(); ++j)
      rows.push_back({{"label", p.payoffs[j].label},
                      {"mean", e.mean[j]},
                      {"stderr", e.std_error[j]},
                      {"bias_bound", e.bias[j] ? to_string(*e.bias[j]) : "unknown"},
                      {"censored_fraction", e.censored[j]}});
    emit(o, {{"samples", e.n}, {"seed", e.seed}, {"horizon", o.horizon}, {"estimates", rows}});
  } else {
    std::cout << csv;
  }
  return 0;
}

int cmd_probe(const Options& o) {
  Problem p = load_problem(read_text_file(o.file));
  const StateId s0 = p.initial_state(o.state);
  const ActionId a = p.model.action_id(o.prefix_action);
  const ActionId b = p.model.action_id(o.then_action);
  const FiniteMemoryStrategy limit = switching_strategy(p.model, a, 0, a);
  std::vector<std::size_t> idx = o.indices;
  if (idx.empty())
    for (std::size_t n = 0; n <= 8; ++n) idx.push_back(n);
  ProbeTable t = convergence_probe(
      p.model, [&](std::size_t n) { return switching_strategy(p.model, a, n, b); }, limit, s0,
      p.payoffs, idx, o.horizon);
  if (o.json_out) {
    json rows = json::array();
    for (const auto& r : t.rows)
      rows.push_back({{"index", r.index}, {"value", vec_json(r.value)}, {"premetric", to_string(r.premetric)}});
    emit(o, {{"limit", vec_json(t.limit)}, {"rows", rows}});
    return 0;
  }
  std::printf("limit (always %s): %s\n", o.prefix_action.c_str(), to_string(t.limit).c_str());
  std::printf("%-6s %-40s %s\n", "n", "value", "premetric");
  for (const auto& r : t.rows)
    std::printf("%-6zu %-40s %s\n", r.index, to_string(r.value).c_str(), to_string(r.premetric).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-objective payoffs of finite-memory strategies in POMDPs"};
  app.require_subcommand(1);
  Options o;
  std::map<CLI::App*, int (*)(const Options&)> handlers;

  auto common = [&](CLI::App* c) {
    c->add_option("file", o.file, "problem file (JSON)")->required();
    c->add_option("--state", o.state, "initial state");
    c->add_flag("--json", o.json_out, "machine-readable output");
    c->add_option("--out", o.out, "output file");
  };
  auto pooled = [&](CLI::App* c) {
    c->add_option("--skeleton", o.skeleton, "memoryless | counter:<H> | file:<path>");
    c->add_option("--cap", o.cap, "maximum pool size");
    c->add_option("--jobs", o.jobs, "worker threads");
  };

  auto* validate_cmd = app.add_subcommand("validate", "check a model file");
  common(validate_cmd);
  handlers[validate_cmd] = cmd_validate;

  auto* evaluate_cmd = app.add_subcommand("evaluate", "exact expected payoff of a strategy or mixture");
  common(evaluate_cmd);
  evaluate_cmd->add_option("--strategy", o.strategy, "strategy or mixture file")->required();
  handlers[evaluate_cmd] = cmd_evaluate;

  auto* frontier_cmd = app.add_subcommand("frontier", "pure payoff pool, Pareto frontier and hull");
  common(frontier_cmd);
  pooled(frontier_cmd);
  handlers[frontier_cmd] = cmd_frontier;

  auto* achieve_cmd = app.add_subcommand("achieve", "mixture realizing a target vector");
  common(achieve_cmd);
  pooled(achieve_cmd);
  achieve_cmd->add_option("--target", o.target, "comma separated rationals")->required();
  achieve_cmd->add_option("--mode", o.mode, "equals | dominates");
  handlers[achieve_cmd] = cmd_achieve;

  auto* approx_cmd = app.add_subcommand("approx", "mixture approximating a target with infinities");
  common(approx_cmd);
  pooled(approx_cmd);
  approx_cmd->add_option("--target", o.target, "comma separated rationals, +inf, -inf")->required();
  approx_cmd->add_option("--eps", o.eps, "precision on finite components");
  approx_cmd->add_option("--bigM", o.big_m, "threshold on infinite components");
  handlers[approx_cmd] = cmd_approx;

  auto* lexopt_cmd = app.add_subcommand("lexopt", "lexicographically best pure strategy");
  common(lexopt_cmd);
  pooled(lexopt_cmd);
  handlers[lexopt_cmd] = cmd_lexopt;

  auto* classify_cmd = app.add_subcommand("classify", "integrability of each payoff dimension");
  common(classify_cmd);
  handlers[classify_cmd] = cmd_classify;

  auto* belief_cmd = app.add_subcommand("belief-graph", "belief-support graph as DOT");
  common(belief_cmd);
  belief_cmd->add_option("--target", o.target_states, "target states for the shortest path verdict")
      ->delimiter(',');
  handlers[belief_cmd] = cmd_belief;

  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo estimate");
  common(simulate_cmd);
  simulate_cmd->add_option("--strategy", o.strategy, "strategy or mixture file")->required();
  simulate_cmd->add_option("--samples", o.samples, "number of plays");
  simulate_cmd->add_option("--horizon", o.horizon, "steps per play");
  simulate_cmd->add_option("--seed", o.seed, "64-bit seed");
  simulate_cmd->add_option("--jobs", o.jobs, "worker threads");
  handlers[simulate_cmd] = cmd_simulate;

  auto* probe_cmd = app.add_subcommand("probe", "values along a family of switching strategies");
  common(probe_cmd);
  probe_cmd->add_option("--prefix-action", o.prefix_action, "action of the first n rounds")->required();
  probe_cmd->add_option("--then-action", o.then_action, "action afterwards")->required();
  probe_cmd->add_option("--indices", o.indices, "values of n")->delimiter(',');
  probe_cmd->add_option("--horizon", o.horizon, "premetric horizon");
  handlers[probe_cmd] = cmd_probe;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    for (auto& [cmd, fn] : handlers)
      if (cmd->parsed()) return fn(o);
  } catch (const DomainError& e) {
    std::cerr << e.kind() << ": " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << e.kind() << ": " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
