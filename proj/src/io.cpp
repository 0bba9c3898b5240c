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


#include "mopo/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json_util.hpp"
#include "mopo/errors.hpp"

namespace mopo {

using nlohmann::json;

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

std::vector<StateId> state_list(const Pomdp& m, const json& p, const char* field) {
  if (!p.contains(field) || !p.at(field).is_array())
    throw SchemaError(std::string("payoff needs an array field '") + field + "'");
  std::vector<StateId> out;
  for (const auto& s : p.at(field)) {
    if (!s.is_string()) throw SchemaError("target states are given by name");
    out.push_back(m.state_id(s.get<std::string>()));
  }
  return out;
}

using RawWeights = std::map<std::pair<StateId, ActionId>, json>;

std::map<std::string, RawWeights> read_weights(const Pomdp& m, const json& doc) {
  std::map<std::string, RawWeights> out;
  if (!doc.contains("weights")) return out;
  const json& ws = doc.at("weights");
  if (!ws.is_object()) throw SchemaError("'weights' must map names to weight tables");
  for (const auto& [name, table] : ws.items()) {
    if (!table.is_object()) throw SchemaError("weight table '" + name + "' must be an object");
    RawWeights raw;
    for (const auto& [key, value] : table.items()) {
      auto parts = split(key, ',');
      if (parts.size() != 2)
        throw SchemaError("weight key '" + key + "' must read \"state,action\"");
      const StateId s = m.state_id(parts[0]);
      const ActionId a = m.action_id(parts[1]);
      if (!m.enabled(s, a))
        throw SchemaError("weight key '" + key + "' names a disabled action");
      raw[{s, a}] = value;
    }
    out.emplace(name, std::move(raw));
  }
  return out;
}

WeightFunction weight_function(const Pomdp& m, const std::map<std::string, RawWeights>& all,
                               const json& p) {
  if (!p.contains("weights") || !p.at("weights").is_string())
    throw SchemaError("payoff needs a 'weights' name");
  const std::string name = p.at("weights").get<std::string>();
  auto it = all.find(name);
  if (it == all.end()) throw SchemaError("unknown weight table '" + name + "'");
  std::size_t component = 0;
  if (p.contains("component")) {
    if (!p.at("component").is_number_unsigned())
      throw SchemaError("'component' must be a non-negative integer");
    component = p.at("component").get<std::size_t>();
  }
  WeightFunction w(m.num_states(), m.num_actions());
  for (const auto& [sa, value] : it->second) {
    if (value.is_array()) {
      if (component >= value.size())
        throw SchemaError("weight table '" + name + "' has no component " +
                          std::to_string(component));
      w.set(sa.first, sa.second, json_util::rational(value.at(component)));
    } else {
      w.set(sa.first, sa.second, json_util::rational(value));
    }
  }
  return w;
}

Rational lambda_of(const json& p) {
  if (!p.contains("lambda")) throw SchemaError("discounted payoff needs 'lambda'");
  return json_util::rational(p.at("lambda"));
}

std::size_t memory_index(const std::vector<std::string>& names, std::size_t size,
                         const std::string& key) {
  if (!names.empty()) {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == key) return i;
  }
  if (!key.empty() && key.find_first_not_of("0123456789") == std::string::npos &&
      key.size() < 10) {
    std::size_t i = std::stoul(key);
    if (i < size) return i;
  }
  throw SchemaError("unknown memory state '" + key + "'");
}

struct SkeletonParts {
  MemorySkeleton skeleton;
  std::vector<std::string> names;
};

SkeletonParts skeleton_from_json(const Pomdp& m, const json& doc) {
  if (!doc.is_object()) throw SchemaError("strategy document must be a JSON object");
  std::vector<std::string> names;
  std::size_t size = 1;
  if (doc.contains("memory")) {
    const json& mem = doc.at("memory");
    if (mem.is_number_unsigned()) {
      size = mem.get<std::size_t>();
    } else if (mem.is_array()) {
      names = json_util::string_list(doc, "memory", true);
      size = names.size();
    } else {
      throw SchemaError("'memory' must be a count or a list of names");
    }
  }
  if (size == 0 || size > 1000000) throw SchemaError("memory size out of range");
  std::size_t init = 0;
  if (doc.contains("init")) {
    const json& v = doc.at("init");
    init = v.is_string() ? memory_index(names, size, v.get<std::string>())
                         : memory_index(names, size, v.dump());
  }
  const std::size_t nz = m.num_observations(), na = m.num_actions();
  std::vector<std::size_t> table(size * nz * na);
  for (std::size_t q = 0; q < size; ++q)
    for (std::size_t k = 0; k < nz * na; ++k) table[q * nz * na + k] = q;
  if (doc.contains("update")) {
    const json& up = doc.at("update");
    if (!up.is_object()) throw SchemaError("'update' must map \"m,z,a\" to memory states");
    for (const auto& [key, value] : up.items()) {
      auto parts = split(key, ',');
      if (parts.size() != 3) throw SchemaError("update key '" + key + "' must read \"m,z,a\"");
      const std::size_t q = memory_index(names, size, parts[0]);
      const ObsId z = m.observation_id(parts[1]);
      const ActionId a = m.action_id(parts[2]);
      const std::size_t next = value.is_string() ? memory_index(names, size, value.get<std::string>())
                                                 : memory_index(names, size, value.dump());
      table[(q * nz + z) * na + a] = next;
    }
  }
  MemorySkeleton skel(size, init, nz, na, std::move(table));
  skel.set_label("file");
  return {std::move(skel), std::move(names)};
}

FiniteMemoryStrategy strategy_from_json(const Pomdp& m, const json& doc) {
  SkeletonParts parts = skeleton_from_json(m, doc);
  const MemorySkeleton& skel = parts.skeleton;
  const std::size_t nz = m.num_observations();
  std::vector<ActionDistribution> act(skel.size() * nz);
  std::vector<bool> given(act.size(), false);
  if (!doc.contains("act") || !doc.at("act").is_object())
    throw SchemaError("strategy needs an 'act' object");
  auto law_of = [&](const json& v) {
    ActionDistribution law;
    if (v.is_string()) {
      law.emplace_back(m.action_id(v.get<std::string>()), Rational(1));
    } else if (v.is_object()) {
      for (const auto& [a, p] : v.items()) law.emplace_back(m.action_id(a), json_util::rational(p));
    } else {
      throw SchemaError("an act entry is an action name or an action->probability object");
    }
    return law;
  };
  // Wildcard entries first, so explicit ones win.
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& [key, value] : doc.at("act").items()) {
      auto kp = split(key, ',');
      if (kp.size() != 2) throw SchemaError("act key '" + key + "' must read \"m,z\"");
      const bool wildcard = kp[0] == "*";
      if (wildcard != (pass == 0)) continue;
      const ObsId z = m.observation_id(kp[1]);
      ActionDistribution law = law_of(value);
      for (std::size_t q = 0; q < skel.size(); ++q) {
        if (!wildcard && q != memory_index(parts.names, skel.size(), kp[0])) continue;
        act[q * nz + z] = law;
        given[q * nz + z] = true;
      }
    }
  for (std::size_t q = 0; q < skel.size(); ++q)
    for (ObsId z = 0; z < nz; ++z)
      if (!given[q * nz + z] && !m.observation_actions(z).empty())
        throw SchemaError("act misses memory " + std::to_string(q) + ", observation '" +
                          m.observation_name(z) + "'");
  FiniteMemoryStrategy s(skel, std::move(act));
  check_strategy(m, s);
  return s;
}

json strategy_json(const Pomdp& m, const FiniteMemoryStrategy& s) {
  const MemorySkeleton& k = s.skeleton();
  json doc = json::object();
  doc["memory"] = k.size();
  doc["init"] = k.initial();
  json up = json::object();
  json act = json::object();
  for (std::size_t q = 0; q < k.size(); ++q)
    for (ObsId z = 0; z < m.num_observations(); ++z) {
      auto enabled = m.observation_actions(z);
      if (enabled.empty()) continue;
      for (ActionId a : enabled) {
        std::size_t next = k.next(q, z, a);
        if (next != q)
          up[std::to_string(q) + "," + m.observation_name(z) + "," + m.action_name(a)] = next;
      }
      const std::string key = std::to_string(q) + "," + m.observation_name(z);
      if (auto a = s.pure_action(q, z)) {
        act[key] = m.action_name(*a);
      } else {
        json law = json::object();
        for (const auto& [b, p] : s.act(q, z)) law[m.action_name(b)] = to_string(p);
        act[key] = std::move(law);
      }
    }
  doc["update"] = std::move(up);
  doc["act"] = std::move(act);
  return doc;
}

json mixture_json(const Pomdp& m, const FiniteMixture& mix) {
  json doc = json::object();
  json support = json::array(), weights = json::array();
  for (std::size_t i = 0; i < mix.size(); ++i) {
    support.push_back(strategy_json(m, mix.support()[i]));
    weights.push_back(to_string(mix.weights()[i]));
  }
  doc["support"] = std::move(support);
  doc["weights"] = std::move(weights);
  return doc;
}

}  // namespace

StateId Problem::initial_state(std::optional<std::string> name) const {
  if (unrolling) {
    if (name && original.state_id(*name) != unrolling->origin[unrolling->initial])
      throw SchemaError("the cost bound was unrolled from '" +
                        original.state_name(unrolling->origin[unrolling->initial]) +
                        "'; other initial states need another problem file");
    return unrolling->initial;
  }
  if (name) return model.state_id(*name);
  if (initial) return *initial;
  throw SchemaError("no initial state: set \"initial\" in the file or pass --state");
}

Problem load_problem(std::string_view text) {
  const json doc = json_util::parse(text);
  Problem pr{model_from_json(doc), model_from_json(doc), std::nullopt, {}, std::nullopt, {}};
  const Pomdp& m = pr.original;
  if (doc.contains("initial")) {
    if (!doc.at("initial").is_string()) throw SchemaError("'initial' must be a state name");
    pr.initial = m.state_id(doc.at("initial").get<std::string>());
  }
  const auto raw = read_weights(m, doc);
  for (const auto& [name, _] : raw)
    pr.weights.emplace(name, weight_function(m, raw, json{{"weights", name}}));
  if (!doc.contains("payoffs")) return pr;
  const json& ps = doc.at("payoffs");
  if (!ps.is_array()) throw SchemaError("'payoffs' must be an array");
  std::optional<std::size_t> within;
  PayoffSpec within_spec;
  Rational bound;
  for (std::size_t j = 0; j < ps.size(); ++j) {
    const json& p = ps[j];
    if (!p.is_object() || !p.contains("kind") || !p.at("kind").is_string())
      throw SchemaError("payoff " + std::to_string(j) + " needs a 'kind'");
    const std::string kind = p.at("kind").get<std::string>();
    PayoffSpec spec;
    if (kind == "spath_within") {
      if (within) throw UnsupportedKind("at most one spath_within payoff per problem");
      if (!p.contains("bound")) throw SchemaError("spath_within needs a 'bound'");
      within = j;
      bound = json_util::rational(p.at("bound"));
      within_spec = PayoffSpec::shortest_path(m, state_list(m, p, "target"),
                                              weight_function(m, raw, p));
      spec.kind = PayoffKind::kReach;  // placeholder until unrolled
    } else {
      switch (parse_kind(kind)) {
        case PayoffKind::kReach:
          spec = PayoffSpec::reach(m, state_list(m, p, "target"));
          break;
        case PayoffKind::kBuchi:
          spec = PayoffSpec::buchi(m, state_list(m, p, "target"));
          break;
        case PayoffKind::kDiscounted:
          spec = PayoffSpec::discounted(m, lambda_of(p), weight_function(m, raw, p));
          break;
        case PayoffKind::kReachDiscounted:
          spec = PayoffSpec::reach_discounted(m, state_list(m, p, "target"), lambda_of(p),
                                              weight_function(m, raw, p));
          break;
        case PayoffKind::kTotalReward:
          spec = PayoffSpec::total_reward(m, weight_function(m, raw, p));
          break;
        case PayoffKind::kShortestPath:
          spec = PayoffSpec::shortest_path(m, state_list(m, p, "target"),
                                           weight_function(m, raw, p));
          break;
      }
    }
    spec.label = p.contains("label") && p.at("label").is_string() ? p.at("label").get<std::string>()
                                                                  : kind + std::to_string(j);
    pr.payoffs.push_back(std::move(spec));
  }
  if (within) {
    if (!pr.initial) throw SchemaError("spath_within needs an \"initial\" state");
    CostUnrolling u = unroll_cost(m, *pr.initial, within_spec.target, within_spec.weights, bound);
    for (std::size_t j = 0; j < pr.payoffs.size(); ++j) {
      std::string label = pr.payoffs[j].label;
      pr.payoffs[j] = j == *within ? u.within_bound(within_spec.target) : u.lift(m, pr.payoffs[j]);
      pr.payoffs[j].label = std::move(label);
    }
    pr.model = u.model;
    pr.initial = u.initial;
    pr.unrolling = std::move(u);
  }
  return pr;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << text;
}

FiniteMemoryStrategy parse_strategy(const Pomdp& m, std::string_view text) {
  return strategy_from_json(m, json_util::parse(text));
}

std::string strategy_to_json(const Pomdp& m, const FiniteMemoryStrategy& s) {
  return strategy_json(m, s).dump(2);
}

FiniteMixture parse_mixture(const Pomdp& m, std::string_view text) {
  const json doc = json_util::parse(text);
  if (!doc.is_object() || !doc.contains("support") || !doc.contains("weights") ||
      !doc.at("support").is_array() || !doc.at("weights").is_array())
    throw SchemaError("a mixture has array fields 'support' and 'weights'");
  if (doc.at("support").size() != doc.at("weights").size())
    throw SchemaError("one weight per support strategy");
  std::vector<PureStrategy> support;
  std::vector<Rational> weights;
  for (const auto& s : doc.at("support")) {
    support.push_back(strategy_from_json(m, s));
    if (!support.back().is_pure()) throw SchemaError("mixture members must be pure");
  }
  for (const auto& w : doc.at("weights")) weights.push_back(json_util::rational(w));
  return FiniteMixture(std::move(support), std::move(weights));
}

std::string mixture_to_json(const Pomdp& m, const FiniteMixture& mix) {
  return mixture_json(m, mix).dump(2);
}

MemorySkeleton load_skeleton(const Pomdp& m, std::string_view spec) {
  if (spec.rfind("file:", 0) == 0) {
    const std::string path(spec.substr(5));
    MemorySkeleton k = skeleton_from_json(m, json_util::parse(read_text_file(path))).skeleton;
    k.set_label(std::string(spec));
    return k;
  }
  return parse_skeleton(m, spec);
}

std::string describe_strategy(const Pomdp& m, const FiniteMemoryStrategy& s) {
  std::string out;
  for (std::size_t q = 0; q < s.skeleton().size(); ++q)
    for (ObsId z = 0; z < m.num_observations(); ++z) {
      if (m.observation_actions(z).size() < 2) continue;
      if (!out.empty()) out += ' ';
      out += std::to_string(q) + ":" + m.observation_name(z) + "=";
      if (auto a = s.pure_action(q, z)) {
        out += m.action_name(*a);
      } else {
        bool first = true;
        for (const auto& [b, p] : s.act(q, z)) {
          out += (first ? "" : "+") + to_string(p) + m.action_name(b);
          first = false;
        }
      }
    }
  return out.empty() ? "-" : out;
}

std::string decimal(const ExtReal& x, int digits) {
  if (!x.is_finite()) return x.str();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x.to_double());
  return buf;
}

std::string pool_csv(const Pomdp& m, const Pool& pool, const std::vector<std::string>& labels) {
  std::ostringstream out;
  out << "index,strategy";
  for (const auto& l : labels) out << ',' << l << ',' << l << "_decimal";
  out << '\n';
  for (std::size_t i = 0; i < pool.entries.size(); ++i) {
    out << i << ",\"" << describe_strategy(m, pool.entries[i].strategy) << '"';
    for (const auto& x : pool.entries[i].value) out << ',' << x.str() << ',' << decimal(x);
    out << '\n';
  }
  return out.str();
}

std::string hull_json(const Hull& h) {
  json doc = json::object();
  json verts = json::array();
  for (std::size_t i : h.vertices) verts.push_back(json_util::ext_vector(to_ext(h.points[i])));
  auto planes = [](const std::vector<Hyperplane>& hs) {
    json arr = json::array();
    for (const auto& f : hs)
      arr.push_back({{"normal", json_util::ext_vector(to_ext(f.normal))},
                     {"offset", to_string(f.offset)}});
    return arr;
  };
  doc["dimension"] = h.dimension;
  doc["vertex_indices"] = h.vertices;
  doc["vertices"] = std::move(verts);
  doc["facets"] = planes(h.facets);
  doc["equalities"] = planes(h.equalities);
  return doc.dump(2);
}

std::string certificate_json(const Pomdp& m, const MixtureCertificate& c) {
  json doc = json::object();
  doc["relation"] = relation_name(c.relation);
  doc["target"] = json_util::ext_vector(c.target);
  doc["realized"] = json_util::ext_vector(c.realized);
  if (c.relation == Relation::kApproximates) {
    doc["eps"] = to_string(c.eps);
    doc["bigM"] = to_string(c.big_m);
  }
  doc["pool"] = {{"skeleton", c.pool.skeleton}, {"cap", c.pool.cap}, {"size", c.pool.size}};
  doc["members"] = c.members;
  doc["mixture"] = mixture_json(m, c.mixture);
  return doc.dump(2);
}

std::string estimate_csv(const Estimate& e, const std::vector<std::string>& labels,
                         const std::string& strategy) {
  std::ostringstream out;
  out << "strategy,dimension,mean,stderr,bias_bound,censored_fraction,samples,seed\n";
  for (std::size_t j = 0; j < e.mean.size(); ++j) {
    out << '"' << strategy << "\"," << (j < labels.size() ? labels[j] : std::to_string(j)) << ','
        << e.mean[j] << ',' << e.std_error[j] << ','
        << (e.bias[j] ? to_string(*e.bias[j]) : std::string("unknown")) << ',' << e.censored[j]
        << ',' << e.used[j] << ',' << e.seed << '\n';
  }
  return out.str();
}

}  // namespace mopo
