#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "contractkit/single_agent.hpp"
#include "contractkit/team_binary.hpp"
#include "contractkit/team_multi.hpp"

namespace contractkit {

using Json = nlohmann::ordered_json;

using Instance = std::variant<SingleAgentInstance, BinaryTeamInstance, MultiTeamInstance>;

namespace detail {

inline Json function_to_json(const SetFunction& f) {
  Json j;
  j["n"] = f.n();
  switch (f.kind()) {
    case FnKind::Explicit: {
      j["kind"] = "explicit";
      Json vals = Json::array();
      for (const auto& v : f.table()) vals.push_back(to_string(v));
      j["values"] = vals;
      break;
    }
    case FnKind::Additive: {
      j["kind"] = "additive";
      Json w = Json::array();
      for (const auto& v : f.weights()) w.push_back(to_string(v));
      j["weights"] = w;
      break;
    }
    case FnKind::Coverage: {
      j["kind"] = "coverage";
      Json w = Json::array();
      for (const auto& v : f.item_weights()) w.push_back(to_string(v));
      j["item_weights"] = w;
      Json cov = Json::array();
      for (Bitmask c : f.covers()) {
        Json items = Json::array();
        for (int i = 0; i < 32; ++i)
          if (c & (Bitmask(1) << i)) items.push_back(i);
        cov.push_back(items);
      }
      j["covers"] = cov;
      break;
    }
    case FnKind::Xos: {
      j["kind"] = "xos";
      Json cls = Json::array();
      for (const auto& clause : f.clauses()) {
        Json cl = Json::array();
        for (const auto& v : clause) cl.push_back(to_string(v));
        cls.push_back(cl);
      }
      j["clauses"] = cls;
      break;
    }
    case FnKind::SupermodularSquare: {
      j["kind"] = "supermodular_square";
      Json w = Json::array();
      for (const auto& v : f.weights()) w.push_back(to_string(v));
      j["weights"] = w;
      break;
    }
  }
  return j;
}

inline std::vector<Rational> parse_rational_array(const Json& arr, const char* field) {
  if (!arr.is_array()) throw std::invalid_argument(std::string("field '") + field + "' must be an array");
  std::vector<Rational> out;
  for (const auto& v : arr) {
    if (v.is_number_integer())
      out.push_back(Rational(v.get<long>()));
    else if (v.is_string())
      out.push_back(parse_rational(v.get<std::string>()));
    else
      throw std::invalid_argument(std::string("field '") + field + "' holds a non-rational entry");
  }
  return out;
}

inline SetFunction function_from_json(const Json& j) {
  if (!j.contains("kind")) throw std::invalid_argument("function: missing 'kind'");
  if (!j.contains("n")) throw std::invalid_argument("function: missing 'n'");
  std::string kind = j["kind"].get<std::string>();
  int n = j["n"].get<int>();
  if (kind == "explicit")
    return SetFunction::make_explicit(n, parse_rational_array(j.at("values"), "values"));
  if (kind == "additive") {
    auto w = parse_rational_array(j.at("weights"), "weights");
    if (int(w.size()) != n) throw std::invalid_argument("function: 'weights' arity mismatch");
    return SetFunction::make_additive(std::move(w));
  }
  if (kind == "coverage") {
    auto w = parse_rational_array(j.at("item_weights"), "item_weights");
    std::vector<Bitmask> covers;
    for (const auto& items : j.at("covers")) {
      Bitmask c = 0;
      for (const auto& it : items) c |= Bitmask(1) << it.get<int>();
      covers.push_back(c);
    }
    return SetFunction::make_coverage(n, std::move(w), std::move(covers));
  }
  if (kind == "xos") {
    std::vector<std::vector<Rational>> clauses;
    for (const auto& cl : j.at("clauses")) clauses.push_back(parse_rational_array(cl, "clauses"));
    return SetFunction::make_xos(n, std::move(clauses));
  }
  if (kind == "supermodular_square") {
    auto w = parse_rational_array(j.at("weights"), "weights");
    if (int(w.size()) != n) throw std::invalid_argument("function: 'weights' arity mismatch");
    return SetFunction::make_supermodular_square(std::move(w));
  }
  throw std::invalid_argument("function: unknown kind '" + kind + "'");
}

}  // namespace detail

inline Json instance_to_json(const Instance& inst) {
  Json j;
  if (const auto* sa = std::get_if<SingleAgentInstance>(&inst)) {
    j["model"] = "single_agent";
    j["function"] = detail::function_to_json(sa->f);
    Json c = Json::array();
    for (const auto& v : sa->c) c.push_back(to_string(v));
    j["costs"] = c;
  } else if (const auto* bt = std::get_if<BinaryTeamInstance>(&inst)) {
    j["model"] = "binary_team";
    j["function"] = detail::function_to_json(bt->f);
    Json c = Json::array();
    for (const auto& v : bt->c) c.push_back(to_string(v));
    j["costs"] = c;
  } else {
    const auto& mt = std::get<MultiTeamInstance>(inst);
    j["model"] = "multi_team";
    j["agents"] = mt.agents;
    j["function"] = detail::function_to_json(mt.f);
    Json c = Json::array();
    for (const auto& v : mt.c) c.push_back(to_string(v));
    j["costs"] = c;
    Json part = Json::array();
    for (int i = 0; i < mt.agents; ++i) {
      Json acts = Json::array();
      for (int a = 0; a < mt.actions(); ++a)
        if (mt.owner[a] == i) acts.push_back(a);
      part.push_back(acts);
    }
    j["partition"] = part;
  }
  return j;
}

inline Instance instance_from_json(const Json& j) {
  if (!j.contains("model")) throw std::invalid_argument("instance: missing 'model'");
  std::string model = j["model"].get<std::string>();
  if (model != "single_agent" && model != "binary_team" && model != "multi_team")
    throw std::invalid_argument("instance: unknown model '" + model + "'");
  SetFunction f = detail::function_from_json(j.at("function"));
  auto costs = detail::parse_rational_array(j.at("costs"), "costs");
  if (model == "single_agent") return SingleAgentInstance(std::move(f), std::move(costs));
  if (model == "binary_team") return BinaryTeamInstance(std::move(f), std::move(costs));
  if (model == "multi_team") {
    int agents = j.at("agents").get<int>();
    std::vector<int> owner(f.n(), -1);
    const auto& part = j.at("partition");
    if (!part.is_array() || int(part.size()) != agents)
      throw std::invalid_argument("instance: 'partition' must list one action set per agent");
    for (int i = 0; i < agents; ++i)
      for (const auto& a : part[i]) {
        int act = a.get<int>();
        if (act < 0 || act >= f.n())
          throw std::invalid_argument("instance: partition references unknown action");
        if (owner[act] != -1)
          throw std::invalid_argument("instance: partition assigns an action twice");
        owner[act] = i;
      }
    for (int a = 0; a < f.n(); ++a)
      if (owner[a] == -1)
        throw std::invalid_argument("instance: partition leaves an action unassigned");
    return MultiTeamInstance(std::move(f), std::move(costs), std::move(owner), agents);
  }
  throw std::invalid_argument("instance: unknown model '" + model + "'");
}

inline void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << instance_to_json(inst).dump(2) << '\n';
}

inline Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("parse error in " + path + ": " + e.what());
  }
  return instance_from_json(j);
}

// The worked examples, rational-exact.
inline Instance paper_example(const std::string& name) {
  if (name == "ex3_1") {
    return SingleAgentInstance(
        SetFunction::make_additive({{3, 10}, {1, 5}, {1, 2}}),
        {{1, 10}, {1, 10}, {2, 5}});
  }
  if (name == "ex3_2") {
    // Table indexed by bitmask; action j <-> bit j.
    std::vector<Rational> table = {0,        {1, 4},  {1, 2}, {11, 20},
                                   {1, 4},   {1, 2},  {3, 4}, {4, 5}};
    return SingleAgentInstance(SetFunction::make_explicit(3, std::move(table)),
                               {{1, 80}, {3, 80}, {1, 8}});
  }
  if (name == "ex4_1") {
    std::vector<Rational> table = {0, {1, 2}, {1, 2}, {3, 4}};
    return BinaryTeamInstance(SetFunction::make_explicit(2, std::move(table)),
                              {{1, 4}, {1, 4}});
  }
  throw std::invalid_argument("unknown paper example: " + name);
}

enum class GenKind { Additive, Coverage, Xos, SupermodularSquare, BinaryTeam, MultiTeam };

inline GenKind parse_gen_kind(const std::string& s) {
  if (s == "additive") return GenKind::Additive;
  if (s == "coverage") return GenKind::Coverage;
  if (s == "xos") return GenKind::Xos;
  if (s == "supermodular_square") return GenKind::SupermodularSquare;
  if (s == "binary_team") return GenKind::BinaryTeam;
  if (s == "multi_team") return GenKind::MultiTeam;
  throw std::invalid_argument("unknown generator kind: " + s);
}

namespace detail {

// Costs drawn from {k/100 : k = 1..floor(100 f({i}))}, so positive-welfare
// singletons exist with probability bounded away from zero.
inline std::vector<Rational> draw_costs(const SetFunction& f, std::mt19937_64& rng) {
  std::vector<Rational> c(f.n());
  for (int i = 0; i < f.n(); ++i) {
    Rational fi = f.value(Bitmask(1) << i);
    long hi = Integer(fi * 100).convert_to<long>();
    if (hi < 1) {
      c[i] = 0;
      continue;
    }
    std::uniform_int_distribution<long> d(1, hi);
    c[i] = Rational(d(rng), 100);
  }
  return c;
}

inline SetFunction gen_function(GenKind kind, int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> w100(1, 100);
  switch (kind) {
    case GenKind::Additive: {
      std::vector<Rational> w(n);
      long total = 0;
      std::vector<long> raw(n);
      for (int i = 0; i < n; ++i) total += raw[i] = w100(rng);
      for (int i = 0; i < n; ++i) w[i] = Rational(raw[i], total);
      return SetFunction::make_additive(std::move(w));
    }
    case GenKind::Coverage: {
      int items = std::min(2 * n, 20);
      std::vector<long> raw(items);
      long total = 0;
      for (int i = 0; i < items; ++i) total += raw[i] = w100(rng);
      std::vector<Rational> iw(items);
      for (int i = 0; i < items; ++i) iw[i] = Rational(raw[i], total);
      std::vector<Bitmask> covers(n);
      std::uniform_int_distribution<int> item(0, items - 1);
      std::uniform_int_distribution<int> deg(1, std::max(1, items / 2));
      for (int j = 0; j < n; ++j) {
        int d = deg(rng);
        for (int k = 0; k < d; ++k) covers[j] |= Bitmask(1) << item(rng);
      }
      return SetFunction::make_coverage(n, std::move(iw), std::move(covers));
    }
    case GenKind::Xos: {
      std::uniform_int_distribution<int> nclauses(2, 4);
      int ell = nclauses(rng);
      std::vector<std::vector<Rational>> clauses(ell, std::vector<Rational>(n));
      for (auto& cl : clauses) {
        long total = 0;
        std::vector<long> raw(n);
        for (int i = 0; i < n; ++i) total += raw[i] = w100(rng);
        for (int i = 0; i < n; ++i) cl[i] = Rational(raw[i], total);
      }
      return SetFunction::make_xos(n, std::move(clauses));
    }
    case GenKind::SupermodularSquare: {
      std::vector<Rational> w(n);
      for (int i = 0; i < n; ++i) w[i] = w100(rng);
      return SetFunction::make_supermodular_square(std::move(w));
    }
    default:
      throw std::invalid_argument("not a function kind");
  }
}

}  // namespace detail

// Deterministic per (kind, n, seed). Team kinds wrap a coverage function.
inline Instance generate(GenKind kind, int n, std::uint64_t seed) {
  if (n < 1 || n > kMaxGroundSet) throw std::invalid_argument("n out of range");
  std::mt19937_64 rng(seed);
  switch (kind) {
    case GenKind::Additive:
    case GenKind::Coverage:
    case GenKind::Xos:
    case GenKind::SupermodularSquare: {
      SetFunction f = detail::gen_function(kind, n, rng);
      auto c = detail::draw_costs(f, rng);
      return SingleAgentInstance(std::move(f), std::move(c));
    }
    case GenKind::BinaryTeam: {
      SetFunction f = detail::gen_function(GenKind::Coverage, n, rng);
      auto c = detail::draw_costs(f, rng);
      return BinaryTeamInstance(std::move(f), std::move(c));
    }
    case GenKind::MultiTeam: {
      SetFunction f = detail::gen_function(GenKind::Coverage, n, rng);
      auto c = detail::draw_costs(f, rng);
      std::uniform_int_distribution<int> nagents(1, std::max(1, n / 2));
      int agents = nagents(rng);
      std::vector<int> owner(n);
      for (int a = 0; a < n; ++a) owner[a] = a % agents;  // every agent non-empty
      return MultiTeamInstance(std::move(f), std::move(c), std::move(owner), agents);
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace contractkit
