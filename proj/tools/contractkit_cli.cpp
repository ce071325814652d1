// contractkit command-line front end: every pipeline behind one binary with
// JSON reports on stdout and CSV artifacts where a path flag is given.

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "contractkit/instances.hpp"

namespace ck = contractkit;
using ck::Bitmask;
using ck::Json;
using ck::Rational;

namespace {

std::vector<Rational> parse_rational_list(const std::string& csv) {
  std::vector<Rational> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(ck::parse_rational(tok));
  if (out.empty()) throw std::invalid_argument("empty rational list");
  return out;
}

Json members_of(Bitmask s) {
  Json out = Json::array();
  for (int j = 0; j < 32; ++j)
    if (s & (Bitmask(1) << j)) out.push_back(j);
  return out;
}

Json report_header(const std::string& command, const std::string& path, const ck::Instance& inst) {
  Json j;
  j["command"] = command;
  j["instance"] = path;
  std::ostringstream digest;
  digest << std::hex << std::hash<std::string>{}(ck::instance_to_json(inst).dump());
  j["digest"] = digest.str();
  return j;
}

void set_rational(Json& j, const std::string& key, const Rational& r) {
  j[key] = ck::to_string(r);
  j[key + "_decimal"] = ck::to_decimal_string(r);
}

void set_rational_vector(Json& j, const std::string& key, const std::vector<Rational>& v) {
  Json exact = Json::array(), dec = Json::array();
  for (const auto& r : v) {
    exact.push_back(ck::to_string(r));
    dec.push_back(ck::to_decimal_string(r));
  }
  j[key] = exact;
  j[key + "_decimal"] = dec;
}

void emit(const Json& j) { std::cout << j.dump(2) << '\n'; }

ck::FnClass parse_class(const std::string& s) {
  if (s == "additive") return ck::FnClass::Additive;
  if (s == "submodular") return ck::FnClass::Submodular;
  if (s == "supermodular") return ck::FnClass::Supermodular;
  if (s == "subadditive") return ck::FnClass::Subadditive;
  if (s == "gs" || s == "gross_substitutes") return ck::FnClass::GrossSubstitutes;
  throw std::invalid_argument("unknown class: " + s +
                              " (want additive|submodular|supermodular|subadditive|gs)");
}

ck::DemandEngine parse_engine(const std::string& s) {
  if (s == "brute") return ck::DemandEngine::Brute;
  if (s == "gs") return ck::DemandEngine::Gs;
  if (s == "ultra") return ck::DemandEngine::Ultra;
  throw std::invalid_argument("unknown engine: " + s + " (want brute|gs|ultra)");
}

const ck::SetFunction& function_of(const ck::Instance& inst) {
  if (const auto* sa = std::get_if<ck::SingleAgentInstance>(&inst)) return sa->f;
  if (const auto* bt = std::get_if<ck::BinaryTeamInstance>(&inst)) return bt->f;
  return std::get<ck::MultiTeamInstance>(inst).f;
}

int run_check_class(const std::string& path, const std::string& cls) {
  auto inst = ck::load_instance(path);
  bool verdict = ck::check_class(function_of(inst), parse_class(cls));
  Json j = report_header("check-class", path, inst);
  j["class"] = cls;
  j["verdict"] = verdict;
  emit(j);
  return verdict ? 0 : 1;
}

int run_demand(const std::string& path, const std::string& prices, const std::string& engine) {
  auto inst = ck::load_instance(path);
  const auto& f = function_of(inst);
  ck::PriceVector p(parse_rational_list(prices));
  auto d = ck::run_demand(f, p, parse_engine(engine));
  Json j = report_header("demand", path, inst);
  j["engine"] = engine;
  j["set_bitmask"] = std::uint32_t(d.set);
  j["set"] = members_of(d.set);
  set_rational(j, "value", f.value(d.set));
  set_rational(j, "surplus", d.surplus);
  emit(j);
  return 0;
}

int run_envelope(const std::string& path, const std::string& from, const std::string& to,
                 const std::string& out) {
  auto loaded = ck::load_instance(path);
  const auto* sa = std::get_if<ck::SingleAgentInstance>(&loaded);
  if (!sa) throw std::invalid_argument("envelope requires a single_agent instance");
  Rational lo = ck::parse_rational(from), hi = ck::parse_rational(to);
  auto cvs = ck::enumerate_critical_values(*sa, lo, hi);
  auto segs = ck::envelope_segments(*sa, lo, hi);
  Json j = report_header("envelope", path, loaded);
  Json jc = Json::array();
  for (const auto& cv : cvs) {
    Json e;
    set_rational(e, "alpha", cv.alpha);
    e["incoming_bitmask"] = std::uint32_t(cv.incoming);
    e["outgoing_bitmask"] = std::uint32_t(cv.outgoing);
    jc.push_back(e);
  }
  j["critical_values"] = jc;
  Json js = Json::array();
  for (const auto& seg : segs) {
    Json e;
    set_rational(e, "alpha_lo", seg.alpha_lo);
    set_rational(e, "alpha_hi", seg.alpha_hi);
    e["set_bitmask"] = std::uint32_t(seg.set);
    e["set"] = members_of(seg.set);
    set_rational(e, "f", sa->f.value(seg.set));
    set_rational(e, "cost", sa->cost(seg.set));
    js.push_back(e);
  }
  j["segments"] = js;
  if (!out.empty()) {
    std::ofstream os(out);
    if (!os) throw std::runtime_error("cannot open for writing: " + out);
    ck::write_envelope_csv(os, *sa, segs);
    j["csv"] = out;
  }
  emit(j);
  return 0;
}

Json contract_result_json(const ck::SingleAgentInstance& sa, const ck::ContractResult& r) {
  Json j;
  set_rational(j, "alpha", r.alpha);
  j["set_bitmask"] = std::uint32_t(r.set);
  j["set"] = members_of(r.set);
  auto u = ck::utilities(sa, r.alpha, r.set);  // re-derived, must match the search
  if (u.principal != r.principal_utility || u.agent != r.agent_utility)
    throw std::logic_error("report re-validation failed");
  set_rational(j, "principal_utility", u.principal);
  set_rational(j, "agent_utility", u.agent);
  set_rational(j, "welfare", u.welfare);
  return j;
}

int run_optimal(const std::string& path) {
  auto inst = ck::load_instance(path);
  Json j = report_header("optimal", path, inst);
  if (const auto* sa = std::get_if<ck::SingleAgentInstance>(&inst)) {
    j["model"] = "single_agent";
    j.update(contract_result_json(*sa, ck::optimal_contract(*sa)));
  } else if (const auto* bt = std::get_if<ck::BinaryTeamInstance>(&inst)) {
    j["model"] = "binary_team";
    auto opt = ck::brute_force_optimal_team(*bt);
    j["set_bitmask"] = std::uint32_t(opt.set);
    j["set"] = members_of(opt.set);
    auto tc = ck::min_payment_contract(*bt, opt.set);
    set_rational_vector(j, "alpha", tc ? tc->alpha : std::vector<Rational>(bt->n(), 0));
    set_rational(j, "profit", opt.profit);
  } else {
    throw std::invalid_argument("optimal supports single_agent and binary_team instances");
  }
  emit(j);
  return 0;
}

int run_fptas(const std::string& path, const std::string& eps_str) {
  auto inst = ck::load_instance(path);
  Rational eps = ck::parse_rational(eps_str);
  Json j = report_header("fptas", path, inst);
  set_rational(j, "eps", eps);
  if (const auto* sa = std::get_if<ck::SingleAgentInstance>(&inst)) {
    j["model"] = "single_agent";
    j.update(contract_result_json(*sa, ck::fptas_contract(*sa, eps)));
  } else if (const auto* bt = std::get_if<ck::BinaryTeamInstance>(&inst)) {
    j["model"] = "binary_team";
    auto r = ck::fptas_additive_team(*bt, eps);
    j["set_bitmask"] = std::uint32_t(r.set);
    j["set"] = members_of(r.set);
    auto tc = ck::min_payment_contract(*bt, r.set);
    set_rational_vector(j, "alpha", tc ? tc->alpha : std::vector<Rational>(bt->n(), 0));
    set_rational(j, "profit", r.profit);
  } else {
    throw std::invalid_argument("fptas supports single_agent and additive binary_team instances");
  }
  emit(j);
  return 0;
}

int run_team_approx(const std::string& path) {
  auto inst = ck::load_instance(path);
  const auto* bt = std::get_if<ck::BinaryTeamInstance>(&inst);
  if (!bt) throw std::invalid_argument("team-approx requires a binary_team instance");
  auto r = ck::constant_approx_submodular_team(*bt);
  Json j = report_header("team-approx", path, inst);
  j["set_bitmask"] = std::uint32_t(r.set);
  j["set"] = members_of(r.set);
  set_rational_vector(j, "alpha", r.alpha);
  set_rational(j, "profit", r.profit);
  if (bt->n() <= ck::exhaustive_limit()) {
    auto opt = ck::brute_force_optimal_team(*bt);
    set_rational(j, "brute_force_profit", opt.profit);
    Rational ratio = opt.profit == 0 ? Rational(1) : r.profit / opt.profit;
    set_rational(j, "empirical_ratio", ratio);
  }
  emit(j);
  return 0;
}

int run_equilibria(const std::string& path, const std::string& alpha_csv, bool dynamics,
                   std::uint32_t start, int max_rounds, const std::string& out) {
  auto inst = ck::load_instance(path);
  const auto* mt = std::get_if<ck::MultiTeamInstance>(&inst);
  if (!mt) throw std::invalid_argument("equilibria requires a multi_team instance");
  ck::VectorContract vc(parse_rational_list(alpha_csv));
  Json j = report_header("equilibria", path, inst);
  set_rational_vector(j, "alpha", vc.alpha);
  if (!dynamics) {
    auto eqs = ck::enumerate_equilibria(*mt, vc);
    Json je = Json::array();
    for (Bitmask s : eqs) {
      Json e;
      e["profile_bitmask"] = std::uint32_t(s);
      e["profile"] = members_of(s);
      set_rational(e, "f", mt->f.value(s));
      auto phi = ck::potential(*mt, vc, s);
      e["potential"] = phi ? Json(ck::to_string(*phi)) : Json("-inf");
      je.push_back(e);
    }
    j["equilibria"] = je;
    j["potential_maximizer_bitmask"] = std::uint32_t(ck::find_equilibrium(*mt, vc));
    emit(j);
    return 0;
  }
  if (start > mt->f.full_mask()) throw std::invalid_argument("start profile out of range");
  auto run = ck::best_response_dynamics(*mt, vc, start, max_rounds);
  j["start_bitmask"] = start;
  j["converged"] = run.converged;
  j["profile_bitmask"] = std::uint32_t(run.profile);
  j["profile"] = members_of(run.profile);
  Json jt = Json::array();
  for (const auto& step : run.trace) {
    Json e;
    e["agent"] = step.agent;
    e["profile_bitmask"] = std::uint32_t(step.profile);
    e["potential"] = step.potential ? Json(ck::to_string(*step.potential)) : Json("-inf");
    jt.push_back(e);
  }
  j["trace"] = jt;
  if (!out.empty()) {
    std::ofstream os(out);
    if (!os) throw std::runtime_error("cannot open for writing: " + out);
    os << "step,agent,profile_bitmask,potential\n";
    for (std::size_t i = 0; i < run.trace.size(); ++i)
      os << i << ',' << run.trace[i].agent << ',' << std::uint32_t(run.trace[i].profile) << ','
         << (run.trace[i].potential ? ck::to_string(*run.trace[i].potential) : "-inf") << '\n';
    j["csv"] = out;
  }
  emit(j);
  return 0;
}

int run_gen(const std::string& kind, int n, std::uint64_t seed, const std::string& out) {
  auto inst = ck::generate(ck::parse_gen_kind(kind), n, seed);
  ck::save_instance(inst, out);
  Json j = report_header("gen", out, inst);
  j["kind"] = kind;
  j["n"] = n;
  j["seed"] = seed;
  j["out"] = out;
  emit(j);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"contractkit: linear contracts for combinatorial agency models"};
  app.require_subcommand(1);

  std::string path, cls, prices, engine = "brute", from = "0", to = "1", out, eps, alpha_csv,
              kind;
  int n = 0, max_rounds = 1000;
  std::uint64_t seed = 0;
  std::uint32_t start = 0;
  bool dynamics = false;

  auto* c_check = app.add_subcommand("check-class", "Test membership in a set-function class");
  c_check->add_option("--instance", path)->required();
  c_check->add_option("--class", cls)->required();

  auto* c_demand = app.add_subcommand("demand", "Answer a demand query");
  c_demand->add_option("--instance", path)->required();
  c_demand->add_option("--prices", prices)->required();
  c_demand->add_option("--engine", engine);

  auto* c_env = app.add_subcommand("envelope", "Critical values and envelope segments");
  c_env->add_option("--instance", path)->required();
  c_env->add_option("--from", from);
  c_env->add_option("--to", to);
  c_env->add_option("--out", out);

  auto* c_opt = app.add_subcommand("optimal", "Exact optimal contract");
  c_opt->add_option("--instance", path)->required();

  auto* c_fptas = app.add_subcommand("fptas", "(1-eps)-approximate contract");
  c_fptas->add_option("--instance", path)->required();
  c_fptas->add_option("--eps", eps)->required();

  auto* c_team = app.add_subcommand("team-approx", "Constant-factor submodular team contract");
  c_team->add_option("--instance", path)->required();

  auto* c_eq = app.add_subcommand("equilibria", "Pure Nash equilibria or dynamics");
  c_eq->add_option("--instance", path)->required();
  c_eq->add_option("--alpha", alpha_csv)->required();
  c_eq->add_flag("--dynamics", dynamics);
  c_eq->add_option("--start", start);
  c_eq->add_option("--max-rounds", max_rounds);
  c_eq->add_option("--out", out);

  auto* c_gen = app.add_subcommand("gen", "Generate a seeded instance file");
  c_gen->add_option("--kind", kind)->required();
  c_gen->add_option("--n", n)->required();
  c_gen->add_option("--seed", seed)->required();
  c_gen->add_option("--out", out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*c_check) return run_check_class(path, cls);
    if (*c_demand) return run_demand(path, prices, engine);
    if (*c_env) return run_envelope(path, from, to, out);
    if (*c_opt) return run_optimal(path);
    if (*c_fptas) return run_fptas(path, eps);
    if (*c_team) return run_team_approx(path);
    if (*c_eq) return run_equilibria(path, alpha_csv, dynamics, start, max_rounds, out);
    if (*c_gen) return run_gen(kind, n, seed, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
