#pragma once

#include <cmath>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "contractkit/demand.hpp"

namespace contractkit {

// The single-agent multi-action model: additive action costs, a monotone
// success-probability function over action subsets, linear contracts.
struct SingleAgentInstance {
  SetFunction f;
  std::vector<Rational> c;

  SingleAgentInstance(SetFunction fn, std::vector<Rational> costs)
      : f(std::move(fn)), c(std::move(costs)) {
    if (c.size() != std::size_t(f.n()))
      throw std::invalid_argument("cost vector arity mismatch");
    for (const auto& ci : c)
      if (ci < 0) throw std::invalid_argument("costs must be nonnegative");
    if (f.value(f.full_mask()) > 1)
      throw std::invalid_argument("success probabilities must lie in [0, 1]");
  }

  int n() const { return f.n(); }

  Rational cost(Bitmask s) const {
    Rational t = 0;
    for (int j = 0; j < n(); ++j)
      if (s & (Bitmask(1) << j)) t += c[j];
    return t;
  }
};

struct Utilities {
  Rational agent;      // alpha f(S) - c(S)
  Rational principal;  // (1 - alpha) f(S)
  Rational welfare;    // f(S) - c(S)
};

inline Utilities utilities(const SingleAgentInstance& inst, const Rational& alpha, Bitmask s) {
  if (alpha < 0 || alpha > 1) throw std::invalid_argument("alpha must be in [0, 1]");
  Rational fv = inst.f.value(s);
  Rational cv = inst.cost(s);
  return {alpha * fv - cv, (1 - alpha) * fv, fv - cv};
}

struct CriticalValue {
  Rational alpha;
  Bitmask incoming;  // best response just below alpha
  Bitmask outgoing;  // best response at and above alpha
};

struct EnvelopeSegment {
  Bitmask set;
  Rational alpha_lo;  // inclusive
  Rational alpha_hi;  // exclusive; the final segment is closed at 1
};

namespace detail {

// Eisner-Severance recursion over (L, R]. With the favor-the-principal
// tie-break the best response at a critical value is the outgoing set, so the
// single-breakpoint base case is detected by S_M == S_R (testing against S_L,
// as the textbook statement does, assumes the opposite interval convention
// and never fires here).
inline void enumerate_cv_rec(const SingleAgentInstance& inst, DemandEngine engine,
                             const Rational& lo, Bitmask set_lo, const Rational& hi,
                             Bitmask set_hi, std::vector<CriticalValue>& out) {
  if (set_lo == set_hi || lo >= hi) return;
  Rational df = inst.f.value(set_hi) - inst.f.value(set_lo);
  Rational dc = inst.cost(set_hi) - inst.cost(set_lo);
  Rational mid = dc / df;  // df > 0 by envelope monotonicity
  Bitmask set_mid = best_response(inst.f, inst.c, mid, engine).set;
  if (set_mid == set_hi) {
    out.push_back({mid, set_lo, set_hi});
    return;
  }
  enumerate_cv_rec(inst, engine, lo, set_lo, mid, set_mid, out);
  enumerate_cv_rec(inst, engine, mid, set_mid, hi, set_hi, out);
}

}  // namespace detail

// All critical values in (L, R], sorted ascending, each with the incumbent
// set on both sides. Runs in time linear in the number of critical values.
inline std::vector<CriticalValue> enumerate_critical_values(
    const SingleAgentInstance& inst, const Rational& lo, const Rational& hi,
    DemandEngine engine = DemandEngine::Brute) {
  if (lo < 0 || hi > 1 || lo >= hi) throw std::invalid_argument("need 0 <= L < R <= 1");
  Bitmask set_lo = best_response(inst.f, inst.c, lo, engine).set;
  Bitmask set_hi = best_response(inst.f, inst.c, hi, engine).set;
  std::vector<CriticalValue> out;
  detail::enumerate_cv_rec(inst, engine, lo, set_lo, hi, set_hi, out);
  return out;
}

// The envelope over [L, R] as half-open segments (last segment closed).
inline std::vector<EnvelopeSegment> envelope_segments(const SingleAgentInstance& inst,
                                                      const Rational& lo, const Rational& hi,
                                                      DemandEngine engine = DemandEngine::Brute) {
  auto cvs = enumerate_critical_values(inst, lo, hi, engine);
  std::vector<EnvelopeSegment> segs;
  Rational cur = lo;
  Bitmask cur_set = best_response(inst.f, inst.c, lo, engine).set;
  for (const auto& cv : cvs) {
    segs.push_back({cur_set, cur, cv.alpha});
    cur = cv.alpha;
    cur_set = cv.outgoing;
  }
  segs.push_back({cur_set, cur, hi});
  return segs;
}

inline void write_envelope_csv(std::ostream& os, const SingleAgentInstance& inst,
                               const std::vector<EnvelopeSegment>& segs) {
  os << "alpha_lo,alpha_hi,set_bitmask,f,cost\n";
  for (const auto& seg : segs)
    os << to_string(seg.alpha_lo) << ',' << to_string(seg.alpha_hi) << ',' << seg.set << ','
       << to_string(inst.f.value(seg.set)) << ',' << to_string(inst.cost(seg.set)) << '\n';
}

struct ContractResult {
  Rational alpha;
  Bitmask set;
  Rational principal_utility;
  Rational agent_utility;
};

namespace detail {

inline ContractResult evaluate_contract(const SingleAgentInstance& inst, const Rational& alpha,
                                        DemandEngine engine) {
  BestResponse br = best_response(inst.f, inst.c, alpha, engine);
  return {alpha, br.set, (1 - alpha) * inst.f.value(br.set), br.agent_utility};
}

inline void keep_better(std::optional<ContractResult>& best, const ContractResult& cand) {
  if (!best || cand.principal_utility > best->principal_utility ||
      (cand.principal_utility == best->principal_utility &&
       (cand.alpha < best->alpha || (cand.alpha == best->alpha && cand.set < best->set))))
    best = cand;
}

}  // namespace detail

// Exact optimal linear contract: every segment's left endpoint (alpha = 0 plus
// each critical value) is a candidate; ties go to smaller alpha then set.
inline ContractResult optimal_contract(const SingleAgentInstance& inst,
                                       DemandEngine engine = DemandEngine::Brute) {
  std::optional<ContractResult> best;
  detail::keep_better(best, detail::evaluate_contract(inst, 0, engine));
  for (const auto& cv : enumerate_critical_values(inst, 0, 1, engine))
    detail::keep_better(best, detail::evaluate_contract(inst, cv.alpha, engine));
  return *best;
}

// Geometric candidate grid in (1 - alpha): {0} u {1 - (1-eps)^k} u {1}.
// Every breakpoint alpha* = dc/df has 1 - alpha* = (df - dc)/df >= 1/D, where
// D is the lcm of all value and cost denominators (df <= 1 and df - dc is a
// positive multiple of 1/D), so running the grid below 1/(2D) guarantees a
// point alpha in [alpha*, 1) with (1 - alpha) >= (1-eps)(1 - alpha*); by
// envelope monotonicity that point earns at least (1-eps) OPT. The grid also
// stops early once (1 - alpha) drops below the best utility found, since no
// deeper point can pay more than (1 - alpha).
inline ContractResult fptas_contract(const SingleAgentInstance& inst, const Rational& epsilon,
                                     DemandEngine engine = DemandEngine::Brute) {
  if (epsilon <= 0 || epsilon >= 1) throw std::invalid_argument("epsilon must be in (0, 1)");
  Integer d = 1;
  for (const auto& v : inst.f.value_table()) d = lcm(d, Integer(denominator(v)));
  for (const auto& ci : inst.c) d = lcm(d, Integer(denominator(ci)));
  const Rational floor_val(1, 2 * d);

  std::optional<ContractResult> best;
  detail::keep_better(best, detail::evaluate_contract(inst, 0, engine));
  const Rational keep = 1 - epsilon;
  for (Rational pow_k = keep;; pow_k *= keep) {
    detail::keep_better(best, detail::evaluate_contract(inst, 1 - pow_k, engine));
    if (pow_k <= floor_val || pow_k <= best->principal_utility) break;
  }
  detail::keep_better(best, detail::evaluate_contract(inst, 1, engine));
  return *best;
}

// Envelope for supermodular f with the nested-chain property asserted:
// consecutive best-response sets must be contained in each other.
inline std::vector<CriticalValue> supermodular_chain(const SingleAgentInstance& inst) {
  auto cvs = enumerate_critical_values(inst, 0, 1, DemandEngine::Brute);
  Bitmask prev = best_response(inst.f, inst.c, 0, DemandEngine::Brute).set;
  for (const auto& cv : cvs) {
    if (cv.incoming != prev || (cv.incoming & ~cv.outgoing) != 0)
      throw std::logic_error(
          "nested-chain violation: input is not supermodular or tie-break is inconsistent");
    prev = cv.outgoing;
  }
  return cvs;
}

}  // namespace contractkit
