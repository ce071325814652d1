#pragma once

#include <stdexcept>
#include <vector>

#include "contractkit/setfn.hpp"

namespace contractkit {

struct PriceVector {
  std::vector<Rational> p;

  explicit PriceVector(std::vector<Rational> prices) : p(std::move(prices)) {
    for (const auto& x : p)
      if (x < 0) throw std::invalid_argument("prices must be nonnegative");
  }

  Rational total(Bitmask s) const {
    Rational t = 0;
    for (std::size_t j = 0; j < p.size(); ++j)
      if (s & (Bitmask(1) << j)) t += p[j];
    return t;
  }
};

struct DemandResult {
  Bitmask set = 0;
  Rational surplus = 0;  // f(set) - p(set)
};

namespace detail {

// Canonical set ordering for ties: larger f first, then smaller bitmask.
inline bool prefer(const Rational& f_a, Bitmask a, const Rational& f_b, Bitmask b) {
  if (f_a != f_b) return f_a > f_b;
  return a < b;
}

}  // namespace detail

// Global maximizer of f(S) - p(S) over all subsets. Ties favor the principal:
// larger f(S), then smallest bitmask.
inline DemandResult brute_force_demand(const SetFunction& f, const PriceVector& p) {
  detail::require_desk_scale(f);
  if (p.p.size() != std::size_t(f.n()))
    throw std::invalid_argument("price vector arity mismatch");
  const auto tab = f.value_table();

  std::vector<Rational> priced(std::size_t(1) << f.n());
  for (Bitmask s = 1; s <= f.full_mask(); ++s) {
    Bitmask low = s & (~s + 1);
    priced[s] = priced[s & (s - 1)] + p.p[__builtin_ctz(low)];
  }

  DemandResult best{0, 0};
  for (Bitmask s = 1; s <= f.full_mask(); ++s) {
    Rational surplus = tab[s] - priced[s];
    if (surplus > best.surplus ||
        (surplus == best.surplus && detail::prefer(tab[s], s, tab[best.set], best.set)))
      best = {s, surplus};
  }
  return best;
}

// Algorithm GreedyGS: repeatedly add the element with the largest marginal
// surplus f(x|S) - p(x); stop when it turns negative. An element with zero
// marginal surplus but positive marginal value is still added (favor the
// principal); a zero/zero element is not.
inline DemandResult greedy_gs_demand(const SetFunction& f, const PriceVector& p) {
  if (p.p.size() != std::size_t(f.n()))
    throw std::invalid_argument("price vector arity mismatch");
  Bitmask s = 0;
  Rational surplus = 0;
  for (int step = 0; step < f.n(); ++step) {
    int best = -1;
    Rational best_gain = 0, best_marg = 0;
    for (int j = 0; j < f.n(); ++j) {
      Bitmask bj = Bitmask(1) << j;
      if (s & bj) continue;
      Rational marg = f.marginal(bj, s);
      Rational gain = marg - p.p[j];
      if (best < 0 || gain > best_gain || (gain == best_gain && marg > best_marg)) {
        best = j;
        best_gain = gain;
        best_marg = marg;
      }
    }
    if (best_gain < 0 || (best_gain == 0 && best_marg == 0)) break;
    s |= Bitmask(1) << best;
    surplus += best_gain;
  }
  return {s, surplus};
}

// Algorithm GreedyUltra: builds the full greedy chain regardless of the sign
// of marginals, then returns the chain prefix with the best surplus. Ties at
// the final argmax favor larger f, then the shorter prefix.
inline DemandResult greedy_ultra_demand(const SetFunction& f, const PriceVector& p) {
  if (p.p.size() != std::size_t(f.n()))
    throw std::invalid_argument("price vector arity mismatch");
  Bitmask chain = 0;
  Rational surplus = 0;
  Bitmask best_set = 0;
  Rational best_surplus = 0, best_f = 0;
  for (int step = 0; step < f.n(); ++step) {
    int best = -1;
    Rational best_gain = 0, best_marg = 0;
    for (int j = 0; j < f.n(); ++j) {
      Bitmask bj = Bitmask(1) << j;
      if (chain & bj) continue;
      Rational marg = f.marginal(bj, chain);
      Rational gain = marg - p.p[j];
      if (best < 0 || gain > best_gain || (gain == best_gain && marg > best_marg)) {
        best = j;
        best_gain = gain;
        best_marg = marg;
      }
    }
    chain |= Bitmask(1) << best;
    surplus += best_gain;
    Rational fv = f.value(chain);
    if (surplus > best_surplus || (surplus == best_surplus && fv > best_f)) {
      best_set = chain;
      best_surplus = surplus;
      best_f = fv;
    }
  }
  return {best_set, best_surplus};
}

enum class DemandEngine { Brute, Gs, Ultra };

inline DemandResult run_demand(const SetFunction& f, const PriceVector& p, DemandEngine engine) {
  switch (engine) {
    case DemandEngine::Brute:
      return brute_force_demand(f, p);
    case DemandEngine::Gs:
      return greedy_gs_demand(f, p);
    case DemandEngine::Ultra:
      return greedy_ultra_demand(f, p);
  }
  throw std::logic_error("unreachable");
}

struct BestResponse {
  Bitmask set = 0;
  Rational agent_utility = 0;  // alpha * f(set) - c(set)
};

// Best response to a linear contract alpha: a demand query at prices c_i/alpha.
// At alpha = 0, costly actions are unaffordable; the agent picks the max-f
// subset of the zero-cost actions.
inline BestResponse best_response(const SetFunction& f, const std::vector<Rational>& c,
                                  const Rational& alpha, DemandEngine engine) {
  if (c.size() != std::size_t(f.n())) throw std::invalid_argument("cost vector arity mismatch");
  if (alpha < 0 || alpha > 1) throw std::invalid_argument("alpha must be in [0, 1]");
  for (const auto& ci : c)
    if (ci < 0) throw std::invalid_argument("costs must be nonnegative");

  if (alpha == 0) {
    Bitmask free = 0;
    for (int j = 0; j < f.n(); ++j)
      if (c[j] == 0) free |= Bitmask(1) << j;
    Bitmask best = 0;
    Rational best_f = 0;
    for (Bitmask s = free;; s = (s - 1) & free) {
      Rational fv = f.value(s);
      if (fv > best_f || (fv == best_f && s < best)) {
        best = s;
        best_f = fv;
      }
      if (s == 0) break;
    }
    return {best, 0};
  }

  std::vector<Rational> prices(c.size());
  for (std::size_t j = 0; j < c.size(); ++j) prices[j] = c[j] / alpha;
  DemandResult d = run_demand(f, PriceVector(prices), engine);
  Rational cost = 0;
  for (int j = 0; j < f.n(); ++j)
    if (d.set & (Bitmask(1) << j)) cost += c[j];
  return {d.set, alpha * f.value(d.set) - cost};
}

}  // namespace contractkit
