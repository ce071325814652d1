#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "contractkit/demand.hpp"

namespace contractkit {

// The multi-agent binary-action model: each agent exerts effort or not,
// the reward function is over the set of exerting agents.
struct BinaryTeamInstance {
  SetFunction f;
  std::vector<Rational> c;

  BinaryTeamInstance(SetFunction fn, std::vector<Rational> costs)
      : f(std::move(fn)), c(std::move(costs)) {
    if (c.size() != std::size_t(f.n()))
      throw std::invalid_argument("cost vector arity mismatch");
    for (const auto& ci : c)
      if (ci < 0) throw std::invalid_argument("costs must be nonnegative");
    if (f.value(f.full_mask()) > 1)
      throw std::invalid_argument("success probabilities must lie in [0, 1]");
  }

  int n() const { return f.n(); }
};

struct TeamContract {
  std::vector<Rational> alpha;
  Bitmask set;  // intended equilibrium
};

// Minimum payments incentivizing S: alpha_i = c_i / f(i | S-i) for i in S.
// Unincentivizable (nullopt) when some on-set marginal is zero at positive cost.
inline std::optional<TeamContract> min_payment_contract(const BinaryTeamInstance& inst,
                                                        Bitmask s) {
  TeamContract tc{std::vector<Rational>(inst.n(), 0), s};
  for (int i = 0; i < inst.n(); ++i) {
    Bitmask bi = Bitmask(1) << i;
    if (!(s & bi)) continue;
    Rational marg = inst.f.value(s) - inst.f.value(s & ~bi);
    if (marg == 0) {
      if (inst.c[i] > 0) return std::nullopt;
      tc.alpha[i] = 0;  // 0/0 convention
    } else {
      tc.alpha[i] = inst.c[i] / marg;
    }
  }
  return tc;
}

// Principal's profit g(S) under minimum payments; nullopt means -infinity.
inline std::optional<Rational> team_profit(const BinaryTeamInstance& inst, Bitmask s) {
  auto tc = min_payment_contract(inst, s);
  if (!tc) return std::nullopt;
  Rational total = 0;
  for (const auto& a : tc->alpha) total += a;
  return (1 - total) * inst.f.value(s);
}

// Exact pure-Nash verification of (alpha, S): no agent gains by flipping.
inline bool is_nash_team(const BinaryTeamInstance& inst, const std::vector<Rational>& alpha,
                         Bitmask s) {
  if (alpha.size() != std::size_t(inst.n()))
    throw std::invalid_argument("payment vector arity mismatch");
  for (const auto& a : alpha)
    if (a < 0) throw std::invalid_argument("payments must be nonnegative");
  Rational fs = inst.f.value(s);
  for (int i = 0; i < inst.n(); ++i) {
    Bitmask bi = Bitmask(1) << i;
    if (s & bi) {
      if (alpha[i] * fs - inst.c[i] < alpha[i] * inst.f.value(s & ~bi)) return false;
    } else {
      if (alpha[i] * fs < alpha[i] * inst.f.value(s | bi) - inst.c[i]) return false;
    }
  }
  return true;
}

struct TeamOptimum {
  Bitmask set = 0;
  Rational profit = 0;
};

// argmax of g over all 2^n sets; ties toward larger f, then smaller bitmask.
inline TeamOptimum brute_force_optimal_team(const BinaryTeamInstance& inst) {
  detail::require_desk_scale(inst.f);
  TeamOptimum best;  // empty set, profit 0
  Rational best_f = 0;
  for (Bitmask s = 1; s <= inst.f.full_mask(); ++s) {
    auto g = team_profit(inst, s);
    if (!g) continue;
    Rational fs = inst.f.value(s);
    if (*g > best.profit ||
        (*g == best.profit && (fs > best_f || (fs == best_f && s < best.set))))
      best = {s, *g}, best_f = fs;
  }
  return best;
}

struct SingleAgentPick {
  int agent = 0;
  Rational profit = 0;       // g({agent}); may be negative
  bool incentivizable = true;
};

// Best single-agent contract max_i g({i}): the O(n) fallback for subadditive f.
inline SingleAgentPick best_single_agent(const BinaryTeamInstance& inst) {
  SingleAgentPick best;
  bool found = false;
  for (int i = 0; i < inst.n(); ++i) {
    auto g = team_profit(inst, Bitmask(1) << i);
    if (!g) continue;
    if (!found || *g > best.profit) {
      best = {i, *g, true};
      found = true;
    }
  }
  if (!found) return {0, 0, false};
  return best;
}

// FPTAS for additive rewards: guess b = max singleton value in the optimum,
// round singleton values down to multiples of (eps/n)*b, and solve the
// min-cost-ratio-per-threshold problem by dynamic programming.
inline TeamOptimum fptas_additive_team(const BinaryTeamInstance& inst, const Rational& epsilon) {
  if (epsilon <= 0 || epsilon >= 1) throw std::invalid_argument("epsilon must be in (0, 1)");
  if (!check_class(inst.f, FnClass::Additive))
    throw std::invalid_argument("fptas_additive_team requires an additive reward function");
  const int n = inst.n();
  const Rational delta = epsilon / n;

  std::vector<Rational> fv(n);
  for (int i = 0; i < n; ++i) fv[i] = inst.f.value(Bitmask(1) << i);

  TeamOptimum best;  // empty set, 0
  for (int bi = 0; bi < n; ++bi) {
    const Rational b = fv[bi];
    if (b == 0) continue;
    const Rational unit = delta * b;
    // Agents in the optimum all have singleton value <= b under this guess.
    std::vector<int> agents, units;
    std::vector<Rational> ratio;
    long total_units = 0;
    for (int i = 0; i < n; ++i) {
      if (fv[i] == 0 || fv[i] > b) continue;
      long k = Integer(fv[i] / unit).convert_to<long>();  // floor: both positive
      agents.push_back(i);
      units.push_back(int(k));
      ratio.push_back(inst.c[i] / fv[i]);
      total_units += k;
    }

    // dp[u] = min sum of cost ratios over subsets with exactly u rounded units.
    const long U = total_units;
    std::vector<std::optional<Rational>> dp(U + 1);
    std::vector<Bitmask> dpset(U + 1, 0);
    dp[0] = Rational(0);
    for (std::size_t a = 0; a < agents.size(); ++a) {
      for (long u = U; u >= units[a]; --u) {
        if (!dp[u - units[a]]) continue;
        Rational cand = *dp[u - units[a]] + ratio[a];
        if (!dp[u] || cand < *dp[u]) {
          dp[u] = cand;
          dpset[u] = dpset[u - units[a]] | (Bitmask(1) << agents[a]);
        }
      }
    }
    // Threshold x = u * unit; T_x = cheapest set with at least u units.
    std::optional<Rational> suffix_min;
    Bitmask suffix_set = 0;
    for (long u = U; u >= 1; --u) {
      if (dp[u] && (!suffix_min || *dp[u] < *suffix_min)) {
        suffix_min = dp[u];
        suffix_set = dpset[u];
      }
      if (!suffix_min) continue;
      Rational rounded_value = (1 - *suffix_min) * (Rational(u) * unit);
      if (rounded_value <= best.profit) continue;
      auto g = team_profit(inst, suffix_set);  // exact re-score of the winner
      if (g && *g > best.profit) best = {suffix_set, *g};
    }
  }
  return best;
}

// Submodular scale-down: remove the highest-index element whose removal keeps
// f(U) >= Psi, until none qualifies. Preserves on-set marginals (submodularity).
inline Bitmask scale_down_submodular(const SetFunction& f, Bitmask t, const Rational& psi) {
  if (psi < 0 || psi >= f.value(t))
    throw std::invalid_argument("need 0 <= Psi < f(T)");
  Bitmask u = t;
  for (;;) {
    int pick = -1;
    for (int j = f.n() - 1; j >= 0; --j) {
      Bitmask bj = Bitmask(1) << j;
      if ((u & bj) && f.value(u & ~bj) >= psi) {
        pick = j;
        break;
      }
    }
    if (pick < 0) break;
    u &= ~(Bitmask(1) << pick);
  }
  return u;
}

struct TeamApproxResult {
  Bitmask set = 0;
  std::vector<Rational> alpha;
  Rational profit = 0;
};

// Constant-factor pipeline for submodular rewards: best single agent, plus a
// guessed-value loop that prices small agents at p_i = sqrt(c_i v)/2, takes
// the demand set, and scales it down to Psi = v/32. Square-root prices are
// evaluated in 100-digit floats; everything downstream of the chosen set is
// exact again. The tested guarantee is g >= g*/128.
inline TeamApproxResult constant_approx_submodular_team(const BinaryTeamInstance& inst) {
  detail::require_desk_scale(inst.f);
  if (!check_class(inst.f, FnClass::Submodular))
    throw std::invalid_argument("constant_approx_submodular_team requires submodular f");
  const int n = inst.n();

  auto finish = [&](Bitmask s, const Rational& g) {
    auto tc = min_payment_contract(inst, s);
    return TeamApproxResult{s, tc ? tc->alpha : std::vector<Rational>(n, 0), g};
  };

  Bitmask best_set = 0;
  Rational best_g = 0;
  auto consider = [&](Bitmask s) {
    auto g = team_profit(inst, s);
    if (g && *g > best_g) {
      best_g = *g;
      best_set = s;
    }
  };

  auto single = best_single_agent(inst);
  if (single.incentivizable) consider(Bitmask(1) << single.agent);

  // Small agents: cost at most half their singleton value.
  Bitmask small = 0;
  Rational max_singleton = 0;
  for (int i = 0; i < n; ++i) {
    Rational fi = inst.f.value(Bitmask(1) << i);
    max_singleton = std::max(max_singleton, fi);
    if (inst.c[i] == 0 || (fi > 0 && inst.c[i] / fi <= Rational(1, 2)))
      small |= Bitmask(1) << i;
  }
  if (small == 0 || max_singleton == 0) return finish(best_set, best_g);

  int guesses = 2;
  while ((1 << (guesses - 2)) < n) ++guesses;  // k = 0 .. ceil(log2 n) + 1

  const auto tab = inst.f.value_table();
  Rational v = max_singleton;
  for (int k = 0; k < guesses; ++k, v *= 2) {
    // Demand over subsets of the small agents at prices sqrt(c_i v)/2.
    std::vector<BigFloat> price(n);
    for (int i = 0; i < n; ++i)
      if (small & (Bitmask(1) << i)) price[i] = sqrt(to_bigfloat(inst.c[i] * v)) / 2;

    Bitmask demand_set = 0;
    BigFloat demand_surplus = 0;
    for (Bitmask s = small;; s = (s - 1) & small) {
      BigFloat priced = 0;
      for (int i = 0; i < n; ++i)
        if (s & (Bitmask(1) << i)) priced += price[i];
      BigFloat surplus = to_bigfloat(tab[s]) - priced;
      if (s == small || surplus > demand_surplus) {
        demand_set = s;
        demand_surplus = surplus;
      }
      if (s == 0) break;
    }

    consider(demand_set);
    Rational psi = v / 32;
    if (demand_set != 0 && psi < tab[demand_set])
      consider(scale_down_submodular(inst.f, demand_set, psi));
  }
  return finish(best_set, best_g);
}

}  // namespace contractkit
