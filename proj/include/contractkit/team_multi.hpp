#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "contractkit/demand.hpp"

namespace contractkit {

// The multi-agent multi-action model: m actions partitioned among n agents,
// each agent chooses a subset of its own actions.
struct MultiTeamInstance {
  SetFunction f;                 // over all m actions
  std::vector<Rational> c;       // per action
  std::vector<int> owner;        // action -> agent
  int agents;

  MultiTeamInstance(SetFunction fn, std::vector<Rational> costs, std::vector<int> owners,
                    int n_agents)
      : f(std::move(fn)), c(std::move(costs)), owner(std::move(owners)), agents(n_agents) {
    if (c.size() != std::size_t(f.n()) || owner.size() != std::size_t(f.n()))
      throw std::invalid_argument("costs/partition arity mismatch");
    if (agents < 1) throw std::invalid_argument("need at least one agent");
    for (int o : owner)
      if (o < 0 || o >= agents) throw std::invalid_argument("partition assigns unknown agent");
    for (const auto& ci : c)
      if (ci < 0) throw std::invalid_argument("costs must be nonnegative");
    if (f.value(f.full_mask()) > 1)
      throw std::invalid_argument("success probabilities must lie in [0, 1]");
  }

  int actions() const { return f.n(); }

  Bitmask agent_actions(int i) const {
    Bitmask m = 0;
    for (int j = 0; j < actions(); ++j)
      if (owner[j] == i) m |= Bitmask(1) << j;
    return m;
  }

  Rational cost(Bitmask s) const {
    Rational t = 0;
    for (int j = 0; j < actions(); ++j)
      if (s & (Bitmask(1) << j)) t += c[j];
    return t;
  }
};

struct VectorContract {
  std::vector<Rational> alpha;

  explicit VectorContract(std::vector<Rational> a) : alpha(std::move(a)) {
    for (const auto& x : alpha)
      if (x < 0) throw std::invalid_argument("payments must be nonnegative");
  }
};

struct ProfileUtilities {
  std::vector<Rational> agent;
  Rational principal;
};

inline ProfileUtilities profile_utilities(const MultiTeamInstance& inst,
                                          const VectorContract& vc, Bitmask s) {
  if (vc.alpha.size() != std::size_t(inst.agents))
    throw std::invalid_argument("contract arity mismatch");
  Rational fs = inst.f.value(s);
  ProfileUtilities out;
  Rational paid = 0;
  for (int i = 0; i < inst.agents; ++i) {
    out.agent.push_back(vc.alpha[i] * fs - inst.cost(s & inst.agent_actions(i)));
    paid += vc.alpha[i];
  }
  out.principal = (1 - paid) * fs;
  return out;
}

// Potential phi(S) = f(S) - sum_i c(S_i)/alpha_i; nullopt means -infinity
// (an agent with alpha_i = 0 carrying a costly action).
inline std::optional<Rational> potential(const MultiTeamInstance& inst, const VectorContract& vc,
                                         Bitmask s) {
  if (vc.alpha.size() != std::size_t(inst.agents))
    throw std::invalid_argument("contract arity mismatch");
  Rational phi = inst.f.value(s);
  for (int i = 0; i < inst.agents; ++i) {
    Rational ci = inst.cost(s & inst.agent_actions(i));
    if (vc.alpha[i] == 0) {
      if (ci > 0) return std::nullopt;
    } else {
      phi -= ci / vc.alpha[i];
    }
  }
  return phi;
}

// Exact Nash check: each agent's chosen subset must be optimal among all
// subsets of its own actions, holding the others fixed.
inline bool is_nash_profile(const MultiTeamInstance& inst, const VectorContract& vc, Bitmask s) {
  if (vc.alpha.size() != std::size_t(inst.agents))
    throw std::invalid_argument("contract arity mismatch");
  for (int i = 0; i < inst.agents; ++i) {
    Bitmask mine = inst.agent_actions(i);
    Bitmask rest = s & ~mine;
    Rational cur = vc.alpha[i] * inst.f.value(s) - inst.cost(s & mine);
    for (Bitmask t = mine;; t = (t - 1) & mine) {
      if (vc.alpha[i] * inst.f.value(rest | t) - inst.cost(t) > cur) return false;
      if (t == 0) break;
    }
  }
  return true;
}

// Relaxation of Nash: only deviations to subsets of the chosen actions count.
inline bool is_subset_stable(const MultiTeamInstance& inst, const VectorContract& vc, Bitmask s) {
  if (vc.alpha.size() != std::size_t(inst.agents))
    throw std::invalid_argument("contract arity mismatch");
  for (int i = 0; i < inst.agents; ++i) {
    Bitmask mine = s & inst.agent_actions(i);
    Bitmask rest = s & ~mine;
    Rational cur = vc.alpha[i] * inst.f.value(s) - inst.cost(mine);
    for (Bitmask t = mine;; t = (t - 1) & mine) {
      if (vc.alpha[i] * inst.f.value(rest | t) - inst.cost(t) > cur) return false;
      if (t == 0) break;
    }
  }
  return true;
}

// Global potential maximizer (ties: larger f, then smaller bitmask). A
// maximizer of the potential is an equilibrium; this is asserted on return.
inline Bitmask find_equilibrium(const MultiTeamInstance& inst, const VectorContract& vc) {
  detail::require_desk_scale(inst.f);
  Bitmask best = 0;
  std::optional<Rational> best_phi = potential(inst, vc, 0);  // phi(empty) = 0, finite
  Rational best_f = 0;
  for (Bitmask s = 1; s <= inst.f.full_mask(); ++s) {
    auto phi = potential(inst, vc, s);
    if (!phi) continue;
    Rational fs = inst.f.value(s);
    if (*phi > *best_phi ||
        (*phi == *best_phi && (fs > best_f || (fs == best_f && s < best)))) {
      best = s;
      best_phi = phi;
      best_f = fs;
    }
  }
  if (!is_nash_profile(inst, vc, best))
    throw std::logic_error("potential maximizer failed the Nash check");
  return best;
}

struct DynamicsStep {
  int agent;
  Bitmask profile;
  std::optional<Rational> potential;
};

struct DynamicsResult {
  Bitmask profile;
  std::vector<DynamicsStep> trace;
  bool converged;
};

// Round-robin best-response dynamics from a start profile. Only strict
// improvements move, so the potential increases along the trace and a fixed
// point is a Nash profile.
inline DynamicsResult best_response_dynamics(const MultiTeamInstance& inst,
                                             const VectorContract& vc, Bitmask start,
                                             int max_rounds) {
  if (vc.alpha.size() != std::size_t(inst.agents))
    throw std::invalid_argument("contract arity mismatch");
  Bitmask cur = start;
  DynamicsResult out{start, {}, false};
  for (int round = 0; round < max_rounds; ++round) {
    bool moved = false;
    for (int i = 0; i < inst.agents; ++i) {
      Bitmask mine = inst.agent_actions(i);
      Bitmask rest = cur & ~mine;
      Rational cur_u = vc.alpha[i] * inst.f.value(cur) - inst.cost(cur & mine);
      Bitmask best_t = cur & mine;
      Rational best_u = cur_u, best_f = inst.f.value(cur);
      for (Bitmask t = mine;; t = (t - 1) & mine) {
        Rational u = vc.alpha[i] * inst.f.value(rest | t) - inst.cost(t);
        Rational fv = inst.f.value(rest | t);
        if (u > best_u || (u == best_u && (fv > best_f || (fv == best_f && t < best_t)))) {
          best_t = t;
          best_u = u;
          best_f = fv;
        }
        if (t == 0) break;
      }
      if (best_u > cur_u) {
        cur = rest | best_t;
        out.trace.push_back({i, cur, potential(inst, vc, cur)});
        moved = true;
      }
    }
    if (!moved) {
      out.converged = true;
      break;
    }
  }
  out.profile = cur;
  return out;
}

// Componentwise 2*alpha + epsilon (the doubling-lemma contract).
inline VectorContract doubling_contract(const VectorContract& vc, const Rational& epsilon) {
  if (epsilon <= 0) throw std::invalid_argument("epsilon must be positive");
  std::vector<Rational> out;
  out.reserve(vc.alpha.size());
  for (const auto& a : vc.alpha) out.push_back(2 * a + epsilon);
  return VectorContract(std::move(out));
}

// All pure Nash profiles, sorted by f descending then bitmask ascending.
inline std::vector<Bitmask> enumerate_equilibria(const MultiTeamInstance& inst,
                                                 const VectorContract& vc) {
  detail::require_desk_scale(inst.f);
  std::vector<Bitmask> out;
  for (Bitmask s = 0; s <= inst.f.full_mask(); ++s)
    if (is_nash_profile(inst, vc, s)) out.push_back(s);
  std::sort(out.begin(), out.end(), [&](Bitmask a, Bitmask b) {
    Rational fa = inst.f.value(a), fb = inst.f.value(b);
    if (fa != fb) return fa > fb;
    return a < b;
  });
  return out;
}

}  // namespace contractkit
