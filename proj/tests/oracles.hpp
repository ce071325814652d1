#pragma once

// Test-only oracles, kept independent of the library's envelope and contract
// search paths: plain subset scans and a dense breakpoint probe.

#include <algorithm>
#include <set>
#include <vector>

#include "contractkit/single_agent.hpp"

namespace oracles {

using namespace contractkit;

// Best response by direct scan of all subsets (favor-the-principal ties).
inline Bitmask direct_best_response(const SingleAgentInstance& inst, const Rational& alpha) {
  Bitmask best = 0;
  Rational best_u = 0, best_f = 0;
  for (Bitmask s = 0; s <= inst.f.full_mask(); ++s) {
    Rational fv = inst.f.value(s);
    Rational u = alpha * fv - inst.cost(s);
    if (s == 0 || u > best_u || (u == best_u && (fv > best_f || (fv == best_f && s < best)))) {
      best = s;
      best_u = u;
      best_f = fv;
    }
  }
  return best;
}

// Every alpha where some pair of sets' utility lines intersect, in (0, 1].
inline std::vector<Rational> candidate_breakpoints(const SingleAgentInstance& inst) {
  std::set<Rational> cands;
  const auto tab = inst.f.value_table();
  std::vector<Rational> cost(tab.size());
  for (Bitmask s = 0; s <= inst.f.full_mask(); ++s) cost[s] = inst.cost(s);
  for (Bitmask a = 0; a <= inst.f.full_mask(); ++a)
    for (Bitmask b = a + 1; b <= inst.f.full_mask() && b != 0; ++b) {
      if (tab[a] == tab[b]) continue;
      Rational alpha = (cost[b] - cost[a]) / (tab[b] - tab[a]);
      if (alpha > 0 && alpha <= 1) cands.insert(alpha);
    }
  return {cands.begin(), cands.end()};
}

// The true envelope breakpoints by dense probing: evaluate the best response
// at every candidate intersection and at midpoints between them.
inline std::vector<std::pair<Rational, Bitmask>> probe_envelope(const SingleAgentInstance& inst) {
  auto cands = candidate_breakpoints(inst);
  std::vector<Rational> probes;
  Rational prev = 0;
  for (const auto& a : cands) {
    probes.push_back((prev + a) / 2);
    probes.push_back(a);
    prev = a;
  }
  probes.push_back((prev + 1) / 2);
  probes.push_back(1);

  std::vector<std::pair<Rational, Bitmask>> breakpoints;  // (alpha, new set)
  Bitmask cur = direct_best_response(inst, 0);
  for (const auto& a : probes) {
    Bitmask s = direct_best_response(inst, a);
    if (s != cur) {
      breakpoints.emplace_back(a, s);
      cur = s;
    }
  }
  return breakpoints;
}

// Optimal principal utility by probing every candidate breakpoint plus 0.
inline Rational probe_optimal_utility(const SingleAgentInstance& inst) {
  Rational best = inst.f.value(direct_best_response(inst, 0));
  for (const auto& a : candidate_breakpoints(inst)) {
    Rational u = (1 - a) * inst.f.value(direct_best_response(inst, a));
    best = std::max(best, u);
  }
  return best;
}

}  // namespace oracles
