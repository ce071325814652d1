#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "contractkit/instances.hpp"
#include "contractkit/team_binary.hpp"
#include "contractkit/team_multi.hpp"

using namespace contractkit;

namespace {

// The two-agent example lifted to the multi-action model: one action each.
MultiTeamInstance lifted_ex41() {
  auto bt = std::get<BinaryTeamInstance>(paper_example("ex4_1"));
  return MultiTeamInstance(bt.f, bt.c, {0, 1}, 2);
}

MultiTeamInstance random_multi(int n, std::uint64_t seed) {
  return std::get<MultiTeamInstance>(generate(GenKind::MultiTeam, n, seed));
}

}  // namespace

TEST_CASE("profile utilities") {
  auto inst = lifted_ex41();
  VectorContract vc({{1, 2}, {1, 2}});
  auto u = profile_utilities(inst, vc, 0b01);
  CHECK(u.agent[0] == 0);
  CHECK(u.agent[1] == Rational(1, 4));
  CHECK(u.principal == 0);
  auto both = profile_utilities(inst, vc, 0b11);
  CHECK(both.agent[0] == Rational(1, 8));
  CHECK(both.principal == 0);
}

TEST_CASE("potential values") {
  auto inst = lifted_ex41();
  VectorContract vc({{1, 2}, {1, 2}});
  CHECK(potential(inst, vc, 0) == Rational(0));
  CHECK(potential(inst, vc, 0b01) == Rational(0));
  CHECK(potential(inst, vc, 0b11) == Rational(-1, 4));
  VectorContract half({{1, 2}, 0});
  CHECK(!potential(inst, half, 0b10));  // costly action at alpha = 0
  CHECK(potential(inst, half, 0b01) == Rational(0));
}

TEST_CASE("find_equilibrium picks the potential maximizer with the f tie-break") {
  auto inst = lifted_ex41();
  VectorContract vc({{1, 2}, {1, 2}});
  CHECK(find_equilibrium(inst, vc) == 0b01);
}

TEST_CASE("enumerate_equilibria on the lifted example") {
  auto inst = lifted_ex41();
  VectorContract vc({{1, 2}, {1, 2}});
  auto eq = enumerate_equilibria(inst, vc);
  CHECK(eq == std::vector<Bitmask>{0b01, 0b10, 0});
  CHECK_FALSE(is_nash_profile(inst, vc, 0b11));
}

TEST_CASE("best-response dynamics converge and raise the potential") {
  auto inst = lifted_ex41();
  VectorContract vc({{1, 2}, {1, 2}});
  auto run = best_response_dynamics(inst, vc, 0b11, 100);
  CHECK(run.converged);
  CHECK(run.profile == 0b10);  // agent 0 drops its action first
  REQUIRE(run.trace.size() == 1);
  CHECK(run.trace[0].agent == 0);
  CHECK(is_nash_profile(inst, vc, run.profile));
}

TEST_CASE("dynamics potentials are strictly increasing on random instances") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    int n = 2 + int(seed % 5);
    auto inst = random_multi(n, seed);
    std::vector<Rational> alpha(inst.agents, Rational(1 + int(seed % 3), 4));
    VectorContract vc(alpha);
    auto run = best_response_dynamics(inst, vc, inst.f.full_mask(), 1000);
    REQUIRE(run.converged);
    CHECK(is_nash_profile(inst, vc, run.profile));
    std::optional<Rational> prev = potential(inst, vc, inst.f.full_mask());
    for (const auto& step : run.trace) {
      if (prev && step.potential) CHECK(*step.potential > *prev);
      prev = step.potential;
    }
  }
}

TEST_CASE("subset stability is weaker than Nash") {
  // Supermodular two-action instance: the empty profile resists dropping
  // actions (vacuously) but not adding them once payments are generous.
  MultiTeamInstance inst(SetFunction::make_supermodular_square({1, 1}),
                         {{1, 8}, {1, 8}}, {0, 1}, 2);
  VectorContract generous({{3, 4}, {3, 4}});
  CHECK(is_subset_stable(inst, generous, 0));
  CHECK_FALSE(is_nash_profile(inst, generous, 0));
  // Every Nash profile is subset-stable.
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto r = random_multi(4, seed);
    std::vector<Rational> alpha(r.agents, Rational(1, 3));
    VectorContract vc(alpha);
    for (Bitmask s = 0; s <= r.f.full_mask(); ++s)
      if (is_nash_profile(r, vc, s)) CHECK(is_subset_stable(r, vc, s));
  }
}

TEST_CASE("doubling a subset-stabilizing contract preserves value at equilibrium") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    int n = 2 + int(seed % 5);
    auto inst = random_multi(n, seed);
    std::vector<Rational> alpha(inst.agents, Rational(1, 4));
    VectorContract vc(alpha);
    for (Rational eps : {Rational(1, 100), Rational(1, 10)}) {
      auto doubled = doubling_contract(vc, eps);
      for (Bitmask s = 0; s <= inst.f.full_mask(); ++s) {
        if (!is_subset_stable(inst, vc, s)) continue;
        auto run = best_response_dynamics(inst, doubled, s, 1000);
        REQUIRE(run.converged);
        CHECK(inst.f.value(run.profile) >= inst.f.value(s));
      }
    }
  }
}

TEST_CASE("one-action-per-agent profiles specialize to the binary model") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    int n = 2 + int(seed % 4);
    auto bt = std::get<BinaryTeamInstance>(generate(GenKind::BinaryTeam, n, seed));
    std::vector<int> owner(n);
    for (int i = 0; i < n; ++i) owner[i] = i;
    MultiTeamInstance mt(bt.f, bt.c, owner, n);
    for (Bitmask s = 1; s <= bt.f.full_mask(); ++s) {
      auto tc = min_payment_contract(bt, s);
      if (!tc) continue;
      VectorContract vc(tc->alpha);
      CHECK(is_nash_team(bt, tc->alpha, s) == is_nash_profile(mt, vc, s));
    }
  }
}

TEST_CASE("a single agent owning everything plays its best response") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    int n = 2 + int(seed % 4);
    auto sa = std::get<SingleAgentInstance>(generate(GenKind::Coverage, n, seed));
    MultiTeamInstance mt(sa.f, sa.c, std::vector<int>(n, 0), 1);
    Rational a(1 + int(seed % 3), 4);
    VectorContract vc({a});
    auto br = best_response(sa.f, sa.c, a, DemandEngine::Brute);
    auto eq = find_equilibrium(mt, vc);
    CHECK(sa.f.value(eq) == sa.f.value(br.set));
    auto u = profile_utilities(mt, vc, eq);
    CHECK(u.agent[0] == br.agent_utility);
  }
}

TEST_CASE("partition validation") {
  auto f = SetFunction::make_additive({{1, 2}, {1, 2}});
  CHECK_THROWS_AS(MultiTeamInstance(f, {0, 0}, {0, 2}, 2), std::invalid_argument);
  CHECK_THROWS_AS(MultiTeamInstance(f, {0, 0}, {0}, 1), std::invalid_argument);
  CHECK_THROWS_AS(MultiTeamInstance(f, {0, 0}, {0, 0}, 0), std::invalid_argument);
}
