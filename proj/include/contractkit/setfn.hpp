#pragma once

#include <algorithm>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "contractkit/rational.hpp"

namespace contractkit {

inline constexpr int kMaxGroundSet = 20;

// Brute-force checkers refuse above this bound; override via CONTRACT_KIT_MAX_N.
inline int exhaustive_limit() {
  static const int limit = [] {
    if (const char* env = std::getenv("CONTRACT_KIT_MAX_N")) {
      int v = std::atoi(env);
      if (v >= 1 && v <= kMaxGroundSet) return v;
    }
    return 16;
  }();
  return limit;
}

inline int popcount(Bitmask m) { return __builtin_popcount(m); }

enum class FnKind { Explicit, Additive, Coverage, Xos, SupermodularSquare };

// Monotone normalized set function over a ground set of up to 20 elements.
// Bit j of a mask corresponds to element j (0-indexed). Values are exact.
class SetFunction {
 public:
  FnKind kind() const { return kind_; }
  int n() const { return n_; }
  Bitmask full_mask() const { return (n_ == 32) ? ~Bitmask(0) : ((Bitmask(1) << n_) - 1); }

  static SetFunction make_explicit(int n, std::vector<Rational> table) {
    check_n(n);
    SetFunction f(FnKind::Explicit, n);
    if (table.size() != (std::size_t(1) << n))
      throw std::invalid_argument("explicit table must have 2^n entries");
    if (table[0] != 0) throw std::invalid_argument("explicit table not normalized: f(empty) != 0");
    for (Bitmask s = 0; s < (Bitmask(1) << n); ++s)
      for (int j = 0; j < n; ++j)
        if (!(s & (Bitmask(1) << j)) && table[s | (Bitmask(1) << j)] < table[s])
          throw std::invalid_argument("explicit table not monotone");
    f.table_ = std::move(table);
    return f;
  }

  static SetFunction make_additive(std::vector<Rational> weights) {
    check_n(int(weights.size()));
    for (const auto& w : weights)
      if (w < 0) throw std::invalid_argument("additive weights must be nonnegative");
    SetFunction f(FnKind::Additive, int(weights.size()));
    f.weights_ = std::move(weights);
    return f;
  }

  // Element j covers the universe items in covers[j]; f(S) = weight covered by S.
  static SetFunction make_coverage(int n, std::vector<Rational> item_weights,
                                   std::vector<Bitmask> covers) {
    check_n(n);
    if (covers.size() != std::size_t(n))
      throw std::invalid_argument("coverage: one item set per element required");
    if (item_weights.size() > 32) throw std::invalid_argument("coverage: at most 32 universe items");
    for (const auto& w : item_weights)
      if (w < 0) throw std::invalid_argument("coverage weights must be nonnegative");
    Bitmask universe = item_weights.empty() ? 0 : (item_weights.size() == 32 ? ~Bitmask(0) : (Bitmask(1) << item_weights.size()) - 1);
    for (Bitmask c : covers)
      if (c & ~universe) throw std::invalid_argument("coverage: element covers unknown item");
    SetFunction f(FnKind::Coverage, n);
    f.item_weights_ = std::move(item_weights);
    f.covers_ = std::move(covers);
    return f;
  }

  static SetFunction make_xos(int n, std::vector<std::vector<Rational>> clauses) {
    check_n(n);
    if (clauses.empty()) throw std::invalid_argument("xos: at least one clause required");
    for (const auto& cl : clauses) {
      if (cl.size() != std::size_t(n)) throw std::invalid_argument("xos: clause arity mismatch");
      for (const auto& w : cl)
        if (w < 0) throw std::invalid_argument("xos clause weights must be nonnegative");
    }
    SetFunction f(FnKind::Xos, n);
    f.clauses_ = std::move(clauses);
    return f;
  }

  // f(S) = (sum of weights in S)^2 / (total weight)^2.
  static SetFunction make_supermodular_square(std::vector<Rational> weights) {
    check_n(int(weights.size()));
    Rational total = 0;
    for (const auto& w : weights) {
      if (w < 0) throw std::invalid_argument("weights must be nonnegative");
      total += w;
    }
    if (total == 0) throw std::invalid_argument("supermodular square needs positive total weight");
    SetFunction f(FnKind::SupermodularSquare, int(weights.size()));
    f.weights_ = std::move(weights);
    return f;
  }

  Rational value(Bitmask s) const {
    if (s & ~full_mask()) throw std::invalid_argument("bitmask has bits outside the ground set");
    switch (kind_) {
      case FnKind::Explicit:
        return table_[s];
      case FnKind::Additive: {
        Rational v = 0;
        for (int j = 0; j < n_; ++j)
          if (s & (Bitmask(1) << j)) v += weights_[j];
        return v;
      }
      case FnKind::Coverage: {
        Bitmask covered = 0;
        for (int j = 0; j < n_; ++j)
          if (s & (Bitmask(1) << j)) covered |= covers_[j];
        Rational v = 0;
        for (std::size_t i = 0; i < item_weights_.size(); ++i)
          if (covered & (Bitmask(1) << i)) v += item_weights_[i];
        return v;
      }
      case FnKind::Xos: {
        Rational best = 0;
        for (const auto& cl : clauses_) {
          Rational v = 0;
          for (int j = 0; j < n_; ++j)
            if (s & (Bitmask(1) << j)) v += cl[j];
          best = std::max(best, v);
        }
        return best;
      }
      case FnKind::SupermodularSquare: {
        Rational sum = 0, total = 0;
        for (int j = 0; j < n_; ++j) {
          total += weights_[j];
          if (s & (Bitmask(1) << j)) sum += weights_[j];
        }
        return (sum * sum) / (total * total);
      }
    }
    throw std::logic_error("unreachable");
  }

  Rational marginal(Bitmask s, Bitmask t) const { return value(s | t) - value(t); }

  // Materializes all 2^n values, indexed by bitmask.
  std::vector<Rational> value_table() const {
    std::vector<Rational> out(std::size_t(1) << n_);
    for (Bitmask s = 0; s <= full_mask(); ++s) out[s] = value(s);
    return out;
  }

  const std::vector<Rational>& weights() const { return weights_; }
  const std::vector<Rational>& item_weights() const { return item_weights_; }
  const std::vector<Bitmask>& covers() const { return covers_; }
  const std::vector<std::vector<Rational>>& clauses() const { return clauses_; }
  const std::vector<Rational>& table() const { return table_; }

 private:
  SetFunction(FnKind k, int n) : kind_(k), n_(n) {}
  static void check_n(int n) {
    if (n < 1 || n > kMaxGroundSet)
      throw std::invalid_argument("ground set size must be in [1, 20]");
  }

  FnKind kind_;
  int n_;
  std::vector<Rational> table_;
  std::vector<Rational> weights_;
  std::vector<Rational> item_weights_;
  std::vector<Bitmask> covers_;
  std::vector<std::vector<Rational>> clauses_;
};

enum class FnClass { Additive, Submodular, Supermodular, Subadditive, GrossSubstitutes };

namespace detail {

inline void require_desk_scale(const SetFunction& f) {
  if (f.n() > exhaustive_limit())
    throw std::invalid_argument(
        "exhaustive class check refused: 2^n subsets exceed the configured limit");
}

inline bool check_additive(const std::vector<Rational>& tab, int n) {
  for (Bitmask s = 0; s < (Bitmask(1) << n); ++s) {
    Rational sum = 0;
    for (int j = 0; j < n; ++j)
      if (s & (Bitmask(1) << j)) sum += tab[Bitmask(1) << j];
    if (tab[s] != sum) return false;
  }
  return true;
}

// Local characterization: f(i | S+j) <= f(i | S) for all S and i,j not in S.
inline bool check_submodular(const std::vector<Rational>& tab, int n, bool reverse) {
  for (Bitmask s = 0; s < (Bitmask(1) << n); ++s)
    for (int i = 0; i < n; ++i) {
      Bitmask bi = Bitmask(1) << i;
      if (s & bi) continue;
      for (int j = i + 1; j < n; ++j) {
        Bitmask bj = Bitmask(1) << j;
        if (s & bj) continue;
        // f(i | S+j) vs f(i | S), and symmetrically for j.
        Rational lhs = tab[s | bi | bj] - tab[s | bj];
        Rational rhs = tab[s | bi] - tab[s];
        if (reverse ? (lhs < rhs) : (lhs > rhs)) return false;
      }
    }
  return true;
}

inline bool check_subadditive(const std::vector<Rational>& tab, int n) {
  // By monotonicity it suffices to check disjoint pairs.
  Bitmask full = (Bitmask(1) << n) - 1;
  for (Bitmask s = 0; s <= full; ++s) {
    Bitmask comp = full & ~s;
    for (Bitmask t = comp; t; t = (t - 1) & comp)
      if (tab[s] + tab[t] < tab[s | t]) return false;
  }
  return true;
}

inline bool check_triplet(const std::vector<Rational>& tab, int n) {
  for (Bitmask s = 0; s < (Bitmask(1) << n); ++s)
    for (int i = 0; i < n; ++i) {
      Bitmask bi = Bitmask(1) << i;
      if (s & bi) continue;
      for (int j = 0; j < n; ++j) {
        Bitmask bj = Bitmask(1) << j;
        if (j == i || (s & bj)) continue;
        for (int k = j + 1; k < n; ++k) {
          Bitmask bk = Bitmask(1) << k;
          if (k == i || (s & bk)) continue;
          Rational lhs = (tab[s | bi] - tab[s]) + (tab[s | bj | bk] - tab[s]);
          Rational a = (tab[s | bj] - tab[s]) + (tab[s | bi | bk] - tab[s]);
          Rational b = (tab[s | bk] - tab[s]) + (tab[s | bi | bj] - tab[s]);
          if (lhs > std::max(a, b)) return false;
        }
      }
    }
  return true;
}

}  // namespace detail

// Exact class membership by exhaustive verification of the defining inequalities.
inline bool check_class(const SetFunction& f, FnClass cls) {
  detail::require_desk_scale(f);
  const auto tab = f.value_table();
  const int n = f.n();
  switch (cls) {
    case FnClass::Additive:
      return detail::check_additive(tab, n);
    case FnClass::Submodular:
      return detail::check_submodular(tab, n, /*reverse=*/false);
    case FnClass::Supermodular:
      return detail::check_submodular(tab, n, /*reverse=*/true);
    case FnClass::Subadditive:
      return detail::check_subadditive(tab, n);
    case FnClass::GrossSubstitutes:
      return detail::check_submodular(tab, n, false) && detail::check_triplet(tab, n);
  }
  throw std::logic_error("unreachable");
}

// Verifies that a clause list reproduces f on every subset (XOS certificate).
inline bool xos_certificate_matches(const SetFunction& f,
                                    const std::vector<std::vector<Rational>>& clauses) {
  detail::require_desk_scale(f);
  SetFunction cand = SetFunction::make_xos(f.n(), clauses);
  for (Bitmask s = 0; s <= f.full_mask(); ++s)
    if (cand.value(s) != f.value(s)) return false;
  return true;
}

inline bool is_monotone(const SetFunction& f) {
  detail::require_desk_scale(f);
  for (Bitmask s = 0; s <= f.full_mask(); ++s)
    for (int j = 0; j < f.n(); ++j) {
      Bitmask bj = Bitmask(1) << j;
      if (!(s & bj) && f.value(s | bj) < f.value(s)) return false;
    }
  return true;
}

struct WellLayeredProbeResult {
  bool consistent = true;
  std::vector<Rational> counterexample;  // violating price vector, when found
};

// Samples random price vectors and checks the well-layered greedy chain against
// brute-force size-constrained optima. A `consistent` verdict is heuristic only:
// the property quantifies over all additive prices and has no finite decider.
inline WellLayeredProbeResult well_layered_probe(const SetFunction& f, int trials,
                                                 std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  detail::require_desk_scale(f);
  const int n = f.n();
  const auto tab = f.value_table();
  const Rational fmax = tab[f.full_mask()];
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dist(0, 128);

  for (int t = 0; t < trials; ++t) {
    std::vector<Rational> p(n);
    for (int j = 0; j < n; ++j) p[j] = fmax * Rational(dist(rng), 128);

    // Greedy chain of Def. well-layered; ties: larger marginal already wins,
    // then smaller index.
    Bitmask chain = 0;
    std::vector<Bitmask> layers(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
      int best = -1;
      Rational best_gain = 0;
      for (int j = 0; j < n; ++j) {
        Bitmask bj = Bitmask(1) << j;
        if (chain & bj) continue;
        Rational gain = tab[chain | bj] - tab[chain] - p[j];
        if (best < 0 || gain > best_gain) {
          best = j;
          best_gain = gain;
        }
      }
      chain |= Bitmask(1) << best;
      layers[i] = chain;
    }

    // Compare each layer with the brute-force best set of its size.
    std::vector<Rational> surplus(std::size_t(1) << n);
    for (Bitmask s = 1; s <= f.full_mask(); ++s) {
      Bitmask low = s & (~s + 1);
      surplus[s] = surplus[s & (s - 1)] - p[__builtin_ctz(low)];
    }
    for (Bitmask s = 0; s <= f.full_mask(); ++s) surplus[s] += tab[s];

    std::vector<Rational> best_of_size(n + 1);
    std::vector<bool> seen(n + 1, false);
    for (Bitmask s = 0; s <= f.full_mask(); ++s) {
      int k = popcount(s);
      if (!seen[k] || surplus[s] > best_of_size[k]) {
        best_of_size[k] = surplus[s];
        seen[k] = true;
      }
    }
    for (int i = 1; i <= n; ++i)
      if (surplus[layers[i]] < best_of_size[i]) return {false, p};
  }
  return {};
}

}  // namespace contractkit
