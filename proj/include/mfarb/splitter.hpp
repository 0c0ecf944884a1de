#pragma once

// Level-set splitting, backward elimination of M-polar scenarios and the
// Universal Arbitrage Aggregator.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "mfarb/errors.hpp"
#include "mfarb/geometry.hpp"
#include "mfarb/market.hpp"

namespace mfarb {

/// Decomposition of one level set Gamma at period t into arbitrage blocks
/// B^1..B^beta with separators H^1..H^beta, and an efficient residual B*.
struct Splitting {
  std::size_t t = 0;
  ScenarioSet level_set;
  std::vector<ScenarioSet> blocks;
  std::vector<Vec> separators;
  ScenarioSet residual;

  std::size_t beta() const { return blocks.size(); }
  ScenarioSet blocks_union() const {
    ScenarioSet u;
    for (const auto& b : blocks) u = set_union(u, b);
    return u;
  }
};

inline std::vector<Vec> increments(const Market& m, std::size_t t, const ScenarioSet& set) {
  std::vector<Vec> pts;
  pts.reserve(set.size());
  for (auto omega : set) pts.push_back(m.increment(omega, t));
  return pts;
}

inline Splitting split_level_set(const Market& m, std::size_t t, const ScenarioSet& gamma) {
  if (gamma.empty()) throw DomainError("split_level_set: empty level set");
  if (t < 1 || t > m.T) throw StructuralError("split_level_set: period out of range");

  Splitting s;
  s.t = t;
  s.level_set = gamma;
  ScenarioSet rest = gamma;
  while (!rest.empty()) {
    auto sep = maximal_separator(increments(m, t, rest));
    if (!sep) break;
    ScenarioSet block;
    for (auto i : sep->strict) block.push_back(rest[i]);
    rest = set_difference(rest, block);
    s.blocks.push_back(std::move(block));
    s.separators.push_back(std::move(sep->direction));
  }
  // Each round confines the remaining increments to a hyperplane.
  if (s.beta() > m.d) throw std::logic_error("split_level_set: more than d blocks");
  s.residual = std::move(rest);
  return s;
}

/// One block removed during elimination.
struct Removal {
  std::size_t round = 0;  // 1-based sweep number
  std::size_t t = 0;
  ScenarioSet block;
  Vec separator;
};

struct PolarAnalysis {
  ScenarioSet omega_star;
  /// survivors[t]: scenarios alive when period t+1 was split in the first
  /// sweep; survivors[T] = all scenarios, survivors[0] = end of sweep one.
  std::vector<ScenarioSet> survivors;
  /// First-sweep splittings, ordered by t ascending then level set.
  std::vector<Splitting> splittings;
  /// eliminated[t-1]: level sets of F_{t-1} emptied at period t (B* empty).
  std::vector<std::vector<ScenarioSet>> eliminated;
  std::vector<Removal> removals;
  std::size_t rounds = 0;
  /// Single backward pass removing only fully eliminated level sets,
  /// Omega* = intersection over t of the union of residuals.
  ScenarioSet single_pass_omega_star;

  ScenarioSet polar_complement(std::size_t n) const {
    ScenarioSet all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    return set_difference(all, omega_star);
  }
};

namespace detail {

inline ScenarioSet single_pass(const Market& m) {
  ScenarioSet alive = m.all();
  std::vector<ScenarioSet> residual_union(m.T + 1);
  for (std::size_t t = m.T; t >= 1; --t) {
    ScenarioSet emptied;
    for (const auto& gamma : level_sets(m, alive, t - 1).atoms) {
      const Splitting s = split_level_set(m, t, gamma);
      residual_union[t] = set_union(residual_union[t], s.residual);
      if (s.residual.empty()) emptied = set_union(emptied, gamma);
    }
    alive = set_difference(alive, emptied);
  }
  ScenarioSet result = m.all();
  for (std::size_t t = 1; t <= m.T; ++t) result = set_intersection(result, residual_union[t]);
  return result;
}

}  // namespace detail

/// Sweeps t = T..1 over the surviving set, removing every arbitrage block,
/// until a full sweep removes nothing.
inline PolarAnalysis backward_eliminate(const Market& m) {
  PolarAnalysis pa;
  pa.eliminated.resize(m.T);
  pa.survivors.assign(m.T + 1, ScenarioSet{});
  ScenarioSet alive = m.all();
  pa.survivors[m.T] = alive;

  for (bool changed = true; changed;) {
    changed = false;
    ++pa.rounds;
    for (std::size_t t = m.T; t >= 1; --t) {
      ScenarioSet removed;
      for (const auto& gamma : level_sets(m, alive, t - 1).atoms) {
        Splitting s = split_level_set(m, t, gamma);
        for (std::size_t i = 0; i < s.beta(); ++i) {
          pa.removals.push_back({pa.rounds, t, s.blocks[i], s.separators[i]});
          removed = set_union(removed, s.blocks[i]);
        }
        if (s.residual.empty()) {
          auto& e = pa.eliminated[t - 1];
          if (std::find(e.begin(), e.end(), gamma) == e.end()) e.push_back(gamma);
        }
        if (pa.rounds == 1) pa.splittings.push_back(std::move(s));
      }
      if (!removed.empty()) changed = true;
      alive = set_difference(alive, removed);
      if (pa.rounds == 1) pa.survivors[t - 1] = alive;
    }
  }
  pa.omega_star = std::move(alive);

  std::stable_sort(pa.splittings.begin(), pa.splittings.end(),
                   [](const Splitting& a, const Splitting& b) {
                     if (a.t != b.t) return a.t < b.t;
                     return a.level_set.front() < b.level_set.front();
                   });
  for (auto& e : pa.eliminated)
    std::sort(e.begin(), e.end(), [](const ScenarioSet& a, const ScenarioSet& b) { return a.front() < b.front(); });
  pa.single_pass_omega_star = detail::single_pass(m);
  return pa;
}

struct Aggregator {
  Strategy strategy;     // governed by `enlarged`
  Filtration enlarged;   // F~_0..F~_T
};

/// H*_t equals the separator of the block that removed the scenario at
/// period t and zero elsewhere, so each stage gain is >= 0 and the
/// terminal gain is positive exactly off Omega*. The enlarged filtration
/// is F~_t = F_t v sigma(H*_1..H*_{t+1}) for t < T and
/// F~_T = F_T v sigma(H*_1..H*_T).
inline Aggregator universal_aggregator(const Market& m, const PolarAnalysis& pa) {
  const std::size_t n = m.size();
  std::vector<std::vector<Vec>> pos(m.T + 1, std::vector<Vec>(n, zero_vec(m.d)));
  for (const auto& r : pa.removals)
    for (auto omega : r.block) pos[r.t][omega] = r.separator;

  const ScenarioSet all = m.all();
  Filtration natural = natural_filtration(m);
  Aggregator agg;
  agg.enlarged = natural;
  for (std::size_t t = 0; t <= m.T; ++t) {
    const std::size_t last = std::min(t + 1, m.T);
    for (std::size_t s = 1; s <= last; ++s)
      agg.enlarged[t] = refine(agg.enlarged[t],
                               partition_by(all, [&](std::size_t omega) { return pos[s][omega]; }));
  }

  agg.strategy = Strategy::zero(m.d, m.T);
  for (std::size_t t = 1; t <= m.T; ++t)
    for (const auto& atom : agg.enlarged[t - 1].atoms)
      agg.strategy.positions[t - 1].push_back({atom, pos[t][atom.front()]});
  return agg;
}

}  // namespace mfarb
