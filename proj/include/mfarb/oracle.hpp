#pragma once

// Brute-force ground truth. Nothing here uses the splitting machinery:
// the support comes from one LP per scenario over the martingale
// polytope, arbitrage from one LP over all predictable strategies.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mfarb/lp.hpp"
#include "mfarb/market.hpp"
#include "mfarb/measures.hpp"

namespace mfarb {

/// Scenarios charged by some martingale measure.
inline ScenarioSet oracle_support(const Market& m) {
  MartingalePolytope poly = build_polytope(m);
  ScenarioSet support;
  for (std::size_t omega = 0; omega < m.size(); ++omega) {
    poly.lp.objective.assign(m.size(), Rational(0));
    poly.lp.objective[omega] = 1;
    const LpResult res = lp_solve(poly.lp);
    if (res.status == LpStatus::Infeasible) return {};
    if (res.optimal() && *res.objective_value > 0) support.push_back(omega);
  }
  return support;
}

struct OracleOptions {
  /// Restrict the search to strategies trading only in this period.
  std::optional<std::size_t> only_period;
};

/// A strategy predictable for `filtration` with V_T >= 0 everywhere and
/// V_T >= 1 on `target`, or nullopt when none exists.
inline std::optional<Strategy> oracle_arbitrage(const Market& m, const Filtration& filtration,
                                                const ScenarioSet& target, OracleOptions opts = {}) {
  if (target.empty()) throw DomainError("oracle_arbitrage: target set is empty");
  if (filtration.size() != m.T + 1) throw StructuralError("filtration length must be T+1");

  struct Slot {
    std::size_t t, atom;
  };
  std::vector<Slot> slots;
  for (std::size_t t = 1; t <= m.T; ++t) {
    if (opts.only_period && *opts.only_period != t) continue;
    for (std::size_t k = 0; k < filtration[t - 1].atoms.size(); ++k) slots.push_back({t, k});
  }
  const std::size_t vars = slots.size() * m.d;

  LinearProgram lp;
  lp.objective.assign(vars, Rational(0));
  for (std::size_t omega = 0; omega < m.size(); ++omega) {
    Vec row(vars, Rational(0));
    for (std::size_t s = 0; s < slots.size(); ++s) {
      if (!contains(filtration[slots[s].t - 1].atoms[slots[s].atom], omega)) continue;
      const Vec inc = m.increment(omega, slots[s].t);
      for (std::size_t k = 0; k < m.d; ++k) row[s * m.d + k] = inc[k];
    }
    lp.add(std::move(row), Relation::GreaterEq, contains(target, omega) ? 1 : 0);
  }
  const LpResult res = lp_solve(lp);
  if (!res.optimal()) return std::nullopt;

  Strategy h = Strategy::zero(m.d, m.T);
  for (std::size_t s = 0; s < slots.size(); ++s) {
    Vec pos(res.solution->begin() + static_cast<long>(s * m.d),
            res.solution->begin() + static_cast<long>((s + 1) * m.d));
    h.positions[slots[s].t - 1].push_back({filtration[slots[s].t - 1].atoms[slots[s].atom], std::move(pos)});
  }
  const Vec terminal = wealth(m, h)[m.T];
  for (std::size_t omega = 0; omega < m.size(); ++omega)
    if (terminal[omega] < (contains(target, omega) ? 1 : 0))
      throw std::logic_error("oracle_arbitrage: returned strategy violates its own constraints");
  return h;
}

}  // namespace mfarb
