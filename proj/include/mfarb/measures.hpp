#pragma once

// Martingale measures on a finite scenario market.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "mfarb/errors.hpp"
#include "mfarb/geometry.hpp"
#include "mfarb/lp.hpp"
#include "mfarb/market.hpp"
#include "mfarb/splitter.hpp"

namespace mfarb {

/// Feasible points are exactly the martingale measures: q >= 0, sum q = 1
/// and, for every t, every atom A of F_{t-1} and every asset k,
/// sum_{omega in A} q_omega (S^k_t - S^k_{t-1})(omega) = 0.
struct MartingalePolytope {
  LinearProgram lp;  // objective left at zero
};

inline MartingalePolytope build_polytope(const Market& m) {
  const std::size_t n = m.size();
  MartingalePolytope poly;
  auto& lp = poly.lp;
  lp.objective.assign(n, Rational(0));
  lp.bounds.assign(n, Bound{Rational(0), std::nullopt});
  lp.add(Vec(n, Rational(1)), Relation::Equal, 1);
  const Filtration f = natural_filtration(m);
  for (std::size_t t = 1; t <= m.T; ++t)
    for (const auto& atom : f[t - 1].atoms)
      for (std::size_t k = 0; k < m.d; ++k) {
        Vec row(n, Rational(0));
        for (auto omega : atom) row[omega] = m.price(omega, t)[k] - m.price(omega, t - 1)[k];
        lp.add(std::move(row), Relation::Equal, 0);
      }
  return poly;
}

inline bool is_probability(const DiscreteMeasure& q, std::size_t n) {
  if (q.weights.size() != n) return false;
  Rational total = 0;
  for (const auto& w : q.weights) {
    if (w < 0) return false;
    total += w;
  }
  return total == 1;
}

/// Exact per-atom martingale equalities against the given filtration.
inline bool check_martingale(const Market& m, const DiscreteMeasure& q, const Filtration& filtration) {
  if (!is_probability(q, m.size()) || filtration.size() < m.T) return false;
  for (std::size_t t = 1; t <= m.T; ++t)
    for (const auto& atom : filtration[t - 1].atoms) {
      Vec sum = zero_vec(m.d);
      for (auto omega : atom)
        if (q.weights[omega] != 0) sum = sum + q.weights[omega] * m.increment(omega, t);
      if (!is_zero(sum)) return false;
    }
  return true;
}

/// Finite-support martingale measure charging scenario `pick`, built
/// forward in time on the Omega*-restricted tree: each node with positive
/// mass spreads it over its children by a convex combination of
/// increments that is zero, maximizing the weight of the path that
/// carries the chosen scenario.
inline DiscreteMeasure supporting_measure(const Market& m, const PolarAnalysis& pa, std::size_t pick) {
  if (pick >= m.size()) throw StructuralError("supporting_measure: scenario index out of range");
  if (!contains(pa.omega_star, pick))
    throw DomainError("scenario " + m.scenarios[pick].id + " is M-polar");

  DiscreteMeasure q{Vec(m.size(), Rational(0))};
  std::vector<std::pair<ScenarioSet, Rational>> frontier;
  for (auto& atom : level_sets(m, pa.omega_star, 0).atoms)
    if (contains(atom, pick)) frontier.push_back({std::move(atom), Rational(1)});

  for (std::size_t t = 1; t <= m.T; ++t) {
    std::vector<std::pair<ScenarioSet, Rational>> next;
    for (const auto& [node, mass] : frontier) {
      std::size_t anchor = 0;
      for (std::size_t i = 0; i < node.size(); ++i)
        if (node[i] == pick) anchor = i;
      const Vec lambda = convex_combination_for_zero(increments(m, t, node), anchor);
      if (t == m.T) {
        for (std::size_t i = 0; i < node.size(); ++i) q.weights[node[i]] += mass * lambda[i];
        continue;
      }
      for (auto& child : level_sets(m, node, t).atoms) {
        Rational w = 0;
        for (std::size_t i = 0; i < node.size(); ++i)
          if (contains(child, node[i])) w += lambda[i];
        if (w > 0) next.push_back({std::move(child), mass * w});
      }
    }
    if (t < m.T) frontier = std::move(next);
  }
  return q;
}

/// Pointwise convex combination.
inline DiscreteMeasure mix(const std::vector<DiscreteMeasure>& measures, const Vec& weights) {
  if (measures.empty() || measures.size() != weights.size())
    throw DomainError("mix: need one positive weight per measure");
  Rational total = 0;
  for (const auto& w : weights) {
    if (w <= 0) throw DomainError("mix: weights must be positive");
    total += w;
  }
  if (total != 1) throw DomainError("mix: weights sum to " + to_string(total) + ", not 1");
  const std::size_t n = measures.front().weights.size();
  DiscreteMeasure out{Vec(n, Rational(0))};
  for (std::size_t j = 0; j < measures.size(); ++j) {
    if (measures[j].weights.size() != n) throw StructuralError("mix: measures over different spaces");
    for (std::size_t i = 0; i < n; ++i) out.weights[i] += weights[j] * measures[j].weights[i];
  }
  return out;
}

/// 2^{-n}, n = 1..count, rescaled to sum exactly one.
inline Vec geometric_weights(std::size_t count) {
  Vec w(count);
  mpz_class full;
  mpz_ui_pow_ui(full.get_mpz_t(), 2, count);
  const Rational denom(full - 1);
  for (std::size_t n = 1; n <= count; ++n) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, count - n);
    w[n - 1] = Rational(p) / denom;
  }
  return w;
}

struct SupportedMeasure {
  DiscreteMeasure measure;
  bool full = false;  // support is every scenario
};

/// Martingale measure whose support is exactly Omega*.
inline std::optional<SupportedMeasure> full_support_measure(const Market& m, const PolarAnalysis& pa) {
  if (pa.omega_star.empty()) return std::nullopt;
  std::vector<DiscreteMeasure> parts;
  for (auto omega : pa.omega_star) parts.push_back(supporting_measure(m, pa, omega));
  SupportedMeasure out;
  out.measure = mix(parts, geometric_weights(parts.size()));
  out.full = pa.omega_star.size() == m.size();
  return out;
}

/// A martingale measure charging every set of the class, if any exists.
inline std::optional<DiscreteMeasure> class_measure(const Market& m, const PolarAnalysis& pa,
                                                    const SignificantClass& cls) {
  if (pa.omega_star.empty()) return std::nullopt;
  std::vector<std::size_t> picks;
  for (const auto& c : cls.sets) {
    const ScenarioSet hit = set_intersection(c, pa.omega_star);
    if (hit.empty()) return std::nullopt;
    if (std::find(picks.begin(), picks.end(), hit.front()) == picks.end()) picks.push_back(hit.front());
  }
  if (picks.empty()) picks.push_back(pa.omega_star.front());
  std::vector<DiscreteMeasure> parts;
  for (auto omega : picks) parts.push_back(supporting_measure(m, pa, omega));
  return mix(parts, geometric_weights(parts.size()));
}

}  // namespace mfarb
