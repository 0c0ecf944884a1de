#pragma once

// Finite scenario markets: price paths, filtrations as partitions of
// scenario indices, predictable strategies and their value processes.
//
// Scenario indices follow input order and are used everywhere as the
// canonical order (atoms, id lists, reports).

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mfarb/errors.hpp"
#include "mfarb/geometry.hpp"
#include "mfarb/rational.hpp"

namespace mfarb {

using ScenarioSet = IndexSet;  // sorted ascending, no duplicates

struct Scenario {
  std::string id;
  std::vector<Vec> path;  // path[t] = S_t, t = 0..T
};

struct SignificantClass {
  std::string name;
  std::vector<ScenarioSet> sets;
};

/// Dense weight vector over scenarios; sums to one.
struct DiscreteMeasure {
  Vec weights;

  ScenarioSet support() const {
    ScenarioSet s;
    for (std::size_t i = 0; i < weights.size(); ++i)
      if (weights[i] > 0) s.push_back(i);
    return s;
  }
  Rational mass(const ScenarioSet& set) const {
    Rational m = 0;
    for (auto i : set) m += weights[i];
    return m;
  }
  friend bool operator==(const DiscreteMeasure&, const DiscreteMeasure&) = default;
};

struct Market {
  std::size_t d = 0;
  std::size_t T = 0;
  std::vector<Scenario> scenarios;
  std::map<std::string, SignificantClass> classes;
  std::map<std::string, DiscreteMeasure> probabilities;

  std::size_t size() const { return scenarios.size(); }
  const Vec& price(std::size_t omega, std::size_t t) const { return scenarios[omega].path[t]; }
  /// S_t - S_{t-1} on scenario omega, t >= 1.
  Vec increment(std::size_t omega, std::size_t t) const {
    return price(omega, t) - price(omega, t - 1);
  }
  ScenarioSet all() const {
    ScenarioSet s(size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = i;
    return s;
  }
  std::optional<std::size_t> index_of(const std::string& id) const {
    for (std::size_t i = 0; i < scenarios.size(); ++i)
      if (scenarios[i].id == id) return i;
    return std::nullopt;
  }
};

// ---------------------------------------------------------------------------
// Scenario set helpers

inline ScenarioSet set_intersection(const ScenarioSet& a, const ScenarioSet& b) {
  ScenarioSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline ScenarioSet set_difference(const ScenarioSet& a, const ScenarioSet& b) {
  ScenarioSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline ScenarioSet set_union(const ScenarioSet& a, const ScenarioSet& b) {
  ScenarioSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline bool contains(const ScenarioSet& s, std::size_t i) {
  return std::binary_search(s.begin(), s.end(), i);
}

inline bool is_subset(const ScenarioSet& a, const ScenarioSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// ---------------------------------------------------------------------------
// Partitions

struct Partition {
  std::vector<ScenarioSet> atoms;  // ordered by smallest member

  ScenarioSet ground() const {
    ScenarioSet g;
    for (const auto& a : atoms) g.insert(g.end(), a.begin(), a.end());
    std::sort(g.begin(), g.end());
    return g;
  }
  /// Index of the atom containing omega, if any.
  std::optional<std::size_t> atom_of(std::size_t omega) const {
    for (std::size_t k = 0; k < atoms.size(); ++k)
      if (contains(atoms[k], omega)) return k;
    return std::nullopt;
  }
  friend bool operator==(const Partition&, const Partition&) = default;
};

using Filtration = std::vector<Partition>;  // index t = 0..T

/// Groups `ground` by equality of key(omega); atoms sorted by smallest index.
template <class KeyFn>
Partition partition_by(const ScenarioSet& ground, KeyFn key) {
  Partition p;
  std::vector<decltype(key(std::size_t{}))> keys;
  for (auto omega : ground) {
    auto k = key(omega);
    auto it = std::find(keys.begin(), keys.end(), k);
    if (it == keys.end()) {
      keys.push_back(std::move(k));
      p.atoms.push_back({omega});
    } else {
      p.atoms[static_cast<std::size_t>(it - keys.begin())].push_back(omega);
    }
  }
  return p;
}

/// Price history S_{0:t} of one scenario; the level-set key.
inline std::vector<Vec> history(const Market& m, std::size_t omega, std::size_t t) {
  return {m.scenarios[omega].path.begin(), m.scenarios[omega].path.begin() + static_cast<long>(t) + 1};
}

/// Level sets of S_{0:t} within `ground`.
inline Partition level_sets(const Market& m, const ScenarioSet& ground, std::size_t t) {
  return partition_by(ground, [&](std::size_t omega) { return history(m, omega, t); });
}

inline Filtration natural_filtration(const Market& m) {
  Filtration f;
  const ScenarioSet all = m.all();
  for (std::size_t t = 0; t <= m.T; ++t) f.push_back(level_sets(m, all, t));
  return f;
}

/// Coarsest common refinement (join of the generated sigma-algebras).
inline Partition refine(const Partition& p, const Partition& q) {
  if (p.ground() != q.ground()) throw StructuralError("refine: partitions have different ground sets");
  Partition out;
  for (const auto& a : p.atoms)
    for (const auto& b : q.atoms)
      if (auto c = set_intersection(a, b); !c.empty()) out.atoms.push_back(std::move(c));
  std::sort(out.atoms.begin(), out.atoms.end(),
            [](const ScenarioSet& x, const ScenarioSet& y) { return x.front() < y.front(); });
  return out;
}

/// True when every atom of `fine` lies inside one atom of `coarse`.
inline bool refines(const Partition& fine, const Partition& coarse) {
  for (const auto& a : fine.atoms) {
    const auto k = coarse.atom_of(a.front());
    if (!k || !is_subset(a, coarse.atoms[*k])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Strategies

struct AtomPosition {
  ScenarioSet atom;
  Vec position;
  friend bool operator==(const AtomPosition&, const AtomPosition&) = default;
};

/// positions[t - 1] lists the positions held over (t-1, t]; atoms within a
/// period are disjoint and scenarios outside every listed atom hold zero.
struct Strategy {
  std::size_t d = 0;
  std::vector<std::vector<AtomPosition>> positions;

  static Strategy zero(std::size_t d, std::size_t T) {
    Strategy h;
    h.d = d;
    h.positions.resize(T);
    return h;
  }
  std::size_t periods() const { return positions.size(); }

  Vec at(std::size_t t, std::size_t omega) const {
    for (const auto& ap : positions.at(t - 1))
      if (contains(ap.atom, omega)) return ap.position;
    return zero_vec(d);
  }
  friend bool operator==(const Strategy&, const Strategy&) = default;
};

/// Stage gains H_t . dS_t per scenario, without predictability checks.
inline std::vector<Vec> stage_gains(const Market& m, const Strategy& h) {
  if (h.periods() != m.T || h.d != m.d) throw StructuralError("strategy shape does not match market");
  std::vector<Vec> g(m.T + 1, Vec(m.size(), Rational(0)));
  for (std::size_t t = 1; t <= m.T; ++t)
    for (const auto& ap : h.positions[t - 1]) {
      if (ap.position.size() != m.d) throw StructuralError("position vector has wrong dimension");
      for (auto omega : ap.atom) {
        if (omega >= m.size()) throw StructuralError("strategy refers to unknown scenario");
        g[t][omega] += dot(ap.position, m.increment(omega, t));
      }
    }
  return g;
}

/// V[t][omega] = sum_{s <= t} H_s . (S_s - S_{s-1}); no atom checks.
inline std::vector<Vec> wealth(const Market& m, const Strategy& h) {
  std::vector<Vec> v = stage_gains(m, h);
  for (std::size_t t = 1; t <= m.T; ++t)
    for (std::size_t omega = 0; omega < m.size(); ++omega) v[t][omega] += v[t - 1][omega];
  return v;
}

/// Value process of a strategy whose every atom at period t is an atom
/// of filtration[t-1].
inline std::vector<Vec> value_process(const Market& m, const Filtration& filtration, const Strategy& h) {
  if (filtration.size() != m.T + 1) throw StructuralError("filtration length must be T+1");
  if (h.periods() != m.T) throw StructuralError("strategy must have T periods");
  for (std::size_t t = 1; t <= m.T; ++t)
    for (const auto& ap : h.positions[t - 1]) {
      const auto& atoms = filtration[t - 1].atoms;
      if (std::find(atoms.begin(), atoms.end(), ap.atom) == atoms.end())
        throw StructuralError("strategy at t=" + std::to_string(t) +
                              " references an atom absent from the filtration at t-1");
    }
  return wealth(m, h);
}

/// Each H_t constant on every atom of filtration[t-1].
inline bool check_predictable(const Strategy& h, const Filtration& filtration) {
  if (filtration.size() < h.periods()) return false;
  for (std::size_t t = 1; t <= h.periods(); ++t)
    for (const auto& atom : filtration[t - 1].atoms) {
      const Vec first = h.at(t, atom.front());
      for (auto omega : atom)
        if (h.at(t, omega) != first) return false;
    }
  return true;
}

/// Positive-gain set {V_T > 0}.
inline ScenarioSet positive_set(const Vec& terminal) {
  ScenarioSet s;
  for (std::size_t i = 0; i < terminal.size(); ++i)
    if (terminal[i] > 0) s.push_back(i);
  return s;
}

}  // namespace mfarb
