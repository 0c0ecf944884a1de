#pragma once

// Arbitrage semantics on top of the polar analysis: classification for a
// class of significant sets, one-step 1p checks, defragmentation,
// Lebesgue decomposition, P-classical extraction and feasibility.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mfarb/errors.hpp"
#include "mfarb/geometry.hpp"
#include "mfarb/market.hpp"
#include "mfarb/measures.hpp"
#include "mfarb/oracle.hpp"
#include "mfarb/splitter.hpp"

namespace mfarb {

enum class FiltrationMode { Natural, Enlarged };

/// Built-in "MI" = {Omega} and "1p" = all singletons; declared classes
/// take precedence over built-ins of the same name.
inline SignificantClass resolve_class(const Market& m, const std::string& name) {
  if (auto it = m.classes.find(name); it != m.classes.end()) return it->second;
  SignificantClass c{name, {}};
  if (name == "MI") {
    c.sets.push_back(m.all());
  } else if (name == "1p") {
    for (std::size_t i = 0; i < m.size(); ++i) c.sets.push_back({i});
  } else {
    throw LookupError("unknown class '" + name + "'");
  }
  return c;
}

struct Verdict {
  enum class Kind { NoArbitrage, Arbitrage };
  Kind kind = Kind::NoArbitrage;
  std::optional<Strategy> witness;
  std::optional<ScenarioSet> cited_set;         // member of S inside V+ of the witness
  std::optional<DiscreteMeasure> certificate;   // martingale measure charging every set of S
  std::string note;

  bool arbitrage() const { return kind == Kind::Arbitrage; }
};

inline Verdict classify(const Market& m, const PolarAnalysis& pa, const SignificantClass& cls,
                        FiltrationMode mode) {
  if (cls.sets.empty()) throw StructuralError("class '" + cls.name + "' has no sets");
  for (const auto& c : cls.sets)
    if (c.empty()) throw ValidationError("class '" + cls.name + "' contains the empty set");

  Verdict v;
  if (mode == FiltrationMode::Enlarged) {
    const ScenarioSet polar = pa.polar_complement(m.size());
    std::optional<ScenarioSet> hit;
    if (pa.omega_star.empty()) {
      hit = cls.sets.front();
      v.note = "no martingale measure: the aggregator gains on every scenario";
    } else {
      for (const auto& c : cls.sets)
        if (is_subset(c, polar)) {
          hit = c;
          v.note = "a set of the class lies inside the maximal polar set";
          break;
        }
    }
    if (hit) {
      v.kind = Verdict::Kind::Arbitrage;
      v.witness = universal_aggregator(m, pa).strategy;
      v.cited_set = std::move(hit);
      return v;
    }
    v.certificate = class_measure(m, pa, cls);
    if (!v.certificate) throw std::logic_error("classify: no class measure despite no arbitrage");
    v.note = "martingale measure charging every set of the class";
    return v;
  }

  const Filtration natural = natural_filtration(m);
  for (const auto& c : cls.sets)
    if (auto h = oracle_arbitrage(m, natural, c)) {
      v.kind = Verdict::Kind::Arbitrage;
      v.witness = std::move(h);
      v.cited_set = c;
      v.note = "F-predictable strategy found by exhaustive LP search";
      return v;
    }
  v.certificate = class_measure(m, pa, cls);
  v.note = v.certificate ? "martingale measure charging every set of the class"
                         : "no F-predictable strategy gains on any set of the class (LP infeasible); "
                           "no martingale measure charges every set";
  return v;
}

/// Classification for the class of all sets charged by at least one of
/// the given measures. Some such set lies in the polar set iff one of the
/// measures charges it, so no subsets are enumerated.
inline Verdict classify_charged(const Market& m, const PolarAnalysis& pa, const std::vector<DiscreteMeasure>& measures) {
  if (measures.empty()) throw StructuralError("classify_charged: no measures given");
  for (const auto& p : measures)
    if (!is_probability(p, m.size()))
      throw StructuralError("measure must have one nonnegative weight per scenario summing to 1");

  Verdict v;
  const ScenarioSet polar = pa.polar_complement(m.size());
  for (const auto& p : measures) {
    const ScenarioSet charged = set_intersection(p.support(), polar);
    if (pa.omega_star.empty() || !charged.empty()) {
      v.kind = Verdict::Kind::Arbitrage;
      v.witness = universal_aggregator(m, pa).strategy;
      v.cited_set = pa.omega_star.empty() ? p.support() : charged;
      v.note = pa.omega_star.empty() ? "no martingale measure: the aggregator gains on every scenario"
                                     : "a measure charges the maximal polar set";
      return v;
    }
  }
  // Every charged set meets supp(P_j), which lies in Omega*.
  std::vector<DiscreteMeasure> parts;
  ScenarioSet picks;
  for (const auto& p : measures) picks = set_union(picks, p.support());
  for (auto omega : picks) parts.push_back(supporting_measure(m, pa, omega));
  v.certificate = mix(parts, geometric_weights(parts.size()));
  v.note = "martingale measure charging every point charged by the measures";
  return v;
}

struct OneStepArbitrage {
  std::size_t t = 0;
  ScenarioSet level_set;    // atom of F_{t-1}
  std::vector<Vec> key;     // common price history S_{0:t-1}
  Vec position;
  ScenarioSet gain_set;     // where position . dS_t > 0
};

/// Every period and F_{t-1} atom on which a one-period position gains
/// somewhere and loses nowhere; empty iff there is no 1p-arbitrage.
inline std::vector<OneStepArbitrage> one_step_1p_check(const Market& m) {
  std::vector<OneStepArbitrage> out;
  const Filtration f = natural_filtration(m);
  for (std::size_t t = 1; t <= m.T; ++t)
    for (const auto& atom : f[t - 1].atoms) {
      auto sep = maximal_separator(increments(m, t, atom));
      if (!sep) continue;
      OneStepArbitrage a;
      a.t = t;
      a.level_set = atom;
      a.key = history(m, atom.front(), t - 1);
      a.position = std::move(sep->direction);
      for (auto i : sep->strict) a.gain_set.push_back(atom[i]);
      out.push_back(std::move(a));
    }
  return out;
}

struct Defragmentation {
  std::vector<ScenarioSet> pieces;  // pieces[t-1] = U_t
  Strategy masked;
};

/// U_t = {V_t > 0} minus the earlier pieces; the masked strategy stops
/// trading on a scenario once its piece has been realised.
inline Defragmentation defragment(const Market& m, const Strategy& h) {
  const auto v = wealth(m, h);
  for (std::size_t omega = 0; omega < m.size(); ++omega)
    if (v[m.T][omega] < 0)
      throw DomainError("defragment: terminal value is negative on scenario " + m.scenarios[omega].id);

  Defragmentation out;
  out.masked = Strategy::zero(m.d, m.T);
  ScenarioSet done;
  for (std::size_t t = 1; t <= m.T; ++t) {
    for (const auto& ap : h.positions[t - 1]) {
      ScenarioSet live = set_difference(ap.atom, done);
      ScenarioSet stopped = set_intersection(ap.atom, done);
      if (!live.empty()) out.masked.positions[t - 1].push_back({std::move(live), ap.position});
      if (!stopped.empty()) out.masked.positions[t - 1].push_back({std::move(stopped), zero_vec(m.d)});
    }
    std::sort(out.masked.positions[t - 1].begin(), out.masked.positions[t - 1].end(),
              [](const AtomPosition& a, const AtomPosition& b) { return a.atom.front() < b.atom.front(); });
    ScenarioSet piece = set_difference(positive_set(v[t]), done);
    done = set_union(done, piece);
    out.pieces.push_back(std::move(piece));
  }
  return out;
}

struct Decomposition {
  Vec continuous;  // P restricted off the carrier
  Vec singular;    // P restricted to the carrier
  ScenarioSet carrier;
};

inline void require_probability(const Market& m, const DiscreteMeasure& p) {
  if (!is_probability(p, m.size()))
    throw StructuralError("measure must have one nonnegative weight per scenario summing to 1");
}

/// Carrier = supp(P) minus Omega*; the singular part lives there.
inline Decomposition lebesgue_decompose(const Market& m, const PolarAnalysis& pa, const DiscreteMeasure& p) {
  require_probability(m, p);
  Decomposition d;
  d.continuous.assign(m.size(), Rational(0));
  d.singular.assign(m.size(), Rational(0));
  d.carrier = set_difference(p.support(), pa.omega_star);
  for (std::size_t i = 0; i < m.size(); ++i)
    (contains(d.carrier, i) ? d.singular : d.continuous)[i] = p.weights[i];
  return d;
}

struct PArbitrage {
  Strategy strategy;   // F-predictable, trades only at tau
  std::size_t tau = 0;
  ScenarioSet gain_set;
  Rational gain_mass;  // P(V_T > 0)
};

/// A P-classical arbitrage when P charges the maximal polar set.
///
/// The search runs on the sub-market supp(P): tau is the first period at
/// which some supp(P)-level set of F_{tau-1} splits, and on every such
/// level set the first block's separator is held at tau. P charges every
/// point of supp(P), so the first block is always the charged one.
inline std::optional<PArbitrage> extract_p_arbitrage(const Market& m, const PolarAnalysis& pa,
                                                     const DiscreteMeasure& p) {
  require_probability(m, p);
  const ScenarioSet support = p.support();
  if (set_difference(support, pa.omega_star).empty()) return std::nullopt;

  const Filtration f = natural_filtration(m);
  for (std::size_t t = 1; t <= m.T; ++t) {
    Strategy h = Strategy::zero(m.d, m.T);
    for (const auto& atom : f[t - 1].atoms) {
      const ScenarioSet charged = set_intersection(atom, support);
      if (charged.empty()) continue;
      const Splitting s = split_level_set(m, t, charged);
      if (s.beta() > 0) h.positions[t - 1].push_back({atom, s.separators.front()});
    }
    if (h.positions[t - 1].empty()) continue;

    const Vec terminal = wealth(m, h)[m.T];
    PArbitrage out;
    out.tau = t;
    for (auto omega : support) {
      if (terminal[omega] < 0) throw std::logic_error("extract_p_arbitrage: loss on supp(P)");
      if (terminal[omega] > 0) {
        out.gain_set.push_back(omega);
        out.gain_mass += p.weights[omega];
      }
    }
    if (out.gain_mass <= 0) throw std::logic_error("extract_p_arbitrage: no P-mass gain");
    out.strategy = std::move(h);
    return out;
  }
  throw std::logic_error("extract_p_arbitrage: P charges a polar set but no level set splits");
}

struct ArbitrageLadder {
  bool no_1p = false;
  bool no_class = false;
  bool no_model_independent = false;

  /// No 1p implies no class-S arbitrage implies no model-independent one.
  bool consistent() const {
    return (!no_1p || no_class) && (!no_class || no_model_independent);
  }
};

inline ArbitrageLadder arbitrage_ladder(const Market& m, const PolarAnalysis& pa, const SignificantClass& cls) {
  ArbitrageLadder l;
  l.no_1p = one_step_1p_check(m).empty();
  l.no_class = !classify(m, pa, cls, FiltrationMode::Enlarged).arbitrage();
  l.no_model_independent = !classify(m, pa, resolve_class(m, "MI"), FiltrationMode::Enlarged).arbitrage();
  return l;
}

struct FeasibilityReport {
  bool omega_star_is_all = false;
  std::optional<SupportedMeasure> measure;
  bool full_support = false;
  bool no_open_arbitrage = false;  // singleton class, enlarged filtration
  bool no_one_step = false;
  SignificantClass ladder_class;
  ArbitrageLadder ladder;

  bool feasible() const { return omega_star_is_all; }
  bool facets_agree() const {
    return omega_star_is_all == full_support && full_support == no_open_arbitrage &&
           no_open_arbitrage == no_one_step;
  }
};

/// The ladder uses the union of all declared classes, or MI when the
/// market declares none.
inline FeasibilityReport feasibility(const Market& m, const PolarAnalysis& pa) {
  FeasibilityReport r;
  r.omega_star_is_all = pa.omega_star.size() == m.size();
  r.measure = full_support_measure(m, pa);
  r.full_support = r.measure && r.measure->full;
  r.no_open_arbitrage = !classify(m, pa, resolve_class(m, "1p"), FiltrationMode::Enlarged).arbitrage();
  r.no_one_step = one_step_1p_check(m).empty();

  r.ladder_class.name = "declared";
  for (const auto& [name, cls] : m.classes)
    for (const auto& s : cls.sets)
      if (std::find(r.ladder_class.sets.begin(), r.ladder_class.sets.end(), s) == r.ladder_class.sets.end())
        r.ladder_class.sets.push_back(s);
  if (r.ladder_class.sets.empty()) r.ladder_class = resolve_class(m, "MI");
  r.ladder = arbitrage_ladder(m, pa, r.ladder_class);
  return r;
}

}  // namespace mfarb
