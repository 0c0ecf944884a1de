#pragma once

// JSON market files, strategy files and report serialization.

#include <cstddef>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>
#include "mfarb/arbitrage.hpp"
#include "mfarb/errors.hpp"
#include "mfarb/market.hpp"
#include "mfarb/measures.hpp"
#include "mfarb/splitter.hpp"

namespace mfarb {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Reading

/// Integers, or strings holding "p", "p/q" or a decimal.
inline Rational rational_from_json(const json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(mpz_class(j.dump(), 10));
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
  }
  throw ValidationError(where + ": expected an integer or a rational string, got " + j.dump());
}

inline Vec vec_from_json(const json& j, std::size_t d, const std::string& where) {
  if (!j.is_array()) throw ValidationError(where + ": expected an array");
  if (j.size() != d)
    throw ValidationError(where + ": expected " + std::to_string(d) + " entries, got " + std::to_string(j.size()));
  Vec v;
  for (std::size_t k = 0; k < j.size(); ++k) v.push_back(rational_from_json(j[k], where + "[" + std::to_string(k) + "]"));
  return v;
}

inline std::size_t scenario_index(const Market& m, const std::string& id, const std::string& where) {
  auto idx = m.index_of(id);
  if (!idx) throw ValidationError(where + ": unknown scenario id '" + id + "'");
  return *idx;
}

/// Parses and validates a market document. Warnings (currently: S_0 not
/// common to all scenarios) are appended to `warnings` when given.
inline Market load_market(const json& doc, std::vector<std::string>* warnings = nullptr) {
  if (!doc.is_object()) throw ValidationError("market document must be a JSON object");
  auto count = [&](const char* key) -> long long {
    if (!doc.contains(key) || !doc[key].is_number_integer())
      throw ValidationError(std::string("field '") + key + "' must be an integer");
    return doc[key].get<long long>();
  };
  const long long d = count("d");
  const long long T = count("T");
  if (d < 1) throw ValidationError("d must be at least 1");
  if (T < 1) throw ValidationError("T must be at least 1 (got " + std::to_string(T) + ")");

  Market m;
  m.d = static_cast<std::size_t>(d);
  m.T = static_cast<std::size_t>(T);

  if (!doc.contains("scenarios") || !doc["scenarios"].is_array())
    throw ValidationError("field 'scenarios' must be an array");
  if (doc["scenarios"].empty()) throw ValidationError("scenario list is empty");
  std::set<std::string> seen;
  for (const auto& s : doc["scenarios"]) {
    if (!s.is_object() || !s.contains("id") || !s["id"].is_string())
      throw ValidationError("every scenario needs a string 'id'");
    Scenario sc;
    sc.id = s["id"].get<std::string>();
    if (sc.id.empty() || sc.id.find(',') != std::string::npos)
      throw ValidationError("scenario id '" + sc.id + "' must be nonempty and free of ','");
    if (!seen.insert(sc.id).second) throw ValidationError("duplicate scenario id '" + sc.id + "'");
    const std::string where = "scenario '" + sc.id + "'";
    if (!s.contains("prices") || !s["prices"].is_array())
      throw ValidationError(where + ": 'prices' must be an array of rows");
    if (s["prices"].size() != m.T + 1)
      throw ValidationError(where + ": ragged path, expected " + std::to_string(m.T + 1) + " rows, got " +
                            std::to_string(s["prices"].size()));
    for (std::size_t t = 0; t <= m.T; ++t)
      sc.path.push_back(vec_from_json(s["prices"][t], m.d, where + " prices[" + std::to_string(t) + "]"));
    m.scenarios.push_back(std::move(sc));
  }

  if (doc.contains("classes")) {
    if (!doc["classes"].is_object()) throw ValidationError("'classes' must be an object");
    for (const auto& [name, sets] : doc["classes"].items()) {
      const std::string where = "class '" + name + "'";
      if (!sets.is_array() || sets.empty()) throw ValidationError(where + ": expected a nonempty list of sets");
      SignificantClass cls{name, {}};
      for (const auto& set : sets) {
        if (!set.is_array()) throw ValidationError(where + ": each set must be an array of ids");
        if (set.empty()) throw ValidationError(where + ": contains the empty set, which may not be significant");
        ScenarioSet ss;
        for (const auto& id : set) {
          if (!id.is_string()) throw ValidationError(where + ": ids must be strings");
          ss.push_back(scenario_index(m, id.get<std::string>(), where));
        }
        std::sort(ss.begin(), ss.end());
        ss.erase(std::unique(ss.begin(), ss.end()), ss.end());
        cls.sets.push_back(std::move(ss));
      }
      m.classes[name] = std::move(cls);
    }
  }

  if (doc.contains("probabilities")) {
    if (!doc["probabilities"].is_object()) throw ValidationError("'probabilities' must be an object");
    for (const auto& [name, weights] : doc["probabilities"].items()) {
      const std::string where = "probability " + name;
      if (!weights.is_object()) throw ValidationError(where + ": expected an object id -> weight");
      DiscreteMeasure p{Vec(m.size(), Rational(0))};
      Rational total = 0;
      for (const auto& [id, w] : weights.items()) {
        const Rational r = rational_from_json(w, where + " weight of '" + id + "'");
        if (r < 0) throw ValidationError(where + ": negative weight on '" + id + "'");
        p.weights[scenario_index(m, id, where)] = r;
        total += r;
      }
      if (total != 1) throw ValidationError(where + " does not sum to 1 (sum " + to_string(total) + ")");
      m.probabilities[name] = std::move(p);
    }
  }

  if (warnings)
    for (std::size_t i = 1; i < m.size(); ++i)
      if (m.price(i, 0) != m.price(0, 0)) {
        warnings->push_back("S_0 differs across scenarios (first at '" + m.scenarios[i].id +
                            "'); F_0 is not trivial");
        break;
      }
  return m;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline Market load_market_file(const std::string& path, std::vector<std::string>* warnings = nullptr) {
  return load_market(read_json_file(path), warnings);
}

inline ScenarioSet parse_atom_key(const Market& m, const std::string& key, const std::string& where) {
  ScenarioSet atom;
  std::stringstream ss(key);
  std::string id;
  while (std::getline(ss, id, ',')) atom.push_back(scenario_index(m, id, where));
  std::sort(atom.begin(), atom.end());
  if (atom.empty() || std::adjacent_find(atom.begin(), atom.end()) != atom.end())
    throw ValidationError(where + ": malformed atom key '" + key + "'");
  return atom;
}

/// { "positions": { "t": { "id1,id2": [rat, ...] } } }; missing periods
/// and uncovered scenarios hold zero.
inline Strategy strategy_from_json(const Market& m, const json& doc) {
  if (!doc.is_object() || !doc.contains("positions") || !doc["positions"].is_object())
    throw ValidationError("strategy document needs a 'positions' object");
  Strategy h = Strategy::zero(m.d, m.T);
  for (const auto& [tkey, atoms] : doc["positions"].items()) {
    std::size_t t = 0;
    try {
      t = std::stoul(tkey);
    } catch (const std::exception&) {
      throw ValidationError("strategy period '" + tkey + "' is not an integer");
    }
    if (t < 1 || t > m.T) throw ValidationError("strategy period " + tkey + " outside 1..T");
    if (!atoms.is_object()) throw ValidationError("strategy period " + tkey + " must map atoms to vectors");
    ScenarioSet covered;
    for (const auto& [akey, pos] : atoms.items()) {
      const std::string where = "strategy t=" + tkey;
      ScenarioSet atom = parse_atom_key(m, akey, where);
      if (!set_intersection(atom, covered).empty()) throw ValidationError(where + ": atoms overlap");
      covered = set_union(covered, atom);
      h.positions[t - 1].push_back({std::move(atom), vec_from_json(pos, m.d, where + " atom '" + akey + "'")});
    }
    std::sort(h.positions[t - 1].begin(), h.positions[t - 1].end(),
              [](const AtomPosition& a, const AtomPosition& b) { return a.atom.front() < b.atom.front(); });
  }
  return h;
}

// ---------------------------------------------------------------------------
// Writing

inline json to_json(const Rational& r) { return to_string(r); }

inline json to_json(const Vec& v) {
  json j = json::array();
  for (const auto& x : v) j.push_back(to_string(x));
  return j;
}

inline json ids_json(const Market& m, const ScenarioSet& s) {
  json j = json::array();
  for (auto i : s) j.push_back(m.scenarios[i].id);
  return j;
}

inline std::string atom_key(const Market& m, const ScenarioSet& atom) {
  std::string key;
  for (auto i : atom) {
    if (!key.empty()) key += ",";
    key += m.scenarios[i].id;
  }
  return key;
}

inline json strategy_json(const Market& m, const Strategy& h) {
  json periods = json::object();
  for (std::size_t t = 1; t <= h.periods(); ++t) {
    json atoms = json::object();
    for (const auto& ap : h.positions[t - 1]) atoms[atom_key(m, ap.atom)] = to_json(ap.position);
    periods[std::to_string(t)] = std::move(atoms);
  }
  return json{{"positions", std::move(periods)}};
}

/// Positive weights only, keyed by scenario id in input order.
inline json measure_json(const Market& m, const DiscreteMeasure& q) {
  json j = json::object();
  for (std::size_t i = 0; i < q.weights.size(); ++i)
    if (q.weights[i] != 0) j[m.scenarios[i].id] = to_string(q.weights[i]);
  return j;
}

inline json partition_json(const Market& m, const Partition& p) {
  json j = json::array();
  for (const auto& a : p.atoms) j.push_back(ids_json(m, a));
  return j;
}

inline json splitting_json(const Market& m, const Splitting& s) {
  json blocks = json::array(), seps = json::array(), key = json::array();
  for (const auto& b : s.blocks) blocks.push_back(ids_json(m, b));
  for (const auto& h : s.separators) seps.push_back(to_json(h));
  for (const auto& row : history(m, s.level_set.front(), s.t - 1)) key.push_back(to_json(row));
  return json{{"t", s.t},
              {"level_set", ids_json(m, s.level_set)},
              {"key", std::move(key)},
              {"beta", s.beta()},
              {"blocks", std::move(blocks)},
              {"separators", std::move(seps)},
              {"residual", ids_json(m, s.residual)}};
}

inline json verdict_json(const Market& m, const SignificantClass& cls, FiltrationMode mode, const Verdict& v) {
  json j{{"class", cls.name},
         {"filtration", mode == FiltrationMode::Natural ? "natural" : "enlarged"},
         {"verdict", v.arbitrage() ? "Arbitrage" : "NoArbitrage"},
         {"note", v.note}};
  j["witness"] = v.witness ? strategy_json(m, *v.witness) : json(nullptr);
  if (v.witness) j["witness_terminal_value"] = to_json(wealth(m, *v.witness)[m.T]);
  j["cited_set"] = v.cited_set ? ids_json(m, *v.cited_set) : json(nullptr);
  j["certificate"] = v.certificate ? measure_json(m, *v.certificate) : json(nullptr);
  return j;
}

inline json ladder_json(const ArbitrageLadder& l) {
  return json{{"no_1p", l.no_1p},
              {"no_class_S", l.no_class},
              {"no_model_independent", l.no_model_independent},
              {"consistent", l.consistent()}};
}

inline json feasibility_json(const Market& m, const FeasibilityReport& r) {
  return json{{"feasible", r.feasible()},
              {"omega_star_is_all", r.omega_star_is_all},
              {"full_support_measure", r.full_support},
              {"no_open_arbitrage", r.no_open_arbitrage},
              {"no_one_step_1p", r.no_one_step},
              {"facets_agree", r.facets_agree()},
              {"martingale_measure_exists", r.measure.has_value()},
              {"ladder_class", r.ladder_class.name},
              {"ladder", ladder_json(r.ladder)},
              {"witness", r.measure ? measure_json(m, r.measure->measure) : json(nullptr)}};
}

/// Full analysis report; identical inputs give byte-identical output.
inline json analysis_report(const Market& m, const PolarAnalysis& pa, const Aggregator& agg,
                            const FeasibilityReport& feas) {
  json rep;
  rep["market"] = {{"d", m.d}, {"T", m.T}, {"scenarios", m.size()}};
  rep["omega_star"] = ids_json(m, pa.omega_star);
  rep["polar_complement"] = ids_json(m, pa.polar_complement(m.size()));
  rep["single_pass_omega_star"] = ids_json(m, pa.single_pass_omega_star);
  rep["rounds"] = pa.rounds;

  json sp = json::array();
  for (const auto& s : pa.splittings) sp.push_back(splitting_json(m, s));
  rep["splittings"] = std::move(sp);

  json elim = json::object();
  for (std::size_t t = 1; t <= m.T; ++t) {
    json sets = json::array();
    for (const auto& s : pa.eliminated[t - 1]) sets.push_back(ids_json(m, s));
    elim[std::to_string(t - 1)] = std::move(sets);
  }
  rep["eliminated_level_sets"] = std::move(elim);

  json removals = json::array();
  for (const auto& r : pa.removals)
    removals.push_back({{"round", r.round}, {"t", r.t}, {"block", ids_json(m, r.block)}, {"separator", to_json(r.separator)}});
  rep["removals"] = std::move(removals);

  rep["aggregator"] = strategy_json(m, agg.strategy);
  rep["aggregator_terminal_value"] = to_json(wealth(m, agg.strategy)[m.T]);
  json enlarged = json::array();
  for (const auto& p : agg.enlarged) enlarged.push_back(partition_json(m, p));
  rep["enlarged_filtration"] = std::move(enlarged);

  json measures = json::object();
  measures["full_support"] = feas.measure ? measure_json(m, feas.measure->measure) : json(nullptr);
  measures["full"] = feas.full_support;
  rep["measures"] = std::move(measures);

  json verdicts = json::object();
  for (const auto& [name, cls] : m.classes)
    verdicts[name] = verdict_json(m, cls, FiltrationMode::Enlarged, classify(m, pa, cls, FiltrationMode::Enlarged));
  rep["verdicts"] = std::move(verdicts);
  rep["feasibility"] = feasibility_json(m, feas);
  return rep;
}

}  // namespace mfarb
