// Acceptance suite: fixture regressions plus property checks over a seeded
// corpus of random markets. One PASS/FAIL line per criterion; exit status
// is nonzero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"

using namespace mfarb;
using mfarb::testing::fixture;
using mfarb::testing::ids;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Collects failure messages for one criterion.
struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

int failed = 0;

void report(int n, const std::string& title, const Check& c, const std::string& detail) {
  const bool ok = c.failures.empty();
  if (!ok) ++failed;
  std::printf("[%s] AC%d %s: %s\n", ok ? "PASS" : "FAIL", n, title.c_str(), detail.c_str());
  for (std::size_t i = 0; i < c.failures.size() && i < 10; ++i) std::printf("       - %s\n", c.failures[i].c_str());
  if (c.failures.size() > 10) std::printf("       - ... %zu more\n", c.failures.size() - 10);
  std::fflush(stdout);
}

std::string fmt_time(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f s", s);
  return buf;
}

bool nonnegative(const Vec& v) {
  for (const auto& x : v)
    if (x < 0) return false;
  return true;
}

Vec indicator(std::size_t n, const ScenarioSet& s, long value) {
  Vec v(n, Rational(0));
  for (auto i : s) v[i] = value;
  return v;
}

// Point i of pts can be made strict iff {H : H.x >= 0 on pts, H.x_i >= 1} is nonempty.
bool strict_possible(const std::vector<Vec>& pts, std::size_t i) {
  LinearProgram lp;
  lp.objective.assign(pts.front().size(), Rational(0));
  for (std::size_t j = 0; j < pts.size(); ++j) lp.add(pts[j], Relation::GreaterEq, j == i ? 1 : 0);
  return lp_solve(lp).optimal();
}

bool trades_in(const Strategy& h, std::size_t t, std::size_t n) {
  for (std::size_t omega = 0; omega < n; ++omega)
    if (!is_zero(h.at(t, omega))) return true;
  return false;
}

// ---------------------------------------------------------------------------

void ac1() {
  const auto start = Clock::now();
  Check c;
  const Market m = fixture("svu.json");
  const PolarAnalysis pa = backward_eliminate(m);
  c.expect(pa.omega_star.empty(), "omega_star is not empty");
  c.expect(lp_solve(build_polytope(m).lp).status == LpStatus::Infeasible, "martingale polytope is feasible");
  c.expect(!feasibility(m, pa).feasible(), "feasibility reported true");
  const Verdict v = classify(m, pa, resolve_class(m, "MI"), FiltrationMode::Enlarged);
  c.expect(v.arbitrage() && v.witness.has_value(), "MI verdict is not Arbitrage with a witness");
  if (v.witness) {
    const Vec terminal = wealth(m, *v.witness)[m.T];
    c.expect(nonnegative(terminal), "witness V_2 has a negative entry");
    c.expect(positive_set(terminal) == m.all(), "witness V+ is not all of Omega");
  }
  const double s = seconds_since(start);
  c.expect(s < 1.0, "took " + fmt_time(s));
  report(1, "SVU", c, "omega_star empty, M infeasible, MI arbitrage with V+ = Omega (" + fmt_time(s) + ")");
}

void ac2() {
  const auto start = Clock::now();
  Check c;
  const Market m = fixture("multi.json");
  const Filtration f = natural_filtration(m);
  const Strategy h = strategy_from_json(m, read_json_file(mfarb::testing::fixture_path("multi_H.json")));
  const Vec expected = indicator(m.size(), ids(m, {"A1"}), 4) + indicator(m.size(), ids(m, {"A2"}), 2);
  c.expect(value_process(m, f, h)[m.T] == expected, "V_2 differs from 4*1_A1 + 2*1_A2");
  const Defragmentation dfg = defragment(m, h);
  c.expect(dfg.pieces.size() == 2 && dfg.pieces[0] == ids(m, {"A1"}) && dfg.pieces[1] == ids(m, {"A2"}),
           "defragment pieces are not U1 = {A1}, U2 = {A2}");
  const PolarAnalysis pa = backward_eliminate(m);
  const SignificantClass& cls = m.classes.at("openish");
  const Verdict v = classify(m, pa, cls, FiltrationMode::Natural);
  c.expect(v.arbitrage() && v.witness.has_value(), "natural verdict is not Arbitrage");
  if (v.witness) {
    const Vec terminal = wealth(m, *v.witness)[m.T];
    c.expect(nonnegative(terminal) && is_subset(cls.sets[0], positive_set(terminal)), "witness does not gain on {A1,A2}");
    c.expect(trades_in(*v.witness, 1, m.size()) && trades_in(*v.witness, 2, m.size()),
             "witness does not trade in both periods");
    c.expect(check_predictable(*v.witness, f), "witness is not F-predictable");
  }
  for (std::size_t t : {1u, 2u})
    c.expect(!oracle_arbitrage(m, f, cls.sets[0], OracleOptions{t}).has_value(),
             "single-period oracle succeeded at t=" + std::to_string(t));
  const double s = seconds_since(start);
  c.expect(s < 1.0, "took " + fmt_time(s));
  report(2, "MULTI", c, "payoffs, defragmentation and two-period-only arbitrage (" + fmt_time(s) + ")");
}

void ac3() {
  const auto start = Clock::now();
  Check c;
  const Market m = fixture("ex3d.json");
  const PolarAnalysis pa = backward_eliminate(m);
  c.expect(pa.polar_complement(m.size()) == ids(m, {"I1", "I2", "Rlo1", "Rlo2"}), "polar set is not I u R<");
  const Splitting s = split_level_set(m, 1, m.all());
  c.expect(s.residual == ids(m, {"Rhi1", "Rhi2"}), "B* is not R>=");
  const auto pts = increments(m, 1, m.all());
  for (std::size_t i = 0; i < m.size(); ++i)
    c.expect(strict_possible(pts, i) == contains(s.blocks_union(), i),
             "per-point oracle disagrees on " + m.scenarios[i].id);
  const double secs = seconds_since(start);
  c.expect(secs < 1.0, "took " + fmt_time(secs));
  report(3, "EX3D", c, "polar set I u R<, B* = R>=, beta = " + std::to_string(s.beta()) + " (" + fmt_time(secs) + ")");
}

void ac4() {
  const auto start = Clock::now();
  Check c;
  const Market e = fixture("ex1000.json");
  c.expect(backward_eliminate(e).omega_star.empty(), "EX1000 omega_star is not empty");
  const Market m = fixture("countna.json");
  const PolarAnalysis pa = backward_eliminate(m);
  c.expect(pa.omega_star == ids(m, {"Q1", "Q2"}), "CountNA omega_star is not the zero-increment class");
  c.expect(!one_step_1p_check(m).empty(), "no 1p-arbitrage reported");
  c.expect(full_support_measure(m, pa).has_value(), "M is empty");
  const Filtration f = natural_filtration(m);
  for (auto omega : pa.omega_star) {
    const DiscreteMeasure q = supporting_measure(m, pa, omega);
    c.expect(q.weights[omega] > 0 && check_martingale(m, q, f),
             "supporting measure fails for " + m.scenarios[omega].id);
  }
  const double s = seconds_since(start);
  c.expect(s < 1.0, "took " + fmt_time(s));
  report(4, "EX1000 and CountNA", c, "supports and supporting measures (" + fmt_time(s) + ")");
}

// ---------------------------------------------------------------------------
// Random corpus

struct CorpusEntry {
  Market m;
  PolarAnalysis pa;
  Aggregator agg;
  Filtration natural;
  std::vector<SignificantClass> classes;
  std::vector<DiscreteMeasure> probabilities;
};

constexpr std::size_t kCorpus = 500;
constexpr std::size_t kClasses = 5;
constexpr std::size_t kMeasures = 3;

std::vector<CorpusEntry> corpus;

void ac5() {
  Check c;
  mfarb::testing::MarketGenerator gen(20241016);
  const auto start = Clock::now();
  std::size_t empty = 0, full = 0, divergent_single_pass = 0;
  for (std::size_t i = 0; i < kCorpus; ++i) {
    CorpusEntry e;
    e.m = gen.next();
    e.pa = backward_eliminate(e.m);
    const ScenarioSet truth = oracle_support(e.m);
    if (e.pa.omega_star != truth) {
      std::ostringstream os;
      os << "market " << i << ": elimination " << e.pa.omega_star.size() << " vs oracle " << truth.size();
      c.failures.push_back(os.str());
    }
    if (e.pa.single_pass_omega_star != e.pa.omega_star) ++divergent_single_pass;
    empty += e.pa.omega_star.empty();
    full += e.pa.omega_star.size() == e.m.size();
    e.agg = universal_aggregator(e.m, e.pa);
    e.natural = natural_filtration(e.m);
    for (std::size_t k = 0; k < kClasses; ++k) e.classes.push_back(gen.random_class(e.m.size(), "S" + std::to_string(k)));
    for (std::size_t k = 0; k < kMeasures; ++k) e.probabilities.push_back(gen.random_measure(e.m.size()));
    corpus.push_back(std::move(e));
  }
  const double s = seconds_since(start);
  c.expect(s <= 60.0, "took " + fmt_time(s));
  std::ostringstream os;
  os << kCorpus << " markets, " << empty << " with M empty, " << full << " feasible, " << kCorpus - empty - full
     << " partial; single backward pass differs on " << divergent_single_pass << " (" << fmt_time(s) << ")";
  report(5, "oracle master equivalence", c, os.str());
}

void ac6() {
  Check c;
  const auto start = Clock::now();
  std::size_t arbitrage = 0, total = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& e = corpus[i];
    for (const auto& cls : e.classes) {
      ++total;
      const Verdict v = classify(e.m, e.pa, cls, FiltrationMode::Enlarged);
      bool oracle = false;
      for (const auto& set : cls.sets)
        if (oracle_arbitrage(e.m, e.agg.enlarged, set)) oracle = true;
      const std::string where = "market " + std::to_string(i) + " class " + cls.name;
      c.expect(v.arbitrage() == oracle, where + ": classify and oracle disagree");
      if (v.arbitrage()) {
        ++arbitrage;
        const Vec terminal = wealth(e.m, *v.witness)[e.m.T];
        c.expect(nonnegative(terminal) && is_subset(*v.cited_set, positive_set(terminal)),
                 where + ": witness does not gain on the cited set");
        c.expect(check_predictable(*v.witness, e.agg.enlarged), where + ": witness not F~-predictable");
      } else {
        const auto q = class_measure(e.m, e.pa, cls);
        c.expect(q.has_value(), where + ": no class measure");
        if (q)
          for (const auto& set : cls.sets) c.expect(q->mass(set) > 0, where + ": Q(C) = 0");
      }
    }
  }
  std::ostringstream os;
  os << total << " classes, " << arbitrage << " Arbitrage, " << total - arbitrage << " NoArbitrage ("
     << fmt_time(seconds_since(start)) << ")";
  report(6, "class-S FTAP", c, os.str());
}

void ac7() {
  Check c;
  std::size_t not_natural = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& e = corpus[i];
    const std::string where = "market " + std::to_string(i);
    const Vec terminal = wealth(e.m, e.agg.strategy)[e.m.T];
    c.expect(nonnegative(terminal), where + ": V_T(H*) has a negative entry");
    c.expect(positive_set(terminal) == e.pa.polar_complement(e.m.size()), where + ": {V_T > 0} is not the polar set");
    c.expect(check_predictable(e.agg.strategy, e.agg.enlarged), where + ": H* not F~-predictable");

    // Some F_{t-1} atom carries two different removal separators at t.
    bool split = false;
    for (std::size_t t = 1; t <= e.m.T; ++t) {
      std::vector<Vec> pos(e.m.size(), zero_vec(e.m.d));
      for (const auto& r : e.pa.removals)
        if (r.t == t)
          for (auto omega : r.block) pos[omega] = r.separator;
      for (const auto& atom : e.natural[t - 1].atoms)
        for (auto omega : atom)
          if (pos[omega] != pos[atom.front()]) split = true;
    }
    not_natural += split;
    c.expect(check_predictable(e.agg.strategy, e.natural) == !split,
             where + ": F-predictability does not match the split structure");
  }
  report(7, "aggregator contract", c,
         std::to_string(corpus.size()) + " markets, H* not F-predictable on " + std::to_string(not_natural));
}

void ac8() {
  Check c;
  std::size_t checked = 0;
  mfarb::testing::MarketGenerator gen(8);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& e = corpus[i];
    const std::string where = "market " + std::to_string(i);
    auto verify = [&](const DiscreteMeasure& q, const std::string& what) {
      ++checked;
      c.expect(check_martingale(e.m, q, e.natural), where + ": " + what + " fails against F");
      c.expect(check_martingale(e.m, q, e.agg.enlarged), where + ": " + what + " fails against F~");
    };
    std::vector<DiscreteMeasure> supporting;
    for (auto omega : e.pa.omega_star) {
      supporting.push_back(supporting_measure(e.m, e.pa, omega));
      verify(supporting.back(), "supporting measure");
    }
    if (supporting.size() >= 2) {
      const long a = static_cast<long>(gen.uniform(1, 9));
      verify(mix({supporting.front(), supporting.back()}, {make_rational(a, 10), make_rational(10 - a, 10)}), "mix");
    }
    if (auto fs = full_support_measure(e.m, e.pa)) {
      verify(fs->measure, "full-support measure");
      c.expect(fs->measure.support() == e.pa.omega_star, where + ": full-support measure has the wrong support");
    }
    for (const auto& cls : e.classes)
      if (auto q = class_measure(e.m, e.pa, cls)) verify(*q, "class measure " + cls.name);
  }
  report(8, "measure exactness", c, std::to_string(checked) + " measures checked against F and F~");
}

void ac9() {
  Check c;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& e = corpus[i];
    const std::string where = "market " + std::to_string(i);
    const FeasibilityReport r = feasibility(e.m, e.pa);
    c.expect(r.facets_agree(), where + ": feasibility facets disagree");
    c.expect(r.ladder.consistent(), where + ": ladder inverts for the declared class");
    for (const auto& cls : e.classes)
      c.expect(arbitrage_ladder(e.m, e.pa, cls).consistent(), where + ": ladder inverts for " + cls.name);
  }
  report(9, "feasibility ladder", c,
         std::to_string(corpus.size()) + " markets, " + std::to_string(corpus.size() * (kClasses + 1)) + " ladders");
}

void ac10() {
  Check c;
  std::size_t found = 0, total = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& e = corpus[i];
    const ScenarioSet polar = e.pa.polar_complement(e.m.size());
    for (std::size_t k = 0; k < e.probabilities.size(); ++k) {
      ++total;
      const DiscreteMeasure& p = e.probabilities[k];
      const std::string where = "market " + std::to_string(i) + " measure " + std::to_string(k);
      const auto arb = extract_p_arbitrage(e.m, e.pa, p);
      c.expect(arb.has_value() == (p.mass(polar) > 0), where + ": extraction does not match P(polar set) > 0");
      if (arb) {
        ++found;
        const Vec terminal = wealth(e.m, arb->strategy)[e.m.T];
        for (auto omega : p.support()) c.expect(terminal[omega] >= 0, where + ": loss on supp(P)");
        Rational gain = 0;
        for (auto omega : p.support())
          if (terminal[omega] > 0) gain += p.weights[omega];
        c.expect(gain > 0 && gain == arb->gain_mass, where + ": P(V_T > 0) is not positive");
        c.expect(check_predictable(arb->strategy, e.natural), where + ": strategy not F-predictable");
      }
      const Decomposition d = lebesgue_decompose(e.m, e.pa, p);
      c.expect(d.continuous + d.singular == p.weights, where + ": parts do not recompose to P");
      c.expect(DiscreteMeasure{d.singular}.mass(e.pa.omega_star) == 0, where + ": singular part charges Omega*");
      c.expect(DiscreteMeasure{d.continuous}.mass(polar) == 0, where + ": continuous part charges the polar set");
    }
  }
  report(10, "extraction and decomposition", c,
         std::to_string(total) + " measures, " + std::to_string(found) + " P-classical arbitrages verified");
}

}  // namespace

int main() {
  const auto start = Clock::now();
  const std::vector<std::function<void()>> criteria{ac1, ac2, ac3, ac4, ac5, ac6, ac7, ac8, ac9, ac10};
  for (const auto& run : criteria) {
    try {
      run();
    } catch (const std::exception& ex) {
      ++failed;
      std::printf("[FAIL] criterion aborted: %s\n", ex.what());
    }
  }
  std::printf("%d of %zu criteria failed; total %s\n", failed, criteria.size(), fmt_time(seconds_since(start)).c_str());
  return failed == 0 ? 0 : 1;
}
