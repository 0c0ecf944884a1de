// mfarb: command-line front end.
//
// Exit codes: 0 success / no arbitrage, 1 arbitrage found or domain error,
// 2 invalid input, 3 oracle disagreement under --verify.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mfarb/io.hpp"
#include "mfarb/mfarb.hpp"

namespace {

using namespace mfarb;

struct Globals {
  std::string out;
  bool verify = false;
  bool summary = false;
};

void emit(const Globals& g, const json& j) {
  const std::string text = j.dump(2) + "\n";
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out);
  if (!f) throw ValidationError("cannot write '" + g.out + "'");
  f << text;
}

Market load(const std::string& path) {
  std::vector<std::string> warnings;
  Market m = load_market_file(path, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  return m;
}

int cmd_analyze(const Globals& g, const std::string& path) {
  const Market m = load(path);
  const PolarAnalysis pa = backward_eliminate(m);
  const Aggregator agg = universal_aggregator(m, pa);
  const FeasibilityReport feas = feasibility(m, pa);
  json rep = analysis_report(m, pa, agg, feas);
  bool agree = true;
  if (g.verify) {
    const ScenarioSet support = oracle_support(m);
    agree = support == pa.omega_star;
    rep["oracle"] = {{"support", ids_json(m, support)}, {"agrees", agree}};
  }
  emit(g, rep);
  if (g.summary) {
    std::cerr << "scenarios: " << m.size() << ", Omega*: " << pa.omega_star.size()
              << ", polar: " << m.size() - pa.omega_star.size() << ", sweeps: " << pa.rounds
              << "\nfeasible: " << (feas.feasible() ? "yes" : "no")
              << ", martingale measure: " << (feas.measure ? "yes" : "no") << "\n";
    if (g.verify) std::cerr << "oracle agreement: " << (agree ? "yes" : "NO") << "\n";
  }
  if (!agree) {
    std::cerr << "error: elimination and oracle supports differ\n";
    return 3;
  }
  return 0;
}

int cmd_check(const Globals& g, const std::string& path, const std::string& cls_name, const std::string& filt) {
  const Market m = load(path);
  const SignificantClass cls = resolve_class(m, cls_name);
  const FiltrationMode mode = filt == "natural" ? FiltrationMode::Natural : FiltrationMode::Enlarged;
  const PolarAnalysis pa = backward_eliminate(m);
  const Verdict v = classify(m, pa, cls, mode);
  emit(g, verdict_json(m, cls, mode, v));
  if (g.summary) std::cerr << cls.name << " (" << filt << "): " << (v.arbitrage() ? "Arbitrage" : "NoArbitrage") << "\n";
  return v.arbitrage() ? 1 : 0;
}

int cmd_extract(const Globals& g, const std::string& path, const std::string& prob) {
  const Market m = load(path);
  auto it = m.probabilities.find(prob);
  if (it == m.probabilities.end()) throw LookupError("unknown probability '" + prob + "'");
  const PolarAnalysis pa = backward_eliminate(m);
  const Decomposition dec = lebesgue_decompose(m, pa, it->second);
  const auto arb = extract_p_arbitrage(m, pa, it->second);
  json j{{"probability", prob},
         {"decomposition",
          {{"carrier", ids_json(m, dec.carrier)},
           {"continuous", measure_json(m, DiscreteMeasure{dec.continuous})},
           {"singular", measure_json(m, DiscreteMeasure{dec.singular})}}}};
  if (arb) {
    j["p_arbitrage"] = {{"tau", arb->tau},
                        {"strategy", strategy_json(m, arb->strategy)},
                        {"terminal_value", to_json(wealth(m, arb->strategy)[m.T])},
                        {"gain_set", ids_json(m, arb->gain_set)},
                        {"gain_mass", to_string(arb->gain_mass)}};
  } else {
    j["p_arbitrage"] = nullptr;
  }
  emit(g, j);
  if (g.summary) std::cerr << prob << ": " << (arb ? "P-classical arbitrage found" : "P charges no polar set") << "\n";
  return 0;
}

int cmd_measure(const Globals& g, const std::string& path, const std::string& id) {
  const Market m = load(path);
  const auto idx = m.index_of(id);
  if (!idx) throw LookupError("unknown scenario '" + id + "'");
  const PolarAnalysis pa = backward_eliminate(m);
  const DiscreteMeasure q = supporting_measure(m, pa, *idx);
  emit(g, json{{"support", id}, {"measure", measure_json(m, q)}});
  return 0;
}

int cmd_defrag(const Globals& g, const std::string& path, const std::string& strategy_path) {
  const Market m = load(path);
  const Strategy h = strategy_from_json(m, read_json_file(strategy_path));
  const Defragmentation dfg = defragment(m, h);
  json pieces = json::object();
  for (std::size_t t = 1; t <= m.T; ++t) pieces[std::to_string(t)] = ids_json(m, dfg.pieces[t - 1]);
  const auto v = wealth(m, h);
  json values = json::array();
  for (const auto& row : v) values.push_back(to_json(row));
  emit(g, json{{"pieces", std::move(pieces)},
               {"masked", strategy_json(m, dfg.masked)},
               {"value_process", std::move(values)},
               {"masked_terminal_value", to_json(wealth(m, dfg.masked)[m.T])}});
  return 0;
}

int cmd_oracle(const Globals& g, const std::string& path) {
  const Market m = load(path);
  const PolarAnalysis pa = backward_eliminate(m);
  const ScenarioSet support = oracle_support(m);
  const Filtration natural = natural_filtration(m);
  const Filtration enlarged = universal_aggregator(m, pa).enlarged;
  json classes = json::object();
  for (const auto& [name, cls] : m.classes) {
    json sets = json::array();
    for (const auto& c : cls.sets) {
      const auto hn = oracle_arbitrage(m, natural, c);
      const auto he = oracle_arbitrage(m, enlarged, c);
      sets.push_back({{"set", ids_json(m, c)},
                      {"natural", hn ? strategy_json(m, *hn) : json(nullptr)},
                      {"enlarged", he ? strategy_json(m, *he) : json(nullptr)}});
    }
    classes[name] = std::move(sets);
  }
  emit(g, json{{"support", ids_json(m, support)},
               {"agrees_with_elimination", support == pa.omega_star},
               {"classes", std::move(classes)}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact analysis of arbitrage and martingale measures on finite scenario markets"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--out", g.out, "Write JSON to FILE instead of stdout");
  app.add_flag("--verify", g.verify, "Cross-check against the LP oracle (analyze)");
  app.add_flag("--summary", g.summary, "Human-readable summary on stderr");

  std::string path, cls_name, filt = "enlarged", prob, id, strategy_path;
  auto* analyze = app.add_subcommand("analyze", "Polar set, aggregator, measures and feasibility");
  analyze->add_option("market", path)->required();
  auto* check = app.add_subcommand("check", "Arbitrage verdict for a class of significant sets");
  check->add_option("market", path)->required();
  check->add_option("--class", cls_name, "Declared class, or built-in MI / 1p")->required();
  check->add_option("--filtration", filt)->check(CLI::IsMember({"natural", "enlarged"}));
  auto* extract = app.add_subcommand("extract", "P-classical arbitrage for a declared probability");
  extract->add_option("market", path)->required();
  extract->add_option("--prob", prob)->required();
  auto* measure = app.add_subcommand("measure", "Martingale measure charging one scenario");
  measure->add_option("market", path)->required();
  measure->add_option("--support", id)->required();
  auto* defrag = app.add_subcommand("defrag", "Defragment a strategy into per-period gains");
  defrag->add_option("market", path)->required();
  defrag->add_option("--strategy", strategy_path)->required();
  auto* oracle = app.add_subcommand("oracle", "LP oracle support and per-class strategy search");
  oracle->add_option("market", path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(g, path);
    if (check->parsed()) return cmd_check(g, path, cls_name, filt);
    if (extract->parsed()) return cmd_extract(g, path, prob);
    if (measure->parsed()) return cmd_measure(g, path, id);
    if (defrag->parsed()) return cmd_defrag(g, path, strategy_path);
    if (oracle->parsed()) return cmd_oracle(g, path);
  } catch (const mfarb::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const mfarb::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
