#pragma once

// Shared test helpers: fixture loading, id-based set construction and a
// seeded generator of random lattice markets.

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <random>
#include <string>
#include <vector>

#include "mfarb/io.hpp"
#include "mfarb/mfarb.hpp"

#ifndef MFARB_FIXTURES
#error "MFARB_FIXTURES must point at tests/fixtures"
#endif

namespace mfarb::testing {

inline std::string fixture_path(const std::string& name) { return std::string(MFARB_FIXTURES) + "/" + name; }

inline Market fixture(const std::string& name) { return load_market_file(fixture_path(name)); }

inline ScenarioSet ids(const Market& m, std::initializer_list<const char*> names) {
  ScenarioSet s;
  for (const char* n : names) s.push_back(*m.index_of(n));
  std::sort(s.begin(), s.end());
  return s;
}

inline Rational q(long num, long den = 1) { return make_rational(num, den); }

inline Vec vec(std::initializer_list<Rational> xs) { return Vec(xs); }

/// Random markets grown as scenario trees: each node branches into 1-3
/// children whose prices move by a lattice step in [-3, 3] per asset,
/// clamped to [0, 20]. Leaves are the scenarios (at most max_scenarios);
/// distinct leaves may share a full path.
class MarketGenerator {
 public:
  explicit MarketGenerator(unsigned seed) : rng_(seed) {}

  Market next(std::size_t max_scenarios = 10, std::size_t max_T = 3, std::size_t max_d = 3) {
    Market m;
    m.T = uniform(1, max_T);
    m.d = uniform(1, max_d);
    Vec s0(m.d);
    for (auto& x : s0) x = static_cast<long>(uniform(5, 15));
    std::vector<std::vector<Vec>> paths{{s0}};
    for (std::size_t t = 1; t <= m.T; ++t) {
      std::vector<std::vector<Vec>> grown;
      for (std::size_t p = 0; p < paths.size(); ++p) {
        const std::size_t remaining_parents = paths.size() - p - 1;
        const std::size_t budget = max_scenarios - grown.size() - remaining_parents;
        const std::size_t kids = std::min<std::size_t>(uniform(1, 3), budget);
        // Lone children mostly stay flat; siblings sometimes mirror the
        // first move so that balanced nodes are common.
        const bool mirror = kids >= 2 && uniform(0, 1) == 0;
        std::vector<long> first(m.d, 0);
        for (std::size_t k = 0; k < kids; ++k) {
          auto path = paths[p];
          Vec price(m.d);
          const bool flat = kids == 1 ? uniform(0, 2) != 0 : uniform(0, 5) == 0;
          for (std::size_t a = 0; a < m.d; ++a) {
            long step = flat ? 0 : static_cast<long>(uniform(0, 6)) - 3;
            if (k == 0) first[a] = step;
            if (mirror && k == kids - 1) step = -first[a];
            price[a] = std::clamp(path.back()[a].get_num().get_si() + step, 0L, 20L);
          }
          path.push_back(std::move(price));
          grown.push_back(std::move(path));
        }
      }
      paths = std::move(grown);
    }
    for (std::size_t i = 0; i < paths.size(); ++i) m.scenarios.push_back({"s" + std::to_string(i), paths[i]});
    return m;
  }

  ScenarioSet random_subset(std::size_t n) {
    ScenarioSet s;
    while (s.empty())
      for (std::size_t i = 0; i < n; ++i)
        if (uniform(0, 2) == 0) s.push_back(i);
    return s;
  }

  SignificantClass random_class(std::size_t n, const std::string& name) {
    SignificantClass c{name, {}};
    const std::size_t k = uniform(1, 3);
    for (std::size_t i = 0; i < k; ++i) c.sets.push_back(random_subset(n));
    return c;
  }

  DiscreteMeasure random_measure(std::size_t n) {
    const ScenarioSet supp = random_subset(n);
    DiscreteMeasure p{Vec(n, Rational(0))};
    Rational total = 0;
    for (auto i : supp) {
      p.weights[i] = static_cast<long>(uniform(1, 9));
      total += p.weights[i];
    }
    for (auto& w : p.weights) w /= total;
    return p;
  }

  std::size_t uniform(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }

 private:
  std::mt19937 rng_;
};

}  // namespace mfarb::testing
