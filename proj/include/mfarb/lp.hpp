#pragma once

// Dense two-phase primal simplex over exact rationals.
//
// Pivoting follows Bland's rule throughout: the entering column is the
// lowest-index column with negative reduced cost, ties in the ratio test
// go to the basic variable with the lowest index. Runs are therefore
// finite and bit-for-bit reproducible.

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "mfarb/errors.hpp"
#include "mfarb/rational.hpp"

namespace mfarb {

enum class Relation { LessEq, Equal, GreaterEq };
enum class Sense { Maximize, Minimize };
enum class LpStatus { Optimal, Infeasible, Unbounded };

struct Constraint {
  Vec coeffs;
  Relation rel = Relation::LessEq;
  Rational rhs = 0;
};

/// Absent bounds mean the variable is unbounded in that direction.
struct Bound {
  std::optional<Rational> lower;
  std::optional<Rational> upper;
};

struct LinearProgram {
  Sense sense = Sense::Maximize;
  Vec objective;
  std::vector<Constraint> constraints;
  std::vector<Bound> bounds;  // empty, or one per variable

  std::size_t num_vars() const { return objective.size(); }

  void add(Vec coeffs, Relation rel, Rational rhs) {
    constraints.push_back({std::move(coeffs), rel, std::move(rhs)});
  }
};

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::optional<Vec> solution;
  std::optional<Rational> objective_value;
  /// Farkas multipliers over the rows of standardize(lp) when Infeasible:
  /// y^T A <= 0 componentwise and y^T b > 0.
  Vec farkas;

  bool optimal() const { return status == LpStatus::Optimal; }
  friend bool operator==(const LpResult&, const LpResult&) = default;
};

/// Equality form A y = b, y >= 0, b >= 0 of a LinearProgram, together
/// with the affine map back to the original variables.
struct StandardForm {
  std::vector<Vec> rows;
  Vec rhs;
  Vec cost;  // minimized
  Rational cost_offset = 0;
  // x_j = offset[j] + sum_k terms[j][k].second * y[terms[j][k].first]
  Vec offset;
  std::vector<std::vector<std::pair<std::size_t, Rational>>> terms;

  std::size_t num_cols() const { return cost.size(); }

  Vec recover(const Vec& y) const {
    Vec x = offset;
    for (std::size_t j = 0; j < x.size(); ++j)
      for (const auto& [k, c] : terms[j]) x[j] += c * y[k];
    return x;
  }
};

inline void validate(const LinearProgram& lp) {
  const std::size_t n = lp.num_vars();
  for (std::size_t i = 0; i < lp.constraints.size(); ++i)
    if (lp.constraints[i].coeffs.size() != n)
      throw StructuralError("lp: constraint " + std::to_string(i) + " has arity " +
                            std::to_string(lp.constraints[i].coeffs.size()) + ", expected " +
                            std::to_string(n));
  if (!lp.bounds.empty() && lp.bounds.size() != n)
    throw StructuralError("lp: bounds list has " + std::to_string(lp.bounds.size()) +
                          " entries for " + std::to_string(n) + " variables");
}

inline StandardForm standardize(const LinearProgram& lp) {
  validate(lp);
  const std::size_t n = lp.num_vars();
  StandardForm sf;
  sf.offset.assign(n, Rational(0));
  sf.terms.resize(n);

  std::size_t cols = 0;
  std::vector<std::pair<std::size_t, Rational>> upper_rows;  // (column, bound) for y <= u - l
  for (std::size_t j = 0; j < n; ++j) {
    const Bound b = lp.bounds.empty() ? Bound{} : lp.bounds[j];
    if (b.lower) {
      sf.offset[j] = *b.lower;
      sf.terms[j].push_back({cols, Rational(1)});
      if (b.upper) upper_rows.push_back({cols, *b.upper - *b.lower});
      ++cols;
    } else if (b.upper) {
      sf.offset[j] = *b.upper;
      sf.terms[j].push_back({cols++, Rational(-1)});
    } else {
      sf.terms[j].push_back({cols++, Rational(1)});
      sf.terms[j].push_back({cols++, Rational(-1)});
    }
  }
  const std::size_t structural = cols;
  std::size_t slack_count = upper_rows.size();
  for (const auto& c : lp.constraints)
    if (c.rel != Relation::Equal) ++slack_count;
  const std::size_t total = structural + slack_count;

  std::size_t next_slack = structural;
  auto push_row = [&](Vec row, Rational rhs) {
    if (rhs < 0) {
      for (auto& v : row) v = -v;
      rhs = -rhs;
    }
    sf.rows.push_back(std::move(row));
    sf.rhs.push_back(std::move(rhs));
  };

  for (const auto& c : lp.constraints) {
    Vec row(total, Rational(0));
    Rational rhs = c.rhs;
    for (std::size_t j = 0; j < n; ++j) {
      if (c.coeffs[j] == 0) continue;
      rhs -= c.coeffs[j] * sf.offset[j];
      for (const auto& [k, coef] : sf.terms[j]) row[k] += c.coeffs[j] * coef;
    }
    if (c.rel == Relation::LessEq) row[next_slack++] = 1;
    if (c.rel == Relation::GreaterEq) row[next_slack++] = -1;
    push_row(std::move(row), std::move(rhs));
  }
  for (const auto& [k, ub] : upper_rows) {
    Vec row(total, Rational(0));
    row[k] = 1;
    row[next_slack++] = 1;
    push_row(std::move(row), ub);
  }

  sf.cost.assign(total, Rational(0));
  const Rational sign = lp.sense == Sense::Maximize ? -1 : 1;
  for (std::size_t j = 0; j < n; ++j) {
    if (lp.objective[j] == 0) continue;
    sf.cost_offset += sign * lp.objective[j] * sf.offset[j];
    for (const auto& [k, coef] : sf.terms[j]) sf.cost[k] += sign * lp.objective[j] * coef;
  }
  return sf;
}

namespace detail {

class Tableau {
 public:
  // Columns: [0, ncols) structural, [ncols, ncols + m) artificial, then rhs.
  explicit Tableau(const StandardForm& sf)
      : m_(sf.rows.size()), ncols_(sf.num_cols()), width_(ncols_ + m_ + 1) {
    t_.assign(m_, Vec(width_, Rational(0)));
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < ncols_; ++j) t_[i][j] = sf.rows[i][j];
      t_[i][ncols_ + i] = 1;
      t_[i][width_ - 1] = sf.rhs[i];
      basis_[i] = ncols_ + i;
    }
    alive_.assign(m_, true);
  }

  // Phase 1 minimizes the sum of artificials. Returns that minimum.
  Rational phase_one() {
    Vec cost(width_ - 1, Rational(0));
    for (std::size_t i = 0; i < m_; ++i) cost[ncols_ + i] = 1;
    load_cost(cost);
    run(width_ - 1);
    return -obj_[width_ - 1];
  }

  // Dual multipliers of the phase-1 optimum; valid right after phase_one().
  Vec phase_one_duals() const {
    Vec y(m_);
    for (std::size_t i = 0; i < m_; ++i) y[i] = 1 - obj_[ncols_ + i];
    return y;
  }

  void drive_out_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (!alive_[i] || basis_[i] < ncols_) continue;
      std::optional<std::size_t> col;
      for (std::size_t j = 0; j < ncols_; ++j)
        if (t_[i][j] != 0) {
          col = j;
          break;
        }
      if (col)
        pivot(i, *col);
      else
        alive_[i] = false;  // redundant row
    }
  }

  // Returns false when unbounded.
  bool phase_two(const Vec& cost) {
    Vec full(width_ - 1, Rational(0));
    for (std::size_t j = 0; j < ncols_; ++j) full[j] = cost[j];
    load_cost(full);
    return run(ncols_);
  }

  Vec primal() const {
    Vec y(ncols_, Rational(0));
    for (std::size_t i = 0; i < m_; ++i)
      if (alive_[i] && basis_[i] < ncols_) y[basis_[i]] = t_[i][width_ - 1];
    return y;
  }

 private:
  void load_cost(const Vec& cost) {
    obj_.assign(width_, Rational(0));
    for (std::size_t j = 0; j + 1 < width_; ++j) obj_[j] = cost[j];
    for (std::size_t i = 0; i < m_; ++i) {
      if (!alive_[i]) continue;
      const Rational cb = cost[basis_[i]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j < width_; ++j)
        if (t_[i][j] != 0) obj_[j] -= cb * t_[i][j];
    }
  }

  // Columns >= limit never enter. Returns false on an unbounded ray.
  bool run(std::size_t limit) {
    for (;;) {
      std::optional<std::size_t> enter;
      for (std::size_t j = 0; j < limit; ++j)
        if (obj_[j] < 0) {
          enter = j;
          break;
        }
      if (!enter) return true;

      std::optional<std::size_t> leave;
      Rational best;
      for (std::size_t i = 0; i < m_; ++i) {
        if (!alive_[i] || t_[i][*enter] <= 0) continue;
        Rational ratio = t_[i][width_ - 1] / t_[i][*enter];
        if (!leave || ratio < best || (ratio == best && basis_[i] < basis_[*leave])) {
          leave = i;
          best = std::move(ratio);
        }
      }
      if (!leave) return false;
      pivot(*leave, *enter);
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    const Rational inv = 1 / t_[r][c];
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j < width_; ++j)
      if (t_[r][j] != 0) {
        t_[r][j] *= inv;
        nz.push_back(j);
      }
    auto eliminate = [&](Vec& row) {
      if (row[c] == 0) return;
      const Rational f = row[c];
      for (std::size_t j : nz) row[j] -= f * t_[r][j];
    };
    for (std::size_t i = 0; i < m_; ++i)
      if (i != r && alive_[i]) eliminate(t_[i]);
    if (!obj_.empty()) eliminate(obj_);
    basis_[r] = c;
  }

  std::size_t m_, ncols_, width_;
  std::vector<Vec> t_;
  Vec obj_;
  std::vector<std::size_t> basis_;
  std::vector<bool> alive_;
};

}  // namespace detail

inline LpResult lp_solve(const LinearProgram& lp) {
  const StandardForm sf = standardize(lp);
  detail::Tableau tab(sf);
  LpResult res;

  if (tab.phase_one() > 0) {
    res.status = LpStatus::Infeasible;
    res.farkas = tab.phase_one_duals();
    return res;
  }
  tab.drive_out_artificials();
  if (!tab.phase_two(sf.cost)) {
    res.status = LpStatus::Unbounded;
    return res;
  }
  Vec x = sf.recover(tab.primal());
  Rational value = 0;
  for (std::size_t j = 0; j < x.size(); ++j) value += lp.objective[j] * x[j];
  res.status = LpStatus::Optimal;
  res.solution = std::move(x);
  res.objective_value = std::move(value);
  return res;
}

/// Exact feasibility test of a point against every constraint and bound.
inline bool satisfies(const LinearProgram& lp, const Vec& x) {
  if (x.size() != lp.num_vars()) return false;
  for (const auto& c : lp.constraints) {
    const Rational lhs = dot(c.coeffs, x);
    switch (c.rel) {
      case Relation::LessEq:
        if (lhs > c.rhs) return false;
        break;
      case Relation::Equal:
        if (lhs != c.rhs) return false;
        break;
      case Relation::GreaterEq:
        if (lhs < c.rhs) return false;
        break;
    }
  }
  for (std::size_t j = 0; j < lp.bounds.size(); ++j) {
    if (lp.bounds[j].lower && x[j] < *lp.bounds[j].lower) return false;
    if (lp.bounds[j].upper && x[j] > *lp.bounds[j].upper) return false;
  }
  return true;
}

/// Checks y^T A <= 0 and y^T b > 0 over the standard form of lp.
inline bool verifies_infeasibility(const LinearProgram& lp, const Vec& y) {
  const StandardForm sf = standardize(lp);
  if (y.size() != sf.rows.size()) return false;
  Rational yb = 0;
  for (std::size_t i = 0; i < y.size(); ++i) yb += y[i] * sf.rhs[i];
  if (yb <= 0) return false;
  for (std::size_t j = 0; j < sf.num_cols(); ++j) {
    Rational s = 0;
    for (std::size_t i = 0; i < y.size(); ++i) s += y[i] * sf.rows[i][j];
    if (s > 0) return false;
  }
  return true;
}

}  // namespace mfarb
