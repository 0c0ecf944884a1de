#pragma once

// Convex-geometry predicates on finite point sets, all decided by lp_solve.
//
// For a point list P in Q^d write K(P) for the cone generated by P
// together with the origin. The central dichotomy: either 0 lies in the
// relative interior of K(P), or some H has H.x >= 0 on P with at least
// one strict inequality.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mfarb/errors.hpp"
#include "mfarb/lp.hpp"
#include "mfarb/rational.hpp"

namespace mfarb {

using IndexSet = std::vector<std::size_t>;

struct Separator {
  Vec direction;
  IndexSet strict;  // indices i with direction . x_i > 0, ascending
};

/// Raised by convex_combination_for_zero when 0 is not in ri K(P);
/// carries the maximal separator as a certificate.
struct NotInRelativeInterior : DomainError {
  NotInRelativeInterior(Separator sep)
      : DomainError("0 is not in the relative interior of the generated cone"),
        certificate(std::move(sep)) {}
  Separator certificate;
};

namespace detail {

inline std::size_t check_points(const std::vector<Vec>& points) {
  if (points.empty()) throw StructuralError("point list is empty");
  const std::size_t d = points.front().size();
  for (std::size_t i = 1; i < points.size(); ++i)
    if (points[i].size() != d)
      throw StructuralError("point " + std::to_string(i) + " has dimension " +
                            std::to_string(points[i].size()) + ", expected " + std::to_string(d));
  return d;
}

}  // namespace detail

inline bool conv_contains_zero(const std::vector<Vec>& points) {
  const std::size_t d = detail::check_points(points);
  const std::size_t n = points.size();
  LinearProgram lp;
  lp.objective.assign(n, Rational(0));
  lp.bounds.assign(n, Bound{Rational(0), std::nullopt});
  lp.add(Vec(n, Rational(1)), Relation::Equal, 1);
  for (std::size_t k = 0; k < d; ++k) {
    Vec row(n);
    for (std::size_t i = 0; i < n; ++i) row[i] = points[i][k];
    lp.add(std::move(row), Relation::Equal, 0);
  }
  return lp_solve(lp).optimal();
}

/// A separator whose strict set is the union of the strict sets of all
/// separators, or nullopt when 0 is in ri K(P).
///
/// Each round solves: H in [-1,1]^d, s_i in [0,1] for the indices not yet
/// strict, H.x_i >= s_i, maximize sum s_i. A single round can stop at an
/// optimal vertex whose strict set is not maximal (alternate optima trade
/// slack between points), so rounds are accumulated into H until the
/// optimum is zero. The result is rescaled into [-1,1]^d.
inline std::optional<Separator> maximal_separator(const std::vector<Vec>& points) {
  const std::size_t d = detail::check_points(points);
  const std::size_t n = points.size();

  Vec total = zero_vec(d);
  std::vector<bool> strict(n, false);
  for (;;) {
    IndexSet open;
    for (std::size_t i = 0; i < n; ++i)
      if (!strict[i] && !is_zero(points[i])) open.push_back(i);
    if (open.empty()) break;

    const std::size_t vars = d + open.size();
    LinearProgram lp;
    lp.objective.assign(vars, Rational(0));
    lp.bounds.assign(vars, Bound{Rational(-1), Rational(1)});
    for (std::size_t k = 0; k < open.size(); ++k) {
      lp.objective[d + k] = 1;
      lp.bounds[d + k].lower = Rational(0);
    }
    std::size_t slot = 0;
    for (std::size_t i = 0; i < n; ++i) {
      Vec row(vars, Rational(0));
      for (std::size_t k = 0; k < d; ++k) row[k] = points[i][k];
      if (slot < open.size() && open[slot] == i) row[d + slot++] = -1;
      lp.add(std::move(row), Relation::GreaterEq, 0);
    }
    const LpResult res = lp_solve(lp);
    if (!res.optimal() || *res.objective_value == 0) break;

    for (std::size_t k = 0; k < d; ++k) total[k] += (*res.solution)[k];
    for (std::size_t i = 0; i < n; ++i)
      if (dot(total, points[i]) > 0) strict[i] = true;
  }

  Separator sep;
  for (std::size_t i = 0; i < n; ++i)
    if (strict[i]) sep.strict.push_back(i);
  if (sep.strict.empty()) return std::nullopt;

  Rational scale = 0;
  for (const auto& v : total) scale = std::max(scale, Rational(abs(v)));
  sep.direction = (1 / scale) * total;
  return sep;
}

/// 0 in ri of cone(P) u {0}.
inline bool cone_ri_contains_zero(const std::vector<Vec>& points) {
  return !maximal_separator(points).has_value();
}

/// Weights lambda >= 0, sum 1, sum lambda_i x_i = 0, with lambda_anchor
/// maximal (and therefore positive).
inline Vec convex_combination_for_zero(const std::vector<Vec>& points, std::size_t anchor) {
  const std::size_t d = detail::check_points(points);
  const std::size_t n = points.size();
  if (anchor >= n) throw StructuralError("anchor index out of range");
  if (auto sep = maximal_separator(points)) throw NotInRelativeInterior(std::move(*sep));

  LinearProgram lp;
  lp.objective.assign(n, Rational(0));
  lp.objective[anchor] = 1;
  lp.bounds.assign(n, Bound{Rational(0), std::nullopt});
  lp.add(Vec(n, Rational(1)), Relation::Equal, 1);
  for (std::size_t k = 0; k < d; ++k) {
    Vec row(n);
    for (std::size_t i = 0; i < n; ++i) row[i] = points[i][k];
    lp.add(std::move(row), Relation::Equal, 0);
  }
  LpResult res = lp_solve(lp);
  if (!res.optimal() || (*res.solution)[anchor] <= 0)
    throw DomainError("convex_combination_for_zero: anchor weight is not positive");
  return std::move(*res.solution);
}

}  // namespace mfarb
