#pragma once

// Conjunctions of univariate polynomial sign conditions solved exactly (to
// root tolerance) into interval unions.

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "rayspace/interval_set.hpp"
#include "rayspace/poly.hpp"

namespace rayspace {

enum class Relation { ge, gt, le, lt, eq };

inline const char* to_string(Relation r) {
  switch (r) {
    case Relation::ge: return ">=0";
    case Relation::gt: return ">0";
    case Relation::le: return "<=0";
    case Relation::lt: return "<0";
    case Relation::eq: return "=0";
  }
  return "?";
}

// Whether a value of the given sign (-1, 0, +1) satisfies the relation.
inline bool admits(Relation r, int sign) {
  switch (r) {
    case Relation::ge: return sign >= 0;
    case Relation::gt: return sign > 0;
    case Relation::le: return sign <= 0;
    case Relation::lt: return sign < 0;
    case Relation::eq: return sign == 0;
  }
  return false;
}

struct SignCondition {
  Polynomial poly;
  Relation relation = Relation::ge;
};

namespace detail {

struct Breakpoint {
  double x;
  std::vector<std::size_t> owners;  // conditions whose polynomial vanishes here
};

inline int raw_sign(double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

}  // namespace detail

// The set of u in domain satisfying every condition. Candidate cells are
// delimited by the roots of all polynomials; each open cell is classified at
// its midpoint and each root is classified with its owners treated as exactly
// zero, so endpoints are included iff the relations admit equality.
// The zero polynomial satisfies >=, <= and = everywhere and > and < nowhere.
inline IntervalSet solve_system(std::span<const SignCondition> conds, Interval domain,
                                double tol = 1e-13) {
  if (!(domain.hi >= domain.lo)) return {};

  std::vector<std::size_t> live;
  for (std::size_t i = 0; i < conds.size(); ++i) {
    const auto& c = conds[i];
    if (c.poly.is_zero()) {
      if (!admits(c.relation, 0)) return {};
      continue;
    }
    if (c.poly.is_constant()) {
      if (!admits(c.relation, detail::raw_sign(c.poly.coeff(0)))) return {};
      continue;
    }
    live.push_back(i);
  }
  if (live.empty()) return IntervalSet::single(domain.lo, domain.hi);

  std::vector<detail::Breakpoint> raw;
  raw.push_back({domain.lo, {}});
  raw.push_back({domain.hi, {}});
  for (std::size_t i : live) {
    for (double r : real_roots(conds[i].poly, domain.lo, domain.hi, tol)) raw.push_back({r, {i}});
  }
  std::sort(raw.begin(), raw.end(),
            [](const detail::Breakpoint& a, const detail::Breakpoint& b) { return a.x < b.x; });

  std::vector<detail::Breakpoint> pts;
  for (auto& bp : raw) {
    const double x = std::clamp(bp.x, domain.lo, domain.hi);
    if (!pts.empty() && std::abs(x - pts.back().x) <= 1e-12 * (1.0 + std::abs(x))) {
      pts.back().owners.insert(pts.back().owners.end(), bp.owners.begin(), bp.owners.end());
      // Domain endpoints keep their exact position.
      if (x == domain.lo || x == domain.hi) pts.back().x = x;
    } else {
      pts.push_back({x, bp.owners});
    }
  }

  auto satisfied_at_point = [&](const detail::Breakpoint& bp) {
    for (std::size_t i : live) {
      const bool owner = std::find(bp.owners.begin(), bp.owners.end(), i) != bp.owners.end();
      const int s = owner ? 0 : conds[i].poly.sign_at(bp.x);
      if (!admits(conds[i].relation, s)) return false;
    }
    return true;
  };
  auto satisfied_in_cell = [&](double x) {
    for (std::size_t i : live) {
      int s = detail::raw_sign(conds[i].poly(x));
      if (!admits(conds[i].relation, s)) return false;
    }
    return true;
  };

  std::vector<Interval> out;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (satisfied_at_point(pts[k])) out.push_back({pts[k].x, pts[k].x});
    if (k + 1 < pts.size() && pts[k + 1].x > pts[k].x) {
      const double mid = 0.5 * (pts[k].x + pts[k + 1].x);
      if (satisfied_in_cell(mid)) out.push_back({pts[k].x, pts[k + 1].x});
    }
  }
  return IntervalSet(std::move(out));
}

inline IntervalSet solve_system(std::initializer_list<SignCondition> conds, Interval domain,
                                double tol = 1e-13) {
  return solve_system(std::span<const SignCondition>(conds.begin(), conds.size()), domain, tol);
}

}  // namespace rayspace
