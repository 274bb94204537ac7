#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "rayspace/inequality.hpp"
#include "rayspace/interval_set.hpp"
#include "rayspace/poly.hpp"

using namespace rayspace;

namespace {

// Roots by sign changes on a uniform grid, refined by bisection.
std::vector<double> grid_roots(const Polynomial& p, double lo, double hi, double step) {
  std::vector<double> out;
  double x0 = lo;
  double f0 = p(x0);
  for (double x1 = lo + step; x1 <= hi + 1e-15; x1 += step) {
    const double f1 = p(x1);
    if (f0 == 0.0) {
      out.push_back(x0);
    } else if (f0 * f1 < 0) {
      double a = x0, b = x1, fa = f0;
      for (int k = 0; k < 80; ++k) {
        const double m = 0.5 * (a + b);
        const double fm = p(m);
        if (fa * fm <= 0) {
          b = m;
        } else {
          a = m;
          fa = fm;
        }
      }
      out.push_back(0.5 * (a + b));
    }
    x0 = x1;
    f0 = f1;
  }
  return out;
}

bool holds(Relation r, double v) {
  switch (r) {
    case Relation::ge: return v >= 0;
    case Relation::gt: return v > 0;
    case Relation::le: return v <= 0;
    case Relation::lt: return v < 0;
    case Relation::eq: return v == 0;
  }
  return false;
}

}  // namespace

TEST(Polynomial, Arithmetic) {
  const Polynomial p = Polynomial({1, 1}) * Polynomial({-1, 1});
  EXPECT_EQ(p.degree(), 2);
  EXPECT_DOUBLE_EQ(p.coeff(0), -1);
  EXPECT_DOUBLE_EQ(p.coeff(1), 0);
  EXPECT_DOUBLE_EQ(p.coeff(2), 1);
  EXPECT_TRUE((Polynomial({0, 0, 1}) - Polynomial({0, 0, 1})).is_zero());
  EXPECT_EQ(Polynomial({0, 0, 0}).degree(), -1);
}

TEST(Polynomial, ComposeLinear) {
  const Polynomial p = Polynomial({0, 0, 1}).compose_linear(1.0 / 0.1317, 0.0);
  EXPECT_NEAR(p.coeff(2), 1.0 / (0.1317 * 0.1317), 1e-9);
  EXPECT_EQ(p.degree(), 2);
}

TEST(Polynomial, EvaluationConsistency) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> c(-2, 2);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> ca(6), cb(4);
    for (auto& v : ca) v = c(rng);
    for (auto& v : cb) v = c(rng);
    const Polynomial a(ca), b(cb);
    for (int k = 0; k < 100; ++k) {
      const double x = c(rng);
      const double scale = 1 + std::abs(a(x)) * std::abs(b(x)) + std::abs(a(x)) + std::abs(b(x));
      EXPECT_NEAR((a + b)(x), a(x) + b(x), 1e-10 * scale);
      EXPECT_NEAR((a - b)(x), a(x) - b(x), 1e-10 * scale);
      EXPECT_NEAR((a * b)(x), a(x) * b(x), 1e-10 * scale);
      EXPECT_NEAR(a.compose_linear(0.5, 0.25)(x), a(0.5 * x + 0.25), 1e-10 * scale);
    }
    EXPECT_EQ((a * b).degree(), a.degree() + b.degree());
  }
}

TEST(RealRoots, Basic) {
  const auto r = real_roots(Polynomial({-2, 1, 1}), 0, 3);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_NEAR(r[0], 1.0, 1e-12);
  EXPECT_TRUE(real_roots(Polynomial({1, 0, 1}), -10, 10).empty());
  EXPECT_THROW(real_roots(Polynomial(), 0, 1), Error);
}

TEST(RealRoots, DoubleRootCollapsed) {
  const auto r = real_roots(Polynomial({1, -2, 1}), -3, 3);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_NEAR(r[0], 1.0, 1e-7);
}

TEST(RealRoots, PlantedDegree12) {
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> root(-0.95, 0.95);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> planted;
    while (planted.size() < 6) {
      const double x = root(rng);
      if (std::all_of(planted.begin(), planted.end(), [&](double y) { return std::abs(x - y) > 0.02; })) {
        planted.push_back(x);
      }
    }
    std::sort(planted.begin(), planted.end());
    Polynomial p = Polynomial::constant(1.0);
    for (double x : planted) p = p * Polynomial::linear(1.0, -x);
    // three complex pairs keep the degree at 12 without further real roots
    for (int k = 0; k < 3; ++k) p = p * Polynomial({1.0 + 0.5 * k, 0.3, 1.0});
    ASSERT_EQ(p.degree(), 12);
    const auto r = real_roots(p, -1, 1);
    const auto oracle = grid_roots(p, -1, 1, 1e-5);
    ASSERT_EQ(r.size(), planted.size());
    ASSERT_EQ(oracle.size(), planted.size());
    for (std::size_t k = 0; k < r.size(); ++k) {
      EXPECT_NEAR(r[k], planted[k], 1e-9);
      EXPECT_NEAR(r[k], oracle[k], 1e-9);
    }
    EXPECT_TRUE(std::is_sorted(r.begin(), r.end()));
  }
}

TEST(SolveSystem, Examples) {
  const IntervalSet a = solve_system({{Polynomial({-1, 0, 1}), Relation::ge}}, {-2, 2});
  ASSERT_EQ(a.size(), 2u);
  EXPECT_NEAR(a[0].lo, -2, 1e-12);
  EXPECT_NEAR(a[0].hi, -1, 1e-12);
  EXPECT_NEAR(a[1].lo, 1, 1e-12);
  EXPECT_NEAR(a[1].hi, 2, 1e-12);

  const IntervalSet b =
      solve_system({{Polynomial({0, 1}), Relation::ge}, {Polynomial({1, -1}), Relation::ge}}, {-5, 5});
  ASSERT_EQ(b.size(), 1u);
  EXPECT_NEAR(b[0].lo, 0, 1e-12);
  EXPECT_NEAR(b[0].hi, 1, 1e-12);
}

TEST(SolveSystem, ZeroPolynomial) {
  EXPECT_EQ(solve_system({{Polynomial(), Relation::ge}}, {0, 1}).measure(), 1.0);
  EXPECT_TRUE(solve_system({{Polynomial(), Relation::gt}}, {0, 1}).empty());
}

TEST(SolveSystem, StrictRelationsExcludeRoots) {
  const IntervalSet s = solve_system({{Polynomial({-1, 0, 1}), Relation::gt}}, {-2, 2});
  EXPECT_FALSE(s.contains(0.0));
  const IntervalSet eq = solve_system({{Polynomial({-1, 0, 1}), Relation::eq}}, {-2, 2});
  ASSERT_EQ(eq.size(), 2u);
  EXPECT_NEAR(eq.measure(), 0.0, 1e-15);
}

TEST(SolveSystem, RandomQuadraticGridOracle) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> c(-1, 1);
  const Relation rels[] = {Relation::ge, Relation::gt, Relation::le, Relation::lt};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<SignCondition> conds;
    for (int k = 0; k < 5; ++k) {
      conds.push_back({Polynomial({c(rng), c(rng), c(rng)}), rels[rng() % 4]});
    }
    const Interval dom{-2, 2};
    const IntervalSet s = solve_system(conds, dom);
    std::vector<double> bounds;
    for (const auto& sc : conds) {
      for (double r : real_roots(sc.poly, dom.lo, dom.hi)) bounds.push_back(r);
    }
    for (double x = dom.lo; x <= dom.hi; x += 1e-3) {
      bool near = false;
      for (double b : bounds) near = near || std::abs(x - b) < 1e-9;
      if (near) continue;
      bool all = true;
      for (const auto& sc : conds) all = all && holds(sc.relation, sc.poly(x));
      ASSERT_EQ(s.contains(x), all) << "trial " << trial << " x " << x;
    }
  }
}

TEST(IntervalSet, Operations) {
  const IntervalSet c = IntervalSet::single(1, 2).complement_in({0, 3});
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].hi, 1);
  EXPECT_EQ(c[1].lo, 2);
  const IntervalSet u = IntervalSet::single(0, 1).unite(IntervalSet::single(1, 2));
  ASSERT_EQ(u.size(), 1u);
  EXPECT_EQ(u[0].lo, 0);
  EXPECT_EQ(u[0].hi, 2);
  EXPECT_TRUE(IntervalSet().intersect(IntervalSet::single(0, 1)).empty());
}

TEST(IntervalSet, DeMorgan) {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> x(0, 10);
  const Interval dom{0, 10};
  for (int trial = 0; trial < 200; ++trial) {
    auto random_set = [&] {
      std::vector<Interval> parts;
      for (int k = 0; k < 3; ++k) {
        double a = x(rng), b = x(rng);
        parts.push_back({std::min(a, b), std::max(a, b)});
      }
      return IntervalSet(parts);
    };
    const IntervalSet a = random_set(), b = random_set();
    const IntervalSet lhs = a.unite(b).complement_in(dom);
    const IntervalSet rhs = a.complement_in(dom).intersect(b.complement_in(dom));
    ASSERT_EQ(lhs.size(), rhs.size());
    for (std::size_t k = 0; k < lhs.size(); ++k) {
      EXPECT_NEAR(lhs[k].lo, rhs[k].lo, 1e-12);
      EXPECT_NEAR(lhs[k].hi, rhs[k].hi, 1e-12);
    }
  }
}
