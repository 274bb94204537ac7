#pragma once

// Univariate polynomials with real coefficients and real-root isolation.
//
// Coefficients are stored in ascending degree. Arithmetic results are cleaned
// of cancellation noise: a coefficient whose magnitude is below
// kNoiseFactor times the magnitude of the terms that produced it is set to
// zero, so quantities that vanish identically (e.g. |s_i x s_j|^2 for two
// always-parallel segments) come out as the exact zero polynomial.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "rayspace/error.hpp"

namespace rayspace {

class Polynomial {
 public:
  static constexpr double kNoiseFactor = 1e-12;

  Polynomial() = default;
  Polynomial(std::initializer_list<double> coeffs) : c_(coeffs) { trim(); }
  explicit Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Polynomial constant(double value) { return Polynomial({value}); }
  static Polynomial monomial(double coeff, int power) {
    std::vector<double> c(static_cast<std::size_t>(power) + 1, 0.0);
    c.back() = coeff;
    return Polynomial(std::move(c));
  }
  // a*x + b
  static Polynomial linear(double a, double b) { return Polynomial({b, a}); }

  // -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }

  const std::vector<double>& coeffs() const { return c_; }
  double coeff(int k) const {
    return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[static_cast<std::size_t>(k)] : 0.0;
  }
  double leading() const { return c_.empty() ? 0.0 : c_.back(); }

  double max_abs_coeff() const {
    double m = 0.0;
    for (double v : c_) m = std::max(m, std::abs(v));
    return m;
  }

  double operator()(double x) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  // Sum |c_k| |x|^k; scales the rounding error of evaluating at x.
  double magnitude_at(double x) const {
    double acc = 0.0;
    const double ax = std::abs(x);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * ax + std::abs(*it);
    return acc;
  }

  // Values with |p(x)| below this are indistinguishable from zero.
  double zero_band_at(double x) const { return kNoiseFactor * magnitude_at(x); }

  // Sign of p(x) with values inside the zero band reported as 0.
  int sign_at(double x) const {
    const double v = (*this)(x);
    if (std::abs(v) <= zero_band_at(x)) return 0;
    return v > 0 ? 1 : -1;
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<double> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
    return Polynomial(std::move(d));
  }

  // p(a*x + b)
  Polynomial compose_linear(double a, double b) const {
    Polynomial result;
    const Polynomial inner = linear(a, b);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) result = result * inner + constant(*it);
    return result;
  }

  Polynomial pow(int exponent) const {
    Polynomial result = constant(1.0);
    for (int i = 0; i < exponent; ++i) result = result * *this;
    return result;
  }

  Polynomial scaled(double factor) const {
    std::vector<double> c = c_;
    for (double& v : c) v *= factor;
    return Polynomial(std::move(c));
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) { return a.add(b, 1.0); }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a.add(b, -1.0); }
  friend Polynomial operator-(const Polynomial& a) { return a.scaled(-1.0); }
  friend Polynomial operator*(double s, const Polynomial& p) { return p.scaled(s); }
  friend Polynomial operator*(const Polynomial& p, double s) { return p.scaled(s); }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    const std::size_t n = a.c_.size() + b.c_.size() - 1;
    std::vector<double> c(n, 0.0);
    std::vector<double> mag(n, 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      for (std::size_t j = 0; j < b.c_.size(); ++j) {
        const double term = a.c_[i] * b.c_[j];
        c[i + j] += term;
        mag[i + j] += std::abs(term);
      }
    }
    for (std::size_t k = 0; k < n; ++k) {
      if (std::abs(c[k]) <= kNoiseFactor * mag[k]) c[k] = 0.0;
    }
    return Polynomial(std::move(c));
  }

  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

  std::string to_string(char var = 'u') const {
    if (c_.empty()) return "0";
    std::string out;
    for (int k = degree(); k >= 0; --k) {
      const double v = c_[static_cast<std::size_t>(k)];
      if (v == 0.0) continue;
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%s%.6g", out.empty() ? "" : (v < 0 ? " - " : " + "),
                    out.empty() ? v : std::abs(v));
      out += buf;
      if (k >= 1) out += std::string("*") + var;
      if (k >= 2) out += "^" + std::to_string(k);
    }
    return out;
  }

 private:
  Polynomial add(const Polynomial& o, double sign) const {
    const std::size_t n = std::max(c_.size(), o.c_.size());
    std::vector<double> c(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      const double a = k < c_.size() ? c_[k] : 0.0;
      const double b = k < o.c_.size() ? sign * o.c_[k] : 0.0;
      const double v = a + b;
      c[k] = std::abs(v) <= kNoiseFactor * (std::abs(a) + std::abs(b)) ? 0.0 : v;
    }
    return Polynomial(std::move(c));
  }

  void trim() {
    while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
  }

  std::vector<double> c_;
};

namespace detail {

// Root of p in [lo, hi] given sign(p(lo)) = slo != 0 and opposite sign at hi.
inline double bisect_root(const Polynomial& p, double lo, double hi, int slo) {
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double v = p(mid);
    if (v == 0.0) return mid;
    if ((v > 0) == (slo > 0)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline void push_unique(std::vector<double>& roots, double x, double tol) {
  if (!roots.empty() && std::abs(roots.back() - x) <= tol * (1.0 + std::abs(x))) return;
  roots.push_back(x);
}

// Roots in [lo, hi] by recursion on critical points: between consecutive
// critical points p is monotone, so each sign change brackets one root and
// each critical point inside the zero band is a touching root.
inline std::vector<double> roots_between(const Polynomial& p, double lo, double hi, double tol) {
  std::vector<double> roots;
  const int deg = p.degree();
  if (deg <= 0) return roots;
  if (deg == 1) {
    const double r = -p.coeff(0) / p.coeff(1);
    if (r >= lo && r <= hi) roots.push_back(r);
    else if (p.sign_at(lo) == 0) roots.push_back(lo);
    else if (p.sign_at(hi) == 0) roots.push_back(hi);
    return roots;
  }
  std::vector<double> pts;
  pts.push_back(lo);
  for (double c : roots_between(p.derivative(), lo, hi, tol)) {
    if (c > lo && c < hi) pts.push_back(c);
  }
  pts.push_back(hi);

  std::vector<int> signs(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) signs[i] = p.sign_at(pts[i]);

  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (signs[i] == 0) {
      push_unique(roots, pts[i], tol);
    }
    if (i + 1 < pts.size() && signs[i] != 0 && signs[i + 1] != 0 && signs[i] != signs[i + 1]) {
      push_unique(roots, bisect_root(p, pts[i], pts[i + 1], signs[i]), tol);
    }
  }
  return roots;
}

}  // namespace detail

// Real roots of p in the closed interval [lo, hi], ascending, multiplicities
// collapsed. Throws IdenticallyZero for the zero polynomial.
inline std::vector<double> real_roots(const Polynomial& p, double lo, double hi,
                                      double tol = 1e-13) {
  if (p.is_zero()) throw Error(ErrorCode::identically_zero, "real_roots on the zero polynomial");
  if (!(tol > 0.0)) throw Error(ErrorCode::invalid_argument, "real_roots tolerance must be positive");
  if (hi < lo) return {};
  const Polynomial q = p.scaled(1.0 / p.max_abs_coeff());
  return detail::roots_between(q, lo, hi, tol);
}

}  // namespace rayspace
