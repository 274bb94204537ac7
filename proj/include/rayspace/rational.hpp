#pragma once

// Vectors and scalars of the form numerator(u) / rho(u)^power. All values of
// one ray share the same rho, which is positive everywhere, so the sign of a
// rational scalar is the sign of its numerator. Sums bring both operands to
// the larger power; products add powers.

#include <Eigen/Dense>

#include <array>
#include <vector>

#include "rayspace/model.hpp"
#include "rayspace/poly.hpp"

namespace rayspace {

struct RationalScalar {
  Polynomial num;
  int power = 0;
};

struct RationalVec3 {
  std::array<Polynomial, 3> num;
  int power = 0;

  int degree() const {
    return std::max({num[0].degree(), num[1].degree(), num[2].degree()});
  }
};

class RationalBasis {
 public:
  explicit RationalBasis(Polynomial rho) : rho_(std::move(rho)) {
    pow_.push_back(Polynomial::constant(1.0));
  }

  static RationalBasis orientation() { return RationalBasis(Polynomial({1.0, 0.0, 1.0})); }
  static RationalBasis translation() { return RationalBasis(Polynomial::constant(1.0)); }

  const Polynomial& rho() const { return rho_; }
  bool trivial() const { return rho_.degree() <= 0; }

  const Polynomial& rho_pow(int k) const {
    while (static_cast<int>(pow_.size()) <= k) pow_.push_back(pow_.back() * rho_);
    return pow_[static_cast<std::size_t>(k)];
  }

  static RationalVec3 constant(const Vec3& v) {
    return {{Polynomial::constant(v.x()), Polynomial::constant(v.y()), Polynomial::constant(v.z())}, 0};
  }
  static RationalScalar constant(double v) { return {Polynomial::constant(v), 0}; }

  RationalScalar raise(const RationalScalar& a, int power) const {
    if (power <= a.power || trivial()) return {a.num, std::max(power, a.power)};
    return {a.num * rho_pow(power - a.power), power};
  }
  RationalVec3 raise(const RationalVec3& a, int power) const {
    if (power <= a.power || trivial()) return {a.num, std::max(power, a.power)};
    const Polynomial& f = rho_pow(power - a.power);
    return {{a.num[0] * f, a.num[1] * f, a.num[2] * f}, power};
  }

  RationalScalar add(const RationalScalar& a, const RationalScalar& b) const {
    const int p = std::max(a.power, b.power);
    return {raise(a, p).num + raise(b, p).num, p};
  }
  RationalScalar sub(const RationalScalar& a, const RationalScalar& b) const {
    const int p = std::max(a.power, b.power);
    return {raise(a, p).num - raise(b, p).num, p};
  }
  RationalVec3 add(const RationalVec3& a, const RationalVec3& b) const {
    const int p = std::max(a.power, b.power);
    const RationalVec3 x = raise(a, p);
    const RationalVec3 y = raise(b, p);
    return {{x.num[0] + y.num[0], x.num[1] + y.num[1], x.num[2] + y.num[2]}, p};
  }
  RationalVec3 sub(const RationalVec3& a, const RationalVec3& b) const {
    const int p = std::max(a.power, b.power);
    const RationalVec3 x = raise(a, p);
    const RationalVec3 y = raise(b, p);
    return {{x.num[0] - y.num[0], x.num[1] - y.num[1], x.num[2] - y.num[2]}, p};
  }

  static RationalScalar mul(const RationalScalar& a, const RationalScalar& b) {
    return {a.num * b.num, a.power + b.power};
  }
  static RationalScalar scale(double k, const RationalScalar& a) { return {a.num * k, a.power}; }
  static RationalVec3 scale(double k, const RationalVec3& a) {
    return {{a.num[0] * k, a.num[1] * k, a.num[2] * k}, a.power};
  }
  static RationalVec3 negate(const RationalVec3& a) { return scale(-1.0, a); }

  static RationalScalar dot(const RationalVec3& a, const RationalVec3& b) {
    return {a.num[0] * b.num[0] + a.num[1] * b.num[1] + a.num[2] * b.num[2], a.power + b.power};
  }
  static RationalVec3 cross(const RationalVec3& a, const RationalVec3& b) {
    return {{a.num[1] * b.num[2] - a.num[2] * b.num[1], a.num[2] * b.num[0] - a.num[0] * b.num[2],
             a.num[0] * b.num[1] - a.num[1] * b.num[0]},
            a.power + b.power};
  }
  // det[a, b, c] with a, b, c as columns.
  static RationalScalar det(const RationalVec3& a, const RationalVec3& b, const RationalVec3& c) {
    return dot(a, cross(b, c));
  }

  // m * v + offset for a constant matrix and offset.
  RationalVec3 affine(const Mat3& m, const RationalVec3& v, const Vec3& offset) const {
    RationalVec3 out;
    out.power = v.power;
    const Polynomial& rp = rho_pow(trivial() ? 0 : v.power);
    for (int r = 0; r < 3; ++r) {
      Polynomial acc = rp * offset[r];
      for (int c = 0; c < 3; ++c) acc += v.num[static_cast<std::size_t>(c)] * m(r, c);
      out.num[static_cast<std::size_t>(r)] = acc;
    }
    return out;
  }

  // Lowers the power while every numerator is divisible by rho.
  RationalVec3 reduce(RationalVec3 v) const {
    if (trivial()) return {v.num, 0};
    while (v.power > 0) {
      std::array<Polynomial, 3> q;
      bool ok = true;
      for (int k = 0; k < 3 && ok; ++k) ok = divide(v.num[static_cast<std::size_t>(k)], q[static_cast<std::size_t>(k)]);
      if (!ok) break;
      v.num = q;
      --v.power;
    }
    return v;
  }
  RationalScalar reduce(RationalScalar v) const {
    if (trivial()) return {v.num, 0};
    Polynomial q;
    while (v.power > 0 && divide(v.num, q)) {
      v.num = q;
      --v.power;
    }
    return v;
  }

  double eval(const RationalScalar& a, double u) const {
    return a.num(u) / std::pow(rho_(u), a.power);
  }
  Vec3 eval(const RationalVec3& a, double u) const {
    const double d = std::pow(rho_(u), a.power);
    return {a.num[0](u) / d, a.num[1](u) / d, a.num[2](u) / d};
  }

 private:
  // Exact division by rho up to rounding; false when the remainder is significant.
  bool divide(const Polynomial& p, Polynomial& quotient) const {
    if (p.is_zero()) {
      quotient = {};
      return true;
    }
    const int n = p.degree();
    const int m = rho_.degree();
    if (n < m) return false;
    std::vector<double> rem = p.coeffs();
    std::vector<double> q(static_cast<std::size_t>(n - m + 1), 0.0);
    const double lead = rho_.leading();
    for (int k = n - m; k >= 0; --k) {
      const double c = rem[static_cast<std::size_t>(k + m)] / lead;
      q[static_cast<std::size_t>(k)] = c;
      for (int j = 0; j <= m; ++j) rem[static_cast<std::size_t>(k + j)] -= c * rho_.coeff(j);
    }
    const double scale = p.max_abs_coeff();
    for (int k = 0; k < m; ++k) {
      if (std::abs(rem[static_cast<std::size_t>(k)]) > 1e-12 * scale) return false;
    }
    quotient = Polynomial(std::move(q));
    return true;
  }

  Polynomial rho_;
  mutable std::vector<Polynomial> pow_;
};

}  // namespace rayspace
