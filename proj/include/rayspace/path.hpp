#pragma once

// Platform trajectories: polynomial translation plus Slerp orientation,
// rewritten as rational functions of T = tan(t theta / 2) so that the whole
// trajectory can be checked with the same polynomial machinery as a ray.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "rayspace/geom.hpp"
#include "rayspace/graph.hpp"
#include "rayspace/interval_set.hpp"
#include "rayspace/model.hpp"
#include "rayspace/rational.hpp"
#include "rayspace/rayifw.hpp"
#include "rayspace/systems.hpp"

namespace rayspace {

struct Quaternion {
  double s = 1.0;
  Vec3 v = Vec3::Zero();

  double norm() const { return std::sqrt(s * s + v.squaredNorm()); }
  double dot(const Quaternion& o) const { return s * o.s + v.dot(o.v); }
  Quaternion operator-() const { return {-s, -v}; }

  friend Quaternion operator*(const Quaternion& a, const Quaternion& b) {
    return {a.s * b.s - a.v.dot(b.v), a.s * b.v + b.s * a.v + a.v.cross(b.v)};
  }

  static Quaternion axis_angle(const Vec3& axis, double angle) {
    return {std::cos(0.5 * angle), std::sin(0.5 * angle) * axis.normalized()};
  }
  // Rotation Rx(alpha) Ry(beta) Rz(gamma), the platform convention of the models.
  static Quaternion from_euler_xyz(double alpha, double beta, double gamma) {
    return axis_angle(Vec3::UnitX(), alpha) * axis_angle(Vec3::UnitY(), beta) *
           axis_angle(Vec3::UnitZ(), gamma);
  }
};

inline void require_unit(const Quaternion& q) {
  if (!std::isfinite(q.norm()) || std::abs(q.norm() - 1.0) > 1e-9) {
    throw Error(ErrorCode::non_unit_quaternion, "quaternion norm " + std::to_string(q.norm()));
  }
}

inline Mat3 quat_to_rotation(const Quaternion& q) {
  require_unit(q);
  const double s = q.s, x = q.v.x(), y = q.v.y(), z = q.v.z();
  Mat3 r;
  r << s * s + x * x - y * y - z * z, 2 * (x * y - s * z), 2 * (x * z + s * y),
      2 * (x * y + s * z), s * s - x * x + y * y - z * z, 2 * (y * z - s * x),
      2 * (x * z - s * y), 2 * (y * z + s * x), s * s - x * x - y * y + z * z;
  return r;
}

inline constexpr double kAngleTol = 1e-6;

// Angle between the orientations, after choosing the shorter arc.
inline double quaternion_angle(const Quaternion& qs, Quaternion qe) {
  if (qs.dot(qe) < 0) qe = -qe;
  return std::acos(std::clamp(qs.dot(qe), -1.0, 1.0));
}

inline Quaternion slerp(const Quaternion& qs, Quaternion qe, double t) {
  require_unit(qs);
  require_unit(qe);
  if (qs.dot(qe) < 0) qe = -qe;
  const double theta = std::acos(std::clamp(qs.dot(qe), -1.0, 1.0));
  if (theta < kAngleTol) return qs;
  const double a = std::sin((1 - t) * theta) / std::sin(theta);
  const double b = std::sin(t * theta) / std::sin(theta);
  return {a * qs.s + b * qe.s, a * qs.v + b * qe.v};
}

// Components (s, vx, vy, vz) of Q(T) as numerators over 1 + T^2.
struct RationalQuaternion {
  std::array<Polynomial, 4> num;
  double theta = 0.0;

  double t_max() const { return std::tan(0.5 * theta); }
  Quaternion at(double T) const {
    const double d = 1.0 + T * T;
    return {num[0](T) / d, Vec3(num[1](T), num[2](T), num[3](T)) / d};
  }
};

inline RationalQuaternion slerp_to_rational(const Quaternion& qs, Quaternion qe) {
  require_unit(qs);
  require_unit(qe);
  if (qs.dot(qe) < 0) qe = -qe;
  const double c = std::clamp(qs.dot(qe), -1.0, 1.0);
  const double theta = std::acos(c);
  if (theta < kAngleTol) {
    throw Error(ErrorCode::degenerate_angle, "orientations coincide; use a constant-orientation path");
  }
  const double k = 2.0 / std::sin(theta);
  const std::array<double, 4> a = {qs.s, qs.v.x(), qs.v.y(), qs.v.z()};
  const std::array<double, 4> b = {qe.s, qe.v.x(), qe.v.y(), qe.v.z()};
  RationalQuaternion r;
  r.theta = theta;
  for (std::size_t i = 0; i < 4; ++i) r.num[i] = Polynomial({a[i], k * (b[i] - a[i] * c), -a[i]});
  return r;
}

// Entries of R(Q(T)) as numerators over (1 + T^2)^2, row-major.
inline std::array<Polynomial, 9> rotation_rational(const RationalQuaternion& q) {
  const Polynomial& s = q.num[0];
  const Polynomial& x = q.num[1];
  const Polynomial& y = q.num[2];
  const Polynomial& z = q.num[3];
  const Polynomial ss = s * s, xx = x * x, yy = y * y, zz = z * z;
  const Polynomial xy = x * y, xz = x * z, yz = y * z, sx = s * x, sy = s * y, sz = s * z;
  return {ss + xx - yy - zz, 2.0 * (xy - sz), 2.0 * (xz + sy),
          2.0 * (xy + sz),   ss - xx + yy - zz, 2.0 * (yz - sx),
          2.0 * (xz - sy),   2.0 * (yz + sx),   ss - xx - yy + zz};
}

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Bernstein form sum C(n,i) (1-tau)^(n-i) tau^i P_i.
inline Vec3 bezier(std::span<const Vec3> controls, double tau) {
  const int n = static_cast<int>(controls.size()) - 1;
  Vec3 out = Vec3::Zero();
  for (int i = 0; i <= n; ++i) {
    out += binomial(n, i) * std::pow(1 - tau, n - i) * std::pow(tau, i) * controls[static_cast<std::size_t>(i)];
  }
  return out;
}

// Power-basis coefficients: c_k = C(n,k) sum_i (-1)^(k-i) C(k,i) P_i.
inline std::vector<Vec3> bezier_coeffs(std::span<const Vec3> controls) {
  if (controls.size() < 2) throw Error(ErrorCode::invalid_argument, "Bezier curve needs >= 2 control points");
  const int n = static_cast<int>(controls.size()) - 1;
  std::vector<Vec3> c(static_cast<std::size_t>(n + 1), Vec3::Zero());
  for (int k = 0; k <= n; ++k) {
    for (int i = 0; i <= k; ++i) {
      const double sign = ((k - i) % 2 == 0) ? 1.0 : -1.0;
      c[static_cast<std::size_t>(k)] += sign * binomial(k, i) * controls[static_cast<std::size_t>(i)];
    }
    c[static_cast<std::size_t>(k)] *= binomial(n, k);
  }
  return c;
}

using TranslationPolys = std::array<Polynomial, 3>;

// Every plan node becomes a control point; returns x(tau), y(tau), z(tau).
inline TranslationPolys smooth(std::span<const Vec3> nodes) {
  const std::vector<Vec3> c = bezier_coeffs(nodes);
  TranslationPolys out;
  for (int r = 0; r < 3; ++r) {
    std::vector<double> k;
    for (const auto& v : c) k.push_back(v[r]);
    out[static_cast<std::size_t>(r)] = Polynomial(std::move(k));
  }
  return out;
}

inline Vec3 evaluate(const TranslationPolys& p, double x) { return {p[0](x), p[1](x), p[2](x)}; }

// A trajectory over t in [0, 1]. With a rotating platform the verification
// parameter is T = tan(t theta / 2) in [0, tan(theta / 2)]; with a constant
// orientation it is tau = t in [0, 1].
struct RayPath {
  TranslationPolys translation_tau;
  Quaternion qs;
  Quaternion qe;  // on the same hemisphere as qs
  bool constant_orientation = false;
  RationalQuaternion orientation;  // valid when the orientation changes
  TranslationPolys translation;    // in the verification parameter

  double theta() const { return constant_orientation ? 0.0 : orientation.theta; }
  double param_max() const { return constant_orientation ? 1.0 : orientation.t_max(); }
  double param_of_t(double t) const {
    return constant_orientation ? t : std::tan(0.5 * t * orientation.theta);
  }
  double t_of_param(double p) const {
    return constant_orientation ? p : 2.0 * std::atan(p) / orientation.theta;
  }
  Vec3 position_at(double t) const { return evaluate(translation, param_of_t(t)); }
  Quaternion orientation_at(double t) const { return slerp(qs, qe, t); }
};

namespace detail {

inline RayPath start_path(const Quaternion& qs, Quaternion qe) {
  require_unit(qs);
  require_unit(qe);
  RayPath rp;
  if (qs.dot(qe) < 0) qe = -qe;
  rp.qs = qs;
  rp.qe = qe;
  rp.constant_orientation = quaternion_angle(qs, qe) < kAngleTol;
  if (!rp.constant_orientation) rp.orientation = slerp_to_rational(qs, qe);
  return rp;
}

}  // namespace detail

// Translation given in normalized time tau; tau = T / tan(theta / 2).
inline RayPath build_ray_path(const TranslationPolys& translation_tau, const Quaternion& qs,
                              const Quaternion& qe) {
  RayPath rp = detail::start_path(qs, qe);
  rp.translation_tau = translation_tau;
  if (rp.constant_orientation) {
    rp.translation = translation_tau;
  } else {
    const double k = 1.0 / rp.orientation.t_max();
    for (std::size_t r = 0; r < 3; ++r) rp.translation[r] = translation_tau[r].compose_linear(k, 0.0);
  }
  return rp;
}

// Translation given directly in T; requires a rotating platform.
inline RayPath build_ray_path_in_T(const TranslationPolys& translation_T, const Quaternion& qs,
                                   const Quaternion& qe) {
  RayPath rp = detail::start_path(qs, qe);
  if (rp.constant_orientation) {
    throw Error(ErrorCode::degenerate_angle, "a T-parameterized translation needs a rotating platform");
  }
  rp.translation = translation_T;
  const double k = rp.orientation.t_max();
  for (std::size_t r = 0; r < 3; ++r) rp.translation_tau[r] = translation_T[r].compose_linear(k, 0.0);
  return rp;
}

// Platform pose at t as model coordinates [x, y, z, alpha, beta, gamma].
inline Pose platform_pose(const RayPath& rp, double t) {
  const Vec3 p = rp.position_at(t);
  const Vec3 e = quat_to_rotation(rp.orientation_at(t)).eulerAngles(0, 1, 2);
  Pose q(6);
  q << p.x(), p.y(), p.z(), e.x(), e.y(), e.z();
  return q;
}

struct VerifyResult {
  IntervalSet feasible;  // in t
  std::vector<PairRecord> pairs;
  std::vector<std::pair<std::string, std::vector<DegreeEntry>>> degrees;
  int translation_degree = 0;
};

// Rational form of a point fixed to link `link` (0 = base, 1 = platform).
inline RationalVec3 path_point_form(const RationalBasis& B, const RayPath& rp,
                                    const std::array<Polynomial, 9>& rot, const Mat3& rot_const,
                                    int link, const Vec3& local) {
  if (link == 0) return RationalBasis::constant(local);
  RationalVec3 out;
  if (rp.constant_orientation) {
    const Vec3 r = rot_const * local;
    for (std::size_t k = 0; k < 3; ++k) out.num[k] = rp.translation[k] + Polynomial::constant(r[static_cast<Eigen::Index>(k)]);
    out.power = 0;
    return out;
  }
  const Polynomial& rho2 = B.rho_pow(2);
  for (std::size_t r = 0; r < 3; ++r) {
    Polynomial acc = rp.translation[r] * rho2;
    for (std::size_t c = 0; c < 3; ++c) acc += rot[3 * r + c] * local[static_cast<Eigen::Index>(c)];
    out.num[r] = acc;
  }
  out.power = 2;
  return out;
}

// Feasible part of the trajectory for a platform robot (segments between the
// base and link 1). Obstacles must be fixed to the base.
inline VerifyResult verify(const RobotModel& model, const RayPath& rp, const ClearanceSpec& clearance,
                           std::span<const Obstacle> obstacles = {}) {
  if (model.link_count() != 1) {
    throw Error(ErrorCode::invalid_argument, "trajectory verification supports single-platform robots");
  }
  for (const auto& o : obstacles) {
    if (o.link != 0) throw Error(ErrorCode::invalid_argument, "trajectory obstacles must be fixed to the base");
  }
  const RationalBasis B =
      rp.constant_orientation ? RationalBasis::translation() : RationalBasis(Polynomial({1.0, 0.0, 1.0}));
  std::array<Polynomial, 9> rot;
  Mat3 rot_const = Mat3::Identity();
  if (rp.constant_orientation) {
    rot_const = quat_to_rotation(rp.qs);
  } else {
    rot = rotation_rational(rp.orientation);
  }
  const Interval domain{0.0, rp.param_max()};
  const std::size_t m = model.segments.size();
  std::vector<RationalVec3> a(m);
  std::vector<RationalVec3> b(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& s = model.segments[i];
    a[i] = path_point_form(B, rp, rot, rot_const, s.start_link, s.start);
    b[i] = path_point_form(B, rp, rot, rot_const, s.end_link, s.end);
  }

  VerifyResult res;
  for (const auto& p : rp.translation) res.translation_degree = std::max(res.translation_degree, p.degree());
  auto to_t = [&](double p) { return std::clamp(rp.t_of_param(p), 0.0, 1.0); };
  std::vector<Interval> blocked;
  auto record = [&](std::string label, const InterferenceSystem& sys) {
    SystemSolution sol = solve_interference(sys, domain);
    if (!sys.degrees.empty()) res.degrees.emplace_back(label, sys.degrees);
    if (sol.blocked.empty() && sol.parallel_hits.empty()) return;
    PairRecord rec;
    rec.pair = std::move(label);
    rec.blocked = sol.blocked.map(to_t);
    rec.branches = std::move(sol.branches);
    for (double r : sol.parallel_hits) rec.parallel_hits.push_back(to_t(r));
    blocked.insert(blocked.end(), rec.blocked.begin(), rec.blocked.end());
    res.pairs.push_back(std::move(rec));
  };
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (model.segments[i].cable == model.segments[j].cable) continue;
      record(segment_label(static_cast<int>(i)) + "-" + segment_label(static_cast<int>(j)),
             segment_segment_system(B, a[i], b[i], a[j], b[j], clearance.cable_cable));
    }
  }
  for (std::size_t k = 0; k < obstacles.size(); ++k) {
    for (std::size_t i = 0; i < m; ++i) {
      record(segment_label(static_cast<int>(i)) + "-" + obstacle_label(obstacles[k], k),
             obstacle_system(B, a[i], b[i], obstacles[k], clearance));
    }
  }
  res.feasible = IntervalSet(std::move(blocked)).complement_in({0.0, 1.0});
  return res;
}

// Bezier path whose control points are the platform origins of planned poses.
// The poses must share one platform orientation.
inline RayPath smooth_poses(const RobotModel& model, const std::vector<Pose>& poses) {
  if (model.link_count() != 1 || poses.size() < 2) {
    throw Error(ErrorCode::invalid_argument, "smoothing needs a single-platform robot and at least 2 poses");
  }
  std::vector<Vec3> controls;
  const Mat3 r0 = link_frames(model, poses.front()).rotation[1];
  for (const auto& p : poses) {
    const LinkFrames f = link_frames(model, p);
    if ((f.rotation[1] - r0).cwiseAbs().maxCoeff() > 1e-12) {
      throw Error(ErrorCode::invalid_argument, "planned poses must share one platform orientation");
    }
    controls.push_back(f.origin[1]);
  }
  const Eigen::Quaterniond e(r0);
  const Quaternion q{e.w(), e.vec()};
  return build_ray_path(smooth(controls), q, q);
}

}  // namespace rayspace
