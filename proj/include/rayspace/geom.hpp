#pragma once

// Point-wise interference predicates between cable segments and the other
// entities of a scene. They return the true clearance, so they also serve as
// the brute-force reference for the ray-based solver.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <type_traits>
#include <string>
#include <variant>
#include <vector>

#include "rayspace/error.hpp"
#include "rayspace/model.hpp"

namespace rayspace {

struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
};

// Capsule around the segment a-b.
struct Cylinder {
  Vec3 a = Vec3::Zero();
  Vec3 b = Vec3::UnitZ();
  double radius = 0.0;
};

struct Sphere {
  Vec3 center = Vec3::Zero();
  double radius = 0.0;
};

// Points x with (x - center)^T shape (x - center) <= 1; shape is SPD in 1/m^2.
struct Ellipsoid {
  Vec3 center = Vec3::Zero();
  Mat3 shape = Mat3::Identity();
};

struct Cone {
  Vec3 vertex = Vec3::Zero();
  Vec3 axis = Vec3::UnitZ();
  double half_angle = 0.5;
  double height = 1.0;
};

using Shape = std::variant<TriMesh, Cylinder, Sphere, Ellipsoid, Cone>;

// An obstacle is fixed to a link of the robot; link 0 is the world.
struct Obstacle {
  std::string name;
  Shape shape;
  int link = 0;
};

inline const char* shape_tag(const Shape& s) {
  static constexpr const char* tags[] = {"mesh", "cylinder", "sphere", "ellipsoid", "cone"};
  return tags[s.index()];
}

// Required clearances before obstacle radii are added: cable-cable is the
// cable diameter plus slack, cable-obstacle is the cable radius plus slack.
struct ClearanceSpec {
  double cable_cable = 0.0;
  double cable_obstacle = 0.0;

  static ClearanceSpec from_cable(double diameter, double slack) {
    return {diameter + slack, 0.5 * diameter + slack};
  }
  static ClearanceSpec uniform(double eps) { return {eps, eps}; }
};

// Effective clearance for a cable against this shape. Ellipsoids are tested in
// their normalized frame against the unit sphere; cones use a line test.
inline double obstacle_clearance(const Shape& shape, const ClearanceSpec& spec) {
  if (const auto* c = std::get_if<Cylinder>(&shape)) return spec.cable_obstacle + c->radius;
  if (const auto* s = std::get_if<Sphere>(&shape)) return spec.cable_obstacle + s->radius;
  if (std::holds_alternative<TriMesh>(shape)) return spec.cable_obstacle;
  if (std::holds_alternative<Ellipsoid>(shape)) return 1.0;
  return 0.0;
}

inline std::vector<Diagnostic> validate(const Obstacle& o) {
  std::vector<Diagnostic> out;
  auto error = [&](std::string msg) {
    out.push_back({Diagnostic::Severity::error, "obstacle '" + o.name + "': " + std::move(msg)});
  };
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, TriMesh>) {
          const int n = static_cast<int>(s.vertices.size());
          for (const auto& t : s.triangles) {
            for (int idx : t) {
              if (idx < 0 || idx >= n) error("triangle index " + std::to_string(idx) + " out of range");
            }
          }
          if (s.triangles.empty()) error("mesh has no triangles");
        } else if constexpr (std::is_same_v<T, Cylinder>) {
          if (!(s.radius > 0)) error("cylinder radius must be positive");
          if ((s.b - s.a).norm() == 0.0) error("cylinder axis has zero length");
        } else if constexpr (std::is_same_v<T, Sphere>) {
          if (!(s.radius > 0)) error("sphere radius must be positive");
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          if (!s.shape.isApprox(s.shape.transpose(), 1e-12)) error("ellipsoid matrix must be symmetric");
          Eigen::SelfAdjointEigenSolver<Mat3> eig(s.shape);
          if (eig.eigenvalues().minCoeff() <= 0) error("ellipsoid matrix must be positive definite");
        } else if constexpr (std::is_same_v<T, Cone>) {
          if (std::abs(s.axis.norm() - 1.0) > 1e-9) error("cone axis must be a unit vector");
          if (!(s.half_angle > 0 && s.half_angle < std::numbers::pi / 2)) {
            error("cone half-angle must lie in (0, pi/2)");
          }
          if (!(s.height > 0)) error("cone height must be positive");
        }
      },
      o.shape);
  return out;
}

struct Clearance {
  double distance = 0.0;
  double param_i = 0.0;  // parameter on the cable segment (t_i or k)
  double param_j = 0.0;  // parameter on the other entity where meaningful
  std::string branch;
  bool interferes = false;
};

namespace detail {

inline void require_segment(const Vec3& a, const Vec3& b) {
  if (!a.allFinite() || !b.allFinite()) throw Error(ErrorCode::invalid_argument, "non-finite segment");
  if ((b - a).squaredNorm() == 0.0) throw Error(ErrorCode::degenerate_segment, "zero-length segment");
}

}  // namespace detail

// Distance from point m to segment a-b, with the three-branch split on the
// projection of m: before the start, inside, or past the end.
inline Clearance seg_point(const Vec3& a, const Vec3& b, const Vec3& m, double eps) {
  detail::require_segment(a, b);
  const Vec3 s = b - a;
  const Vec3 r = m - a;
  const double rs = r.dot(s);
  const double ss = s.dot(s);
  Clearance c;
  if (rs <= 0) {
    c.distance = r.norm();
    c.param_i = 0.0;
    c.branch = "start";
  } else if (rs < ss) {
    c.distance = s.cross(r).norm() / std::sqrt(ss);
    c.param_i = rs / ss;
    c.branch = "middle";
  } else {
    c.distance = (m - b).norm();
    c.param_i = 1.0;
    c.branch = "end";
  }
  c.interferes = c.distance <= eps;
  return c;
}

// Segment-segment distance. For non-parallel segments the common perpendicular
// is found by solving [s_i, -s_j, -s_i x s_j] (t_i, t_j, t) = s_ij; when its
// feet leave [0,1] the minimum is attained at an endpoint of one segment.
inline Clearance seg_seg(const Vec3& ai, const Vec3& bi, const Vec3& aj, const Vec3& bj, double eps) {
  detail::require_segment(ai, bi);
  detail::require_segment(aj, bj);
  const Vec3 si = bi - ai;
  const Vec3 sj = bj - aj;
  const Vec3 sij = aj - ai;
  const Vec3 n = si.cross(sj);
  const double d = n.squaredNorm();
  Clearance c;
  const bool parallel = d < 1e-12 * si.squaredNorm() * sj.squaredNorm();
  if (!parallel) {
    Mat3 m;
    m.col(0) = si;
    m.col(1) = -sj;
    m.col(2) = -n;
    auto det = [](const Vec3& x, const Vec3& y, const Vec3& z) { return x.dot(y.cross(z)); };
    const double ti = det(sij, -sj, -n) / d;
    const double tj = det(si, sij, -n) / d;
    const double t = det(si, -sj, sij) / d;
    if (ti >= 0 && ti <= 1 && tj >= 0 && tj <= 1) {
      c.distance = std::abs(t) * std::sqrt(d);
      c.param_i = ti;
      c.param_j = tj;
      c.branch = "interior";
      c.interferes = c.distance <= eps;
      return c;
    }
  }
  const Clearance cands[4] = {seg_point(ai, bi, aj, eps), seg_point(ai, bi, bj, eps),
                              seg_point(aj, bj, ai, eps), seg_point(aj, bj, bi, eps)};
  int best = 0;
  for (int k = 1; k < 4; ++k) {
    if (cands[k].distance < cands[best].distance) best = k;
  }
  c.distance = cands[best].distance;
  if (best < 2) {
    c.param_i = cands[best].param_i;
    c.param_j = best == 0 ? 0.0 : 1.0;
  } else {
    c.param_i = best == 2 ? 0.0 : 1.0;
    c.param_j = cands[best].param_i;
  }
  c.branch = parallel ? "parallel" : "endpoint";
  c.interferes = c.distance <= eps;
  return c;
}

// Segment against triangle (v0, v1, v2). Intersection follows the barycentric
// system [-s, e1, e2] (k, k1, k2) = a - v0; the clearance is the true
// distance, attained on a triangle edge or between a segment endpoint and the
// face when the two do not intersect.
inline Clearance seg_triangle(const Vec3& a, const Vec3& b, const Vec3& v0, const Vec3& v1,
                              const Vec3& v2, double eps) {
  detail::require_segment(a, b);
  const Vec3 s = b - a;
  const Vec3 e1 = v1 - v0;
  const Vec3 e2 = v2 - v0;
  const Vec3 n = e1.cross(e2);
  if (n.squaredNorm() <= 1e-24 * e1.squaredNorm() * e2.squaredNorm() || n.squaredNorm() == 0.0) {
    throw Error(ErrorCode::degenerate_triangle, "collinear triangle vertices");
  }
  const Vec3 eij = a - v0;
  const double d = -s.dot(n);
  const bool parallel = d * d <= 1e-24 * s.squaredNorm() * n.squaredNorm();
  Clearance c;
  if (!parallel) {
    auto det = [](const Vec3& x, const Vec3& y, const Vec3& z) { return x.dot(y.cross(z)); };
    const double k = det(eij, e1, e2) / d;
    const double k1 = det(-s, eij, e2) / d;
    const double k2 = det(-s, e1, eij) / d;
    if (k >= 0 && k <= 1 && k1 >= 0 && k2 >= 0 && k1 + k2 <= 1) {
      c.distance = 0.0;
      c.param_i = k;
      c.branch = "intersect";
      c.interferes = true;
      return c;
    }
  }
  c.distance = std::numeric_limits<double>::infinity();
  const std::array<std::pair<Vec3, Vec3>, 3> edges = {{{v0, v1}, {v1, v2}, {v2, v0}}};
  for (const auto& [p, q] : edges) {
    const Clearance e = seg_seg(a, b, p, q, eps);
    if (e.distance < c.distance) {
      c.distance = e.distance;
      c.param_i = e.param_i;
      c.branch = "edge";
    }
  }
  const double nn = n.squaredNorm();
  for (int end = 0; end < 2; ++end) {
    const Vec3& p = end == 0 ? a : b;
    const Vec3 w = p - v0;
    const double l1 = w.cross(e2).dot(n) / nn;
    const double l2 = e1.cross(w).dot(n) / nn;
    if (l1 >= 0 && l2 >= 0 && l1 + l2 <= 1) {
      const double h = std::abs(w.dot(n)) / std::sqrt(nn);
      if (h < c.distance) {
        c.distance = h;
        c.param_i = end;
        c.branch = "face";
      }
    }
  }
  if (parallel) c.branch = "parallel";
  c.interferes = c.distance <= eps;
  return c;
}

inline Clearance seg_mesh(const Vec3& a, const Vec3& b, const TriMesh& mesh, double eps) {
  Clearance best;
  best.distance = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    Clearance c = seg_triangle(a, b, mesh.vertices[static_cast<std::size_t>(tri[0])],
                               mesh.vertices[static_cast<std::size_t>(tri[1])],
                               mesh.vertices[static_cast<std::size_t>(tri[2])], eps);
    if (c.distance < best.distance) {
      best = c;
      best.param_j = static_cast<double>(t);
    }
  }
  best.interferes = best.distance <= eps;
  return best;
}

inline Clearance seg_cylinder(const Vec3& a, const Vec3& b, const Cylinder& cyl, double eps) {
  Clearance c = seg_seg(a, b, cyl.a, cyl.b, eps + cyl.radius);
  c.distance -= cyl.radius;
  return c;
}

inline Clearance seg_sphere(const Vec3& a, const Vec3& b, const Sphere& sph, double eps) {
  Clearance c = seg_point(a, b, sph.center, eps + sph.radius);
  c.distance -= sph.radius;
  return c;
}

// x~ = Lambda^(1/2) Q^T (x - c) maps the ellipsoid A = Q Lambda Q^T onto the unit sphere.
inline Mat3 ellipsoid_normalizer(const Ellipsoid& e) {
  Eigen::SelfAdjointEigenSolver<Mat3> eig(e.shape);
  if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0) {
    throw Error(ErrorCode::invalid_argument, "ellipsoid matrix is not positive definite");
  }
  return eig.eigenvalues().cwiseSqrt().asDiagonal() * eig.eigenvectors().transpose();
}

// Distance is measured in the normalized frame; interference iff it is <= 1.
inline Clearance seg_ellipsoid(const Vec3& a, const Vec3& b, const Ellipsoid& e) {
  const Mat3 t = ellipsoid_normalizer(e);
  return seg_point(t * (a - e.center), t * (b - e.center), Vec3::Zero(), 1.0);
}

// Quadratic c2 t^2 + 2 c1 t + c0 of the cone form along the carrier line of a-b.
struct ConeQuadratic {
  double c2, c1, c0;
  double discriminant() const { return c1 * c1 - c2 * c0; }
};

inline Mat3 cone_matrix(const Cone& cone) {
  const double ct = std::cos(cone.half_angle);
  return cone.axis * cone.axis.transpose() - ct * ct * Mat3::Identity();
}

inline ConeQuadratic cone_quadratic(const Vec3& a, const Vec3& b, const Cone& cone) {
  const Mat3 m = cone_matrix(cone);
  const Vec3 s = b - a;
  const Vec3 delta = a - cone.vertex;
  return {s.dot(m * s), s.dot(m * delta), delta.dot(m * delta)};
}

// Line-based test: free only when the carrier line misses the (double,
// unbounded) cone, i.e. the discriminant is negative and c2 != 0.
inline Clearance seg_cone(const Vec3& a, const Vec3& b, const Cone& cone) {
  detail::require_segment(a, b);
  const ConeQuadratic q = cone_quadratic(a, b, cone);
  const double delta = q.discriminant();
  const bool c2_zero = std::abs(q.c2) <= 1e-12 * (b - a).squaredNorm();
  Clearance c;
  c.interferes = c2_zero || !(delta < 0);
  c.distance = c.interferes ? 0.0 : std::numeric_limits<double>::infinity();
  c.branch = c2_zero ? "axis-parallel" : (delta < 0 ? "line-miss" : "line-hit");
  c.param_j = delta;
  return c;
}

// Whether point x lies inside the bounded solid cone (used for sampling checks).
inline bool inside_cone(const Vec3& x, const Cone& cone) {
  const Vec3 r = x - cone.vertex;
  const double along = r.dot(cone.axis);
  if (along < 0 || along > cone.height) return false;
  return (r - along * cone.axis).norm() <= along * std::tan(cone.half_angle);
}

inline Clearance seg_obstacle(const Vec3& a, const Vec3& b, const Shape& shape,
                              const ClearanceSpec& spec) {
  const double eps = spec.cable_obstacle;
  return std::visit(
      [&](const auto& s) -> Clearance {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, TriMesh>) return seg_mesh(a, b, s, eps);
        else if constexpr (std::is_same_v<T, Cylinder>) return seg_cylinder(a, b, s, eps);
        else if constexpr (std::is_same_v<T, Sphere>) return seg_sphere(a, b, s, eps);
        else if constexpr (std::is_same_v<T, Ellipsoid>) return seg_ellipsoid(a, b, s);
        else return seg_cone(a, b, s);
      },
      shape);
}

// The shape expressed in the world frame for the given link frames.
inline Shape world_shape(const Obstacle& o, const LinkFrames& f) {
  if (o.link == 0) return o.shape;
  const Vec3 p = f.origin.at(static_cast<std::size_t>(o.link));
  const Mat3 r = f.rotation.at(static_cast<std::size_t>(o.link));
  auto tf = [&](const Vec3& x) -> Vec3 { return p + r * x; };
  return std::visit(
      [&](const auto& s) -> Shape {
        using T = std::decay_t<decltype(s)>;
        T w = s;
        if constexpr (std::is_same_v<T, TriMesh>) {
          for (auto& v : w.vertices) v = tf(v);
        } else if constexpr (std::is_same_v<T, Cylinder>) {
          w.a = tf(s.a);
          w.b = tf(s.b);
        } else if constexpr (std::is_same_v<T, Sphere>) {
          w.center = tf(s.center);
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          w.center = tf(s.center);
          w.shape = r * s.shape * r.transpose();
        } else {
          w.vertex = tf(s.vertex);
          w.axis = r * s.axis;
        }
        return w;
      },
      o.shape);
}

// Axis-aligned box as 12 triangles with outward winding.
inline TriMesh make_box(const Vec3& center, const Vec3& size) {
  TriMesh m;
  const Vec3 h = 0.5 * size;
  for (int k = 0; k < 8; ++k) {
    m.vertices.push_back(center + Vec3((k & 1) ? h.x() : -h.x(), (k & 2) ? h.y() : -h.y(),
                                       (k & 4) ? h.z() : -h.z()));
  }
  m.triangles = {{0, 2, 1}, {1, 2, 3}, {4, 5, 6}, {5, 7, 6}, {0, 1, 4}, {1, 5, 4},
                 {2, 6, 3}, {3, 6, 7}, {0, 4, 2}, {2, 4, 6}, {1, 3, 5}, {3, 7, 5}};
  return m;
}

struct OracleResult {
  bool interferes = false;
  std::string pair;  // first offending pair, empty when free
};

inline std::string segment_label(int i) { return "seg" + std::to_string(i); }
inline std::string obstacle_label(const Obstacle& o, std::size_t k) {
  return o.name.empty() ? "obs" + std::to_string(k) : o.name;
}

// Point-wise interference check of every cable-cable and cable-obstacle pair.
// Segments of the same cable are never paired.
inline OracleResult pose_interference_oracle(const RobotModel& model, const Pose& q,
                                             const std::vector<Obstacle>& obstacles,
                                             const ClearanceSpec& spec) {
  const LinkFrames f = link_frames(model, q);
  const std::size_t m = model.segments.size();
  std::vector<Vec3> a(m);
  std::vector<Vec3> b(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& s = model.segments[i];
    a[i] = point_position(f, s.start_link, s.start);
    b[i] = point_position(f, s.end_link, s.end);
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (model.segments[i].cable == model.segments[j].cable) continue;
      if (seg_seg(a[i], b[i], a[j], b[j], spec.cable_cable).interferes) {
        return {true, segment_label(static_cast<int>(i)) + "-" + segment_label(static_cast<int>(j))};
      }
    }
  }
  for (std::size_t k = 0; k < obstacles.size(); ++k) {
    const Shape w = world_shape(obstacles[k], f);
    for (std::size_t i = 0; i < m; ++i) {
      if (seg_obstacle(a[i], b[i], w, spec).interferes) {
        return {true, segment_label(static_cast<int>(i)) + "-" + obstacle_label(obstacles[k], k)};
      }
    }
  }
  return {};
}

}  // namespace rayspace
